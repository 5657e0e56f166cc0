#!/usr/bin/env python3
"""Residual decay experiment: truncate the zero sum at increasing depths and
compare the achieved residual with the predicted exp(-(pi/2) sqrt(tau/(2a)))
envelope.  Writes a CSV and optionally a gnuplot script.

  python scripts/residual_decay.py --a 0.5 --x 0.5 --depths 25,50,100,200,400 \
      --precision 192 --cache-dir ~/.zetasum-cache --out decay.csv
"""

import argparse
import csv
import sys

from zetasum import NumericContext, SumRuleParams, evaluate_sumrule, load_or_compute


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--a", default="0.5")
    ap.add_argument("--x", default="0.5")
    ap.add_argument("--depths", default="25,50,100,200,400")
    ap.add_argument("--precision", type=int, default=192)
    ap.add_argument("--cache-dir", default=None)
    ap.add_argument("--out", default=None, help="CSV path (default stdout)")
    ap.add_argument("--plot-script", default=None)
    args = ap.parse_args(argv)

    depths = sorted(int(d) for d in args.depths.split(","))
    ctx = NumericContext(args.precision)
    mp = ctx.mp
    store = load_or_compute(depths[-1], ctx, args.cache_dir)
    a = mp.mpf(args.a)

    rows = []
    for depth in depths:
        params = SumRuleParams(a=args.a, x=args.x, n_zeros=depth)
        rep = evaluate_sumrule(params, store, ctx)
        tau_next = store[depth - 1].tau
        model = mp.exp(-mp.pi / 2 * mp.sqrt(tau_next / (2 * a)))
        rows.append({
            "n_zeros": depth,
            "tau_last": ctx.nstr(tau_next),
            "abs_residual": ctx.nstr(abs(rep.residual)),
            "tail_bound": ctx.nstr(rep.tail_bound),
            "decay_model": ctx.nstr(model),
            "status": "PASS" if rep.passes() else "FAIL",
        })

    out = open(args.out, "w", newline="") if args.out else sys.stdout
    writer = csv.DictWriter(out, fieldnames=list(rows[0]))
    writer.writeheader()
    writer.writerows(rows)
    if args.out:
        out.close()

    if args.plot_script:
        data = args.out or "decay.csv"
        with open(args.plot_script, "w") as f:
            f.write("\n".join([
                "set datafile separator ','",
                "set logscale y",
                "set xlabel 'zeros summed'",
                "set ylabel 'magnitude'",
                f"plot '{data}' using 1:3 with linespoints title 'residual', \\",
                f"     '{data}' using 1:4 with lines title 'tail bound', \\",
                f"     '{data}' using 1:5 with lines title 'decay model'",
                ""]))
    return 0


if __name__ == "__main__":
    sys.exit(main())
