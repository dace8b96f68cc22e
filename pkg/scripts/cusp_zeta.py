"""Blind computation of the cuspidal cubic's auto-arc classes and series.

Counts End(X_i) of the m-adic truncations of y^2 = x^3, interpolates each class
with hold-out checks, prints the series under every normalization policy, and
compares against the closed form.

    python3 scripts/cusp_zeta.py --levels 3 --cache cusp.jsonl
"""

import argparse
import time

from autarc.autoarc import endo_presentation
from autarc.cli import CountCache
from autarc.count import first_primes, interpolate_presentation
from autarc.fatpoints import AdmissibleSystem
from autarc.zeta import NormalizationPolicy, assemble_zeta, cusp_closed_form


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--levels", type=int, default=3)
    ap.add_argument("--degree-bound", type=int, default=10,
                    help="interpolation degree bound (the class degree is 2i+3 for i >= 1)")
    ap.add_argument("--cache")
    args = ap.parse_args()

    system = AdmissibleSystem.from_germ("y^2 - x^3")
    counter = CountCache(args.cache).counter(10 ** 9)
    classes, ranks = [], []
    for i in range(args.levels + 1):
        t = time.time()
        alg = system.level(i).algebra
        pres = endo_presentation(alg)
        bound = min(args.degree_bound, pres.nvars)
        res = interpolate_presentation(pres, first_primes(bound + 3), bound, counter=counter)
        classes.append(res.cls)
        ranks.append(alg.rank)
        print(f"level {i}: rank {alg.rank}, {pres.nvars} vars, [A_{i}] = {res.cls}  "
              f"(hold-outs {[h[0] for h in res.holdout]}, {time.time() - t:.1f}s)")

    policies = {
        "raw": NormalizationPolicy("raw"),
        "degree": NormalizationPolicy("degree"),
        "explicit 1,3,5,..": NormalizationPolicy("explicit", tuple(2 * i + 1 for i in range(len(classes)))),
    }
    for name, pol in policies.items():
        series = assemble_zeta(classes, pol, ranks)
        print(f"{name:>18}: " + ", ".join(map(str, series.coefficients)))
    closed = cusp_closed_form().expand(len(classes) - 1)
    print(f"{'closed form':>18}: " + ", ".join(map(str, closed.coefficients)))


if __name__ == "__main__":
    main()
