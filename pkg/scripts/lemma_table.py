"""Table of End and Aut counts of monomial fat points k[x_1..x_d]/m^n against the closed forms.

    python3 scripts/lemma_table.py --max-d 2 --max-n 4 --primes 2,3
"""

import argparse

from autarc.autoarc import aut_presentation, endo_presentation
from autarc.count import BudgetExceeded, count_points
from autarc.fatpoints import lemma_classes, monomial_fatpoint


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--max-d", type=int, default=2)
    ap.add_argument("--max-n", type=int, default=4)
    ap.add_argument("--primes", default="2,3")
    ap.add_argument("--budget", type=int, default=10 ** 7)
    args = ap.parse_args()
    primes = [int(p) for p in args.primes.split(",")]

    print(f"{'d':>2} {'n':>2} {'rank':>4}  {'End class':<12} {'Aut class':<28} counts (End, Aut) per q")
    for d in range(1, args.max_d + 1):
        for n in range(2, args.max_n + 1):
            fp = monomial_fatpoint(d, n)
            end, aut = lemma_classes(d, n)
            cells = []
            for q in primes:
                try:
                    e = count_points(endo_presentation(fp.algebra), q, args.budget)
                    a = count_points(aut_presentation(fp.algebra), q, args.budget)
                except BudgetExceeded:
                    cells.append(f"q={q}: budget")
                    continue
                mark = "" if (e, a) == (end.evaluate_at(q), aut.evaluate_at(q)) else " MISMATCH"
                cells.append(f"q={q}: ({e}, {a}){mark}")
            print(f"{d:>2} {n:>2} {fp.rank:>4}  {str(end):<12} {str(aut):<28} " + "; ".join(cells))


if __name__ == "__main__":
    main()
