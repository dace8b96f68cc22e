"""Compare #End(X_i) of the cusp with q^7 times jet-space counts #L_m, for several i and m.

Shows which jet order m matches each truncation level i.

    python3 scripts/cusp_factorization_scan.py --levels 4,5 --primes 2,3
"""

import argparse

from autarc.autoarc import endo_presentation, jet_presentation
from autarc.count import count_points
from autarc.fatpoints import AdmissibleSystem
from autarc.polyring import parse_poly


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--levels", default="4,5")
    ap.add_argument("--primes", default="2,3")
    args = ap.parse_args()
    levels = [int(x) for x in args.levels.split(",")]
    primes = [int(x) for x in args.primes.split(",")]

    f = parse_poly("y^2 - x^3", ["x", "y"])
    system = AdmissibleSystem(germ=f)
    jets = {}
    for i in levels:
        for q in primes:
            end = count_points(endo_presentation(system.level(i).algebra), q)
            matches = []
            for m in range(0, 2 * i):
                key = (m, q)
                if key not in jets:
                    jets[key] = count_points(jet_presentation(f, m), q)
                if q ** 7 * jets[key] == end:
                    matches.append(m)
            print(f"i={i} q={q}: #End(X_i) = {end}; q^7 #L_m matches for m in {matches}")


if __name__ == "__main__":
    main()
