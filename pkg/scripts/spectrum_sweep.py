"""Tabulate accepted energies for each system against its closed-form level formula."""
import argparse

from quadspec.repfinder import find_representations
from quadspec.systems import principal_quantum_number

CASES = {
    "micz3d": {"m": 0.5, "s": 1.0, "c1": 0.3, "c2": 0.2},
    "osc4d": {"m": 0.5, "s": 1.0, "c1": 0.3, "c2": 0.2, "omega": 1.0},
    "miczs3": {"m": 0.5, "mu": 1.0, "alpha": 1.0, "R": 2.0},
}


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--p-max", type=int, default=6)
    args = ap.parse_args()
    for system, ch in CASES.items():
        print(f"# {system} {ch}")
        print(f"{'p':>3} {'E':>22} {'u':>10}")
        for p in range(args.p_max + 1):
            for rep in find_representations(system, ch, p):
                if rep.accepted:
                    print(f"{p:>3} {rep.E:>22.15g} {rep.u:>10.4g}")
    lvl = principal_quantum_number(0, 0, 0.5, 1.0, 0.3, 0.2)
    print(f"# parabolic n1=n2=0 with m=0.5, s=1, c=(0.3, 0.2): n = {lvl.n:g}, "
          f"shifts ({lvl.delta1:.6g}, {lvl.delta2:.6g}), E = {lvl.energy:.15g}")


if __name__ == "__main__":
    main()
