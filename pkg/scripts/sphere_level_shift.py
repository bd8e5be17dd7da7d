"""Show where the sphere levels sit when |m| exceeds |mu|.

The structure function vanishes at x = |m| - |mu| when |m| > |mu|, so the
module of dimension p+1 starts at the larger index root and its level is
N = p + 1 + max(|m|, |mu|) rather than p + 1 + |mu|.
"""
from quadspec.repfinder import find_representations


def level(p, mu, alpha, R):
    N = p + 1 + abs(mu)
    return -alpha**2 / (2 * N**2) + (N**2 - 1) / (2 * R**2)


def main() -> None:
    mu, alpha, R = 0.5, 1.0, 2.0
    print(f"{'m':>5} {'p':>3} {'E found':>18} {'E at N=p+1+|mu|':>18} {'E at N=p+1+max':>18}")
    for m in (0.5, 1.5, 2.5):
        for p in range(3):
            (rep,) = [r for r in find_representations("miczs3", {"m": m, "mu": mu, "alpha": alpha, "R": R}, p)
                      if r.accepted]
            shifted = level(p + max(abs(m) - abs(mu), 0), mu, alpha, R)
            print(f"{m:>5} {p:>3} {rep.E:>18.12g} {level(p, mu, alpha, R):>18.12g} {shifted:>18.12g}")


if __name__ == "__main__":
    main()
