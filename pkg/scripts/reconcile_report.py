"""Compare both readings of the generic structure function with the factored forms."""
import argparse

from quadspec.cli import RunConfig, cmd_reconcile


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--p-max", type=int, default=3)
    args = ap.parse_args()
    report = cmd_reconcile(RunConfig(p_max=args.p_max))
    for row in report.rows:
        head = f"{row['system']:>7} p={row['p']} reading {row.get('reading', '-')} vs {row.get('factored', '-'):>9}"
        if row["outcome"] == "constant":
            print(f"{head}: proportional, ratio {row['constant']:.12g}")
        elif "record" in row:
            print(f"{head}: {row['record']['note']}")
        else:
            print(f"{head}: {row['outcome']}")
    print(report.oracle["outcomes"])


if __name__ == "__main__":
    main()
