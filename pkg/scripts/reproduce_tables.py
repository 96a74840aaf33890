"""Recompute the bundled WoS table from its WF columns and compare with the printed values.

Also reports the descriptive footer and E1/E2 Kendall coherence for all
three bundled datasets, and probes the rows whose printed area cannot be
recovered by checking every ordering of their six WFs.

    python3 scripts/reproduce_tables.py [--tol-area 0.1]
"""

import argparse
import itertools

from review_efficiency.analysis import dataset_subjects
from review_efficiency.ingest import load_fixtures
from review_efficiency.report import emit_table
from review_efficiency.scoring import SIN60, descriptive_stats, efficiency_summary
from review_efficiency.stats import kendall_tau_b


def residual_report(rows, tol_area):
    print(f"{'id':>3} {'field':>5} {'computed':>9} {'printed':>8} {'diff':>8}")
    suspicious = []
    for row in rows:
        s = efficiency_summary(row.subject_id, row.wf)
        for name, value in (("e1", s.e1_percent), ("area", s.hexagon_area_au), ("e2", s.e2_percent)):
            printed = getattr(row.printed, name)
            diff = value - printed
            flag = "  <-" if abs(diff) > (tol_area if name == "area" else 0.25) else ""
            print(f"{row.subject_id:>3} {name:>5} {value:9.3f} {printed:8.2f} {diff:+8.3f}{flag}")
            if flag and name == "area":
                suspicious.append(row)
    return suspicious


def ordering_probe(row):
    """Which cyclic orderings of the WFs come closest to the printed area?"""
    target = row.printed.area / (0.5 * SIN60)
    sums = sorted({
        round(sum(p[i] * p[(i + 1) % 6] for i in range(6)), 6)
        for p in itertools.permutations(row.wf.wf)
    })
    best = min(sums, key=lambda s: abs(s - target))
    print(f"  {row.subject_id}: printed area needs product sum {target:.2f}; "
          f"orderings give {sums[0]:.2f}..{sums[-1]:.2f}, closest {best:.2f} "
          f"(area {0.5 * SIN60 * best:.2f})")


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--tol-area", type=float, default=0.1)
    args = parser.parse_args()

    fixtures = load_fixtures()
    wos = list(fixtures["wos"].prescored.values())
    print("Recomputed WoS table\n")
    print(emit_table([efficiency_summary(r.subject_id, r.wf) for r in wos]))
    print("Residuals against the printed columns\n")
    for row in residual_report(wos, args.tol_area):
        ordering_probe(row)

    print("\nPrinted-column footers and E1/E2 coherence")
    for name, ds in fixtures.items():
        subjects = dataset_subjects(ds)
        e1s = [s.measure("e1") for s in subjects]
        e2s = [s.measure("e2") for s in subjects]
        d1, d2 = descriptive_stats(e1s), descriptive_stats(e2s)
        tau = kendall_tau_b(e1s, e2s)
        print(f"  {name:>4}: n={d1.n:2d}  E1 {d1.mean:6.2f} +- {d1.sd:5.2f}  "
              f"E2 {d2.mean:6.2f} +- {d2.sd:5.2f}  tau_b {tau.tau_b:.3f}")


if __name__ == "__main__":
    main()
