"""Rank-size plots of E1 and E2 for the bundled datasets with power and linear fits.

    python3 scripts/rank_size_figure.py --out figures
"""

import argparse
from pathlib import Path

from review_efficiency.analysis import dataset_subjects
from review_efficiency.ingest import FIXTURE_NAMES, load_fixtures
from review_efficiency.report import render_rank_size_svg
from review_efficiency.stats import FitModel, rank_size_fit


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--out", type=Path, default=Path("figures"))
    parser.add_argument("--recompute", action="store_true",
                        help="use values recomputed from WFs where available")
    args = parser.parse_args()
    args.out.mkdir(parents=True, exist_ok=True)

    fixtures = load_fixtures()
    for measure in ("e1", "e2"):
        pairs = []
        for name in FIXTURE_NAMES:
            subjects = dataset_subjects(fixtures[name], prefer_published=not args.recompute)
            values = [s.measure(measure) for s in subjects]
            labels = [s.subject_id for s in subjects]
            power = rank_size_fit(values, FitModel.POWER, labels)
            linear = rank_size_fit(values, FitModel.LINEAR, labels)
            pairs.append((power, linear))
            print(f"{measure.upper()} {name:>4}: linear {linear.params[0]:7.2f} {linear.params[1]:+6.2f}*r "
                  f"R2={linear.r_squared:.3f} | power {power.params[0]:7.2f}*r^{power.params[1]:+.3f} "
                  f"R2={power.r_squared:.3f}")
        svg = render_rank_size_svg(pairs, list(FIXTURE_NAMES), title=f"Rank-size law for {measure.upper()}",
                                   y_label=f"{measure.upper()} / %")
        path = args.out / f"rank_size_{measure}.svg"
        path.write_text(svg, encoding="utf-8")
        print(f"wrote {path}")


if __name__ == "__main__":
    main()
