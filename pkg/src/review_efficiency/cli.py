"""Command line: ``review-efficiency {validate,score,analyze}``.

Exit codes: 0 success, 1 validation failure, 2 I/O failure,
3 statistical-domain failure.
"""

from __future__ import annotations

import argparse
import sys
from dataclasses import dataclass
from pathlib import Path
from typing import Optional, Sequence

from . import analysis, ingest
from .report import ChartSpec, RadarSubject, emit_table, format_rows, render_radar_svg, write_analysis
from .scoring import efficiency_summary
from .stats import UndefinedStatisticError
from .survey import ContractViolation, ValidationError, validate_response

EXIT_OK, EXIT_INVALID, EXIT_IO, EXIT_DOMAIN = 0, 1, 2, 3


@dataclass(frozen=True)
class RunConfig:
    fixtures: tuple[str, ...] = ()
    responses: Optional[Path] = None
    journals: Optional[Path] = None
    prescored: Optional[Path] = None
    out: Path = Path("out")
    measures: tuple[str, ...] = ("e1", "e2")
    group_by: str = "index"
    charts: bool = False
    fmt: str = "md"
    recompute: bool = False

    @property
    def carve_journal(self) -> Optional[str]:
        if self.group_by.startswith("journal:"):
            return self.group_by.split(":", 1)[1]
        return None


def _config(args: argparse.Namespace) -> RunConfig:
    fixtures = []
    for item in args.fixture or []:
        fixtures += [f.strip() for f in item.split(",") if f.strip()]
    unknown = [f for f in fixtures if f not in ingest.FIXTURE_NAMES]
    if unknown:
        raise ContractViolation(
            f"unknown fixture(s) {', '.join(unknown)}; choose from {', '.join(ingest.FIXTURE_NAMES)}"
        )
    if not fixtures and not (args.responses or args.prescored):
        raise ContractViolation("give --fixture, --responses or --prescored")
    if args.group_by != "index" and not args.group_by.startswith("journal:"):
        raise ContractViolation("--group-by takes 'index' or 'journal:<id>'")
    measures = ("e1", "e2") if args.measure == "both" else (args.measure,)
    return RunConfig(
        fixtures=tuple(fixtures),
        responses=Path(args.responses) if args.responses else None,
        journals=Path(args.journals) if args.journals else None,
        prescored=Path(args.prescored) if args.prescored else None,
        out=Path(args.out),
        measures=measures,
        group_by=args.group_by,
        charts=args.charts,
        fmt=args.format,
        recompute=getattr(args, "recompute", False),
    )


def _datasets(config: RunConfig) -> dict[str, ingest.Dataset]:
    out = {}
    if config.fixtures:
        fixtures = ingest.load_fixtures()
        out.update({name: fixtures[name] for name in config.fixtures})
    if config.responses or config.prescored:
        out["input"] = ingest.load_dataset(
            config.responses, config.journals, config.prescored, name="input"
        )
    return out


def _log(msg: str) -> None:
    print(msg, file=sys.stderr)


def cmd_validate(config: RunConfig) -> int:
    issues = []
    for name, ds in _datasets(config).items():
        known = [j.journal_id for j in ds.journals] if ds.journals else None
        for response in ds.responses:
            issues += [f"{name}: {i}" for i in validate_response(response, journals=known)]
    for issue in issues:
        print(issue)
    if issues:
        return EXIT_INVALID
    print("valid")
    return EXIT_OK


def _write_table(path_stem: Path, summaries) -> list[Path]:
    paths = []
    for fmt in ("md", "csv"):
        path = path_stem.with_suffix(f".{fmt}")
        path.write_text(emit_table(summaries, fmt=fmt), encoding="utf-8")
        paths.append(path)
    return paths


def _residual_rows(subjects: Sequence[ingest.ScoredSubject]) -> list[list[str]]:
    rows = [["subject", "field", "computed", "published", "difference"]]
    for s in subjects:
        if s.wf is None or s.printed is None:
            continue
        computed = efficiency_summary(s.subject_id, s.wf)
        pairs = (("sum", computed.sum_wf), ("mean", computed.mean_wf), ("e1", computed.e1_percent),
                 ("area", computed.hexagon_area_au), ("e2", computed.e2_percent))
        for field_name, value in pairs:
            published = getattr(s.printed, field_name)
            if published is None:
                continue
            rows.append([s.subject_id, field_name, f"{value:.4f}", f"{published:g}",
                         f"{value - published:+.4f}"])
    return rows


def cmd_score(config: RunConfig) -> int:
    written = []
    for name, ds in _datasets(config).items():
        target = config.out / name
        target.mkdir(parents=True, exist_ok=True)
        if ds.responses:
            editors = analysis.editor_subjects(ds)
            written += _write_table(target / "editors", [s.summary for s in editors])
        journal_level = analysis.journal_subjects(ds) + analysis.prescored_subjects(
            ds, prefer_published=False
        )
        stem = "editors_prescored" if ds.subject_level == "editor" else "journals"
        written += _write_table(target / stem, [s.summary for s in journal_level])
        with_wf = [s for s in journal_level if s.wf is not None]
        if len(with_wf) < len(journal_level):
            _log(f"warning: {name}: {len(journal_level) - len(with_wf)} subject(s) carry "
                 "published E values only; no per-question WFs, no radar charts")
        published = [s for s in ds.prescored.values() if s.printed is not None and s.wf is not None]
        if published:
            written += _write_table(
                target / "published",
                [analysis.summary_from_printed(s.subject_id, s.printed, s.wf) for s in published],
            )
            path = target / "residuals.csv"
            path.write_text(format_rows(_residual_rows(published), "csv"), encoding="utf-8")
            written.append(path)
        if config.charts and with_wf:
            chart_dir = target / "radar"
            chart_dir.mkdir(exist_ok=True)
            for s in with_wf:
                spec = ChartSpec(title=f"{s.subject_id}: E2 = {s.summary.e2_percent:.2f} %",
                                 subjects=(RadarSubject(s.subject_id, s.wf),))
                path = chart_dir / f"{s.subject_id}.svg"
                path.write_text(render_radar_svg(spec), encoding="utf-8")
                written.append(path)
    print(f"score: wrote {len(written)} files to {config.out}")
    return EXIT_OK


def cmd_analyze(config: RunConfig) -> int:
    datasets = _datasets(config)
    prefer = not config.recompute
    groups = {}
    for name, ds in datasets.items():
        if name == "input":
            groups.update(analysis.group_by_index(ds, carve_journal=config.carve_journal,
                                                  prefer_published=prefer))
        else:
            groups[name] = analysis.dataset_subjects(ds, prefer_published=prefer)
    report = analysis.analyze(groups, config.measures)
    written = write_analysis(report, config.out, config.fmt)
    for note in report.notes:
        _log(f"note: {note}")
    taus = " ".join(f"{g}={c.tau_b:.3f}" for g, c in report.coherence.items())
    print(f"analyze: {len(groups)} group(s); tau_b {taus or 'n/a'}; "
          f"wrote {len(written)} files to {config.out}")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="review-efficiency", description="Score and analyse editor peer-review efficiency surveys."
    )
    sub = parser.add_subparsers(dest="command", required=True)
    for name, helptext in (("validate", "check input files"),
                           ("score", "write efficiency tables and radar charts"),
                           ("analyze", "correlations, coherence, group tests, rank-size fits")):
        p = sub.add_parser(name, help=helptext)
        p.add_argument("--fixture", "--fixtures", action="append",
                       help="bundled dataset(s): wos, sci, jscs (comma separated or repeated)")
        p.add_argument("--responses", help="responses.csv or .json")
        p.add_argument("--journals", help="journals.csv")
        p.add_argument("--prescored", help="prescored.csv")
        p.add_argument("--out", default="out", help="output directory")
        p.add_argument("--measure", choices=("e1", "e2", "both"), default="both")
        p.add_argument("--group-by", default="index", help="index or journal:<id>")
        p.add_argument("--charts", action="store_true", help="render radar charts")
        p.add_argument("--format", choices=("md", "csv"), default="md")
        if name == "analyze":
            p.add_argument("--recompute", action="store_true",
                           help="use values recomputed from WFs instead of published columns")
    return parser


COMMANDS = {"validate": cmd_validate, "score": cmd_score, "analyze": cmd_analyze}


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        config = _config(args)
        return COMMANDS[args.command](config)
    except ingest.ParseError as exc:
        for err in exc.errors:
            print(err)
        return EXIT_INVALID
    except (ValidationError, ContractViolation) as exc:
        print(f"error: {exc}")
        return EXIT_INVALID
    except OSError as exc:
        _log(f"I/O error: {exc}")
        return EXIT_IO
    except UndefinedStatisticError as exc:
        _log(f"statistics error: {exc}")
        return EXIT_DOMAIN


if __name__ == "__main__":
    sys.exit(main())
