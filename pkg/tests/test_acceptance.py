"""Acceptance criteria, one test per criterion.

Each test appends a ``[C#] PASS|FAIL detail`` line that the terminal summary
prints under "acceptance criteria".
"""

import itertools

import numpy as np
import pytest

from conftest import ACCEPTANCE_LINES
from oracles import exact_two_sided_p, kendall_tau_b_bruteforce, shoelace_area
from review_efficiency.analysis import dataset_subjects
from review_efficiency.cli import main
from review_efficiency.scoring import (
    descriptive_stats,
    e1,
    e2,
    efficiency_summary,
    hexagon_area,
)
from review_efficiency.stats import (
    STRONG_CORRELATION,
    FitModel,
    compare_groups,
    kendall_tau_b,
    mann_whitney_u,
    pearson,
    rank_size_fit,
)
from review_efficiency.survey import WfVector


def record(cid, failures, detail=""):
    status = "FAIL" if failures else "PASS"
    text = "; ".join(failures) if failures else detail
    ACCEPTANCE_LINES.append(f"[{cid}] {status} {text}".rstrip())
    assert not failures, text


def check(failures, ok, message):
    if not ok:
        failures.append(message)


def close(actual, expected, tol):
    return abs(actual - expected) <= tol + 1e-12


# ---------------------------------------------------------------- C1


def test_c1_hexagon_maximum():
    failures = []
    area = hexagon_area(WfVector((4,) * 6))
    check(failures, close(area, 41.569, 0.001), f"max area {area:.6f} != 41.569")
    check(failures, f"{area:.2f}" == "41.57", f"max area prints {area:.2f}")
    record("C1", failures, f"max area {area:.4f}")


# ---------------------------------------------------------------- C2


def test_c2_wos_table_reconstruction(wos_rows):
    failures = []
    for row in wos_rows:
        s = efficiency_summary(row.subject_id, row.wf)
        p = row.printed
        sid = row.subject_id
        check(failures, round(s.sum_wf, 1) == p.sum, f"{sid} sum {s.sum_wf:.2f} vs {p.sum}")
        check(failures, round(s.mean_wf, 2) == p.mean, f"{sid} mean {s.mean_wf:.4f} vs {p.mean}")
        check(failures, close(s.e1_percent, p.e1, 0.15), f"{sid} E1 {s.e1_percent:.2f} vs {p.e1}")
        check(failures, close(s.hexagon_area_au, p.area, 0.1),
              f"{sid} area {s.hexagon_area_au:.2f} vs {p.area}")
        check(failures, close(s.e2_percent, p.e2, 0.25), f"{sid} E2 {s.e2_percent:.2f} vs {p.e2}")
    record("C2", failures, f"{len(wos_rows)} rows within tolerance")


# ---------------------------------------------------------------- C3


def test_c3_descriptive_footer(wos_rows):
    failures = []
    avg = descriptive_stats([r.printed.mean for r in wos_rows])
    eff = descriptive_stats([r.printed.e2 for r in wos_rows])
    check(failures, close(avg.mean, 3.135, 0.001), f"Average mean {avg.mean:.5f}")
    check(failures, close(avg.sd, 0.4710, 0.0005), f"Average SD {avg.sd:.5f}")
    check(failures, close(avg.cv, 0.150, 0.001), f"Average CV {avg.cv:.5f}")
    check(failures, close(eff.mean, 63.00, 0.05), f"E2 mean {eff.mean:.4f}")
    check(failures, close(eff.sd, 17.466, 0.01), f"E2 SD {eff.sd:.4f}")
    record("C3", failures, f"Average {avg.mean:.4f}/{avg.sd:.4f}/{avg.cv:.4f}; "
                           f"E2 {eff.mean:.3f}/{eff.sd:.3f}")


# ---------------------------------------------------------------- C4


def test_c4_kendall_coherence(fixtures):
    failures, got = [], {}
    for name, expected in (("wos", 0.972), ("sci", 0.973), ("jscs", 0.949)):
        subjects = dataset_subjects(fixtures[name])
        tau = kendall_tau_b([s.measure("e1") for s in subjects],
                            [s.measure("e2") for s in subjects]).tau_b
        got[name] = tau
        check(failures, close(tau, expected, 0.001), f"{name} tau_b {tau:.4f} vs {expected}")
    record("C4", failures, " ".join(f"{k}={v:.4f}" for k, v in got.items()))


# ---------------------------------------------------------------- C5


def test_c5_pearson_suite(wos_rows):
    failures, got = [], []
    q = [[r.wf[i] for r in wos_rows] for i in range(6)]
    pairs = (
        ("Q1-Q2", q[0], q[1], 0.93),
        ("Q1-Q3", q[0], q[2], 0.88),
        ("Q1-Average", q[0], [r.printed.mean for r in wos_rows], 0.84),
        ("E1-E2", [r.printed.e1 for r in wos_rows], [r.printed.e2 for r in wos_rows], 0.98),
    )
    for name, x, y, expected in pairs:
        res = pearson(x, y)
        got.append(f"{name}={res.r:.3f}")
        check(failures, close(res.r, expected, 0.01), f"{name} r {res.r:.3f} vs {expected}")
        check(failures, res.strong == (res.r >= STRONG_CORRELATION) and res.strong,
              f"{name} not flagged strong")
    record("C5", failures, " ".join(got))


# ---------------------------------------------------------------- C6


def test_c6_mann_whitney_verdicts(fixtures):
    failures, got = [], []
    expected = {("wos", "sci"): False, ("wos", "jscs"): False, ("sci", "jscs"): True}
    for measure in ("e1", "e2"):
        series = {name: [s.measure(measure) for s in dataset_subjects(fixtures[name])]
                  for name in ("wos", "sci", "jscs")}
        check(failures, [len(v) for v in series.values()] == [11, 13, 14], "group sizes")
        for pair, res in compare_groups(series).items():
            got.append(f"{measure}:{pair[0]}-{pair[1]} p={res.p_two_sided:.4f}")
            check(failures, res.significant == expected[pair],
                  f"{measure} {pair} significant={res.significant}")
    record("C6", failures, " ".join(got))


# ---------------------------------------------------------------- C7


def test_c7_correlation_properties():
    failures = []
    rng = np.random.default_rng(20260101)

    worst_affine = 0.0
    for _ in range(200):
        x, y = rng.normal(size=(2, rng.integers(3, 30)))
        a, b = rng.uniform(0.1, 10), rng.uniform(-50, 50)
        worst_affine = max(worst_affine, abs(pearson(a * x + b, y).r - pearson(x, y).r))
    check(failures, worst_affine < 1e-9, f"affine invariance off by {worst_affine:.2e}")

    worst_tau, done = 0.0, 0
    while done < 500:
        n = int(rng.integers(2, 25))
        x, y = rng.integers(0, 6, size=(2, n))
        if len(set(x)) < 2 or len(set(y)) < 2:
            continue
        worst_tau = max(worst_tau, abs(kendall_tau_b(x, y).tau_b - kendall_tau_b_bruteforce(x, y)))
        done += 1
    check(failures, worst_tau <= 1e-12, f"tau_b vs oracle off by {worst_tau:.2e}")

    worst_mw, where = 0.0, None
    for n1, n2 in itertools.product(range(1, 7), repeat=2):
        total = n1 + n2
        for ranks in itertools.combinations(range(1, total + 1), n1):
            rest = [r for r in range(1, total + 1) if r not in ranks]
            res = mann_whitney_u(list(ranks), rest)
            gap = abs(res.p_two_sided - float(exact_two_sided_p(int(res.u_statistic), n1, n2)))
            if gap > worst_mw:
                worst_mw, where = gap, (n1, n2)
    check(failures, worst_mw <= 0.02,
          f"Mann-Whitney normal vs exact gap {worst_mw:.4f} at n1,n2={where}")
    record("C7", failures, f"affine {worst_affine:.1e}, tau {worst_tau:.1e}, MW gap {worst_mw:.4f}")


# ---------------------------------------------------------------- C8


def test_c8_scoring_properties():
    failures = []
    rng = np.random.default_rng(8)
    vectors = [WfVector(tuple(v)) for v in rng.uniform(1, 4, size=(1000, 6))]

    perm_gap = max(
        abs(e1(WfVector(tuple(np.array(v.wf)[rng.permutation(6)]))) - e1(v)) for v in vectors
    )
    check(failures, perm_gap < 1e-12, f"E1 permutation gap {perm_gap:.2e}")

    spread = hexagon_area(WfVector((4, 4, 4, 1, 1, 1))) - hexagon_area(WfVector((4, 1, 4, 1, 4, 1)))
    check(failures, spread > 7, f"order dependence only {spread:.3f} AU")

    monotone = True
    for v in vectors[:300]:
        i = int(rng.integers(6))
        bumped = list(v.wf)
        bumped[i] = min(4.0, bumped[i] + float(rng.uniform(0.01, 1)))
        if bumped[i] == v.wf[i]:
            continue
        w = WfVector(tuple(bumped))
        monotone &= e1(w) > e1(v) and e2(w) > e2(v) and hexagon_area(w) > hexagon_area(v)
    check(failures, monotone, "monotonicity violated")

    rel = max(abs(hexagon_area(v) - shoelace_area(list(v.wf))) / shoelace_area(list(v.wf))
              for v in vectors)
    check(failures, rel <= 1e-9, f"shoelace relative gap {rel:.2e}")
    record("C8", failures, f"order spread {spread:.3f} AU, shoelace gap {rel:.1e}")


# ---------------------------------------------------------------- C9


def test_c9_rank_size(fixtures):
    failures = []
    line = rank_size_fit([50 - 3 * r for r in range(1, 12)], FitModel.LINEAR)
    check(failures, np.allclose(line.params, (50, -3), atol=1e-9, rtol=0), f"linear params {line.params}")
    check(failures, abs(line.r_squared - 1) <= 1e-9, f"linear R2 {line.r_squared}")
    power = rank_size_fit([95 * r**-0.3 for r in range(1, 15)], FitModel.POWER)
    check(failures, np.allclose(power.params, (95, -0.3), atol=1e-9, rtol=1e-9), f"power params {power.params}")
    check(failures, abs(power.r_squared - 1) <= 1e-9, f"power R2 {power.r_squared}")

    comparisons = []
    for name in ("wos", "sci", "jscs"):
        values = [s.measure("e1") for s in dataset_subjects(fixtures[name])]
        lin = rank_size_fit(values, FitModel.LINEAR)
        pw = rank_size_fit(values, FitModel.POWER)
        comparisons.append(f"{name} lin {lin.r_squared:.3f} pow {pw.r_squared:.3f}")
        comparisons[-1] += " (linear>=power)" if lin.r_squared >= pw.r_squared else ""
    wins = sum("linear>=power" in c for c in comparisons)
    check(failures, wins >= 2, f"linear R2 >= power R2 in only {wins} of 3 groups")
    record("C9", failures, "; ".join(comparisons))


# ---------------------------------------------------------------- C10


def test_c10_determinism(tmp_path, capsys):
    failures = []
    snapshots = []
    for run in ("a", "b"):
        out = tmp_path / run
        check(failures, main(["score", "--fixture", "wos", "--charts", "--out", str(out)]) == 0,
              f"run {run} failed")
        snapshots.append({str(p.relative_to(out)): p.read_bytes()
                          for p in sorted(out.rglob("*")) if p.is_file()})
    capsys.readouterr()
    svgs = sum(name.endswith(".svg") for name in snapshots[0])
    check(failures, svgs == 11, f"{svgs} radar charts")
    check(failures, snapshots[0] == snapshots[1], "artifacts differ between runs")
    record("C10", failures, f"{len(snapshots[0])} artifacts identical, {svgs} SVGs")


@pytest.fixture(autouse=True, scope="module")
def _header():
    ACCEPTANCE_LINES.clear()
    yield
