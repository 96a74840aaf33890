"""Gap between the normal-approximation and exact Mann-Whitney p-values.

For every tie-free split of ranks 1..n1+n2 the script compares the
continuity-corrected normal p-value with the exact permutation p-value and
prints the worst absolute gap per (n1, n2).

    python3 scripts/mann_whitney_approximation.py --max-n 7
"""

import argparse
import itertools
from functools import lru_cache

from review_efficiency.stats import mann_whitney_u


@lru_cache(maxsize=None)
def _count(u, n1, n2):
    """Number of arrangements of n1 and n2 items with U statistic u."""
    if u < 0:
        return 0
    if n1 == 0 or n2 == 0:
        return 1 if u == 0 else 0
    return _count(u - n2, n1 - 1, n2) + _count(u, n1, n2 - 1)


def exact_p(u, n1, n2):
    total = sum(_count(k, n1, n2) for k in range(n1 * n2 + 1))
    tail = sum(_count(k, n1, n2) for k in range(int(min(u, n1 * n2 - u)) + 1))
    return min(1.0, 2 * tail / total)


def worst_gap(n1, n2):
    worst = 0.0
    ranks = range(1, n1 + n2 + 1)
    for chosen in itertools.combinations(ranks, n1):
        rest = [r for r in ranks if r not in chosen]
        res = mann_whitney_u(list(chosen), rest)
        worst = max(worst, abs(res.p_two_sided - exact_p(res.u_statistic, n1, n2)))
    return worst


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--max-n", type=int, default=6)
    parser.add_argument("--threshold", type=float, default=0.02)
    args = parser.parse_args()

    sizes = range(1, args.max_n + 1)
    print("n1\\n2" + "".join(f"{n:>7d} " for n in sizes))
    for n1 in sizes:
        gaps = [worst_gap(n1, n2) for n2 in sizes]
        cells = "".join(f"{g:7.3f}{'*' if g > args.threshold else ' '}" for g in gaps)
        print(f"{n1:>5d}{cells}")
    print(f"* worst gap above {args.threshold}")


if __name__ == "__main__":
    main()
