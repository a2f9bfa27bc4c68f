"""Compare the Iman-Davenport p-value with exact permutation enumeration.

Every one of the (k!)^N rank tables is enumerated for small N and k; the
exact p-value of an observed chi-square is the fraction of tables whose
statistic is at least as large.
"""

import argparse
import itertools
from collections import Counter

import numpy as np

from ocens.evaluation import friedman_test


def exact_distribution(n, k):
    perms = [np.array(p, dtype=float) + 1 for p in itertools.permutations(range(k))]
    dist = Counter()
    for rows in itertools.product(perms, repeat=n):
        dist[round(friedman_test(np.array(rows)).statistic, 9)] += 1
    return dist


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("-n", type=int, default=4)
    ap.add_argument("-k", type=int, default=3)
    args = ap.parse_args()
    dist = exact_distribution(args.n, args.k)
    total = sum(dist.values())
    values = sorted(dist)
    print(f"{'chi2':>6} {'exact p':>8} {'F-approx p':>10} {'|diff|':>7}")
    for v in values:
        exact = sum(c for s, c in dist.items() if s >= v - 1e-9) / total
        # any table with this statistic gives the same approximate p
        rows = next(
            np.array(r) for r in itertools.product(
                [np.array(p, float) + 1 for p in itertools.permutations(range(args.k))],
                repeat=args.n)
            if abs(friedman_test(np.array(r)).statistic - v) < 1e-9
        )
        res = friedman_test(rows)
        print(f"{v:6.3f} {exact:8.4f} {res.p_value:10.4f} {abs(exact - res.p_value):7.4f}"
              + ("  (saturated)" if res.saturated else ""))


if __name__ == "__main__":
    main()
