"""Write the synthetic CSVs used by configs/desk.ini into data/."""

import argparse
from pathlib import Path

from ocens.harness.synth import TWO_GAUSSIAN, UNIFORM_RING, gen_synthetic

ROOT = Path(__file__).resolve().parent.parent

DESK = [
    ("gauss_sep5", TWO_GAUSSIAN, 5.0),
    ("gauss_sep0", TWO_GAUSSIAN, 0.0),
    ("ring_sep4", UNIFORM_RING, 4.0),
]


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--out", default=str(ROOT / "data"))
    ap.add_argument("--seed", type=int, default=1)
    ap.add_argument("--n-pos", type=int, default=300)
    ap.add_argument("--n-neg", type=int, default=300)
    ap.add_argument("--dim", type=int, default=4)
    args = ap.parse_args()
    for name, kind, sep in DESK:
        path = gen_synthetic(kind, args.n_pos, args.n_neg, args.dim, sep, args.seed,
                             Path(args.out) / f"{name}.csv")
        print(path)


if __name__ == "__main__":
    main()
