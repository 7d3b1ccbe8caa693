"""Mean sup-gap between pre-limit and limit characteristics as n grows.

Both sides are evaluated along the same realized prefix-sum path, so the gap
isolates the kernel approximation rather than path-to-path noise.

    python scripts/characteristics_decay.py --alpha 0.8 --paths 100
"""

import argparse

import numpy as np

from stable_limits import FunctionalF, LevyMeasure, PreLimitKernel, TailLaw, TruncationFn, scaling_constants
from stable_limits.prelimit import characteristic_gaps


def main():
    parser = argparse.ArgumentParser(description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    parser.add_argument("--alpha", type=float, default=0.8)
    parser.add_argument("--p", type=float, default=0.7)
    parser.add_argument("--f", default="sine")
    parser.add_argument("--paths", type=int, default=100)
    parser.add_argument("--n", type=int, nargs="+", default=[100, 1000, 10000])
    parser.add_argument("--seed", type=int, default=0)
    args = parser.parse_args()

    law, measure, h = TailLaw(args.alpha, args.p), LevyMeasure(args.alpha, args.p), TruncationFn()
    f, grid = FunctionalF.parse(args.f), np.arange(1, 51) / 50
    print(f"{'n':>7} {'B1':>10} {'C11':>10} {'C12':>10} {'C22(1)':>10}")
    for n in args.n:
        k = PreLimitKernel(law, scaling_constants(law, n, h), h)
        acc = np.zeros(4)
        for j in range(args.paths):
            samples = law.sample(n, np.random.default_rng([args.seed, n, j]))
            g = characteristic_gaps(k, measure, samples, f, grid)
            acc += [g["B1"].max(), g["C11"].max(), g["C12"].max(), g["C22"][-1]]
        acc /= args.paths
        print(f"{n:>7} " + " ".join(f"{v:>10.3e}" for v in acc))


if __name__ == "__main__":
    main()
