"""Pooled entropy at the vertices, the centre and along every edge of the simplex.

Shows where the maximum-entropy weights sit and how far the optimum is from
the equal-weights pool.

    python scripts/entropy_landscape.py [--steps N]
"""

import argparse
import itertools

import numpy as np

from logpool import WeightVector, maximize_entropy, pool_beta, pooled_entropy, savchuk_pool


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--steps", type=int, default=10)
    args = ap.parse_args()

    pool = savchuk_pool()
    k = len(pool)

    def h(w):
        return pooled_entropy(pool_beta(pool, w))

    for j in range(k):
        print(f"vertex {pool.labels[j]:<10} H = {h(WeightVector.vertex(k, j)):.4f}")
    print(f"centre            H = {h(WeightVector.equal(k)):.4f}")

    print("\nedge maxima (interior of each edge)")
    for i, j in itertools.combinations(range(k), 2):
        vals = []
        for t in np.linspace(0, 1, args.steps + 1)[1:-1]:
            w = np.zeros(k)
            w[i], w[j] = t, 1 - t
            vals.append((h(w), t))
        hv, t = max(vals)
        print(f"{pool.labels[i]}-{pool.labels[j]}: max H = {hv:.4f} at weight {t:.2f} on {pool.labels[i]}")

    res = maximize_entropy(pool)
    print(f"\noptimiser: {np.round(res.weights.as_array(), 4)}  H = {res.objective_value:.4f}")


if __name__ == "__main__":
    main()
