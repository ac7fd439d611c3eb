"""Check the minimum-KL weights against brute-force sampling of the simplex.

Draws uniform weight vectors in chunks, keeps the best total KL loss, and
compares it with the optimiser and with any weights given on the command line.

    python scripts/minkl_random_search.py [--samples N] [--weights 0.04,0.96,0,0]
"""

import argparse

import numpy as np

from logpool import minimize_kl, savchuk_pool, total_kl_loss
from logpool.objectives import total_kl_loss_fn


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--samples", type=int, default=1_000_000)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--weights", action="append", default=["0.04,0.96,0,0"], help="extra weights to score (repeatable)")
    args = ap.parse_args()

    pool = savchuk_pool()
    loss = total_kl_loss_fn(pool)
    rng = np.random.default_rng(args.seed)
    best, best_w, left = np.inf, None, args.samples
    while left:
        n = min(left, 100_000)
        for w in rng.dirichlet(np.ones(len(pool)), size=n):
            v = loss(w)
            if v < best:
                best, best_w = v, w
        left -= n

    res = minimize_kl(pool)
    print(f"random search ({args.samples} points): loss {best:.8f} at {np.round(best_w, 4)}")
    print(f"optimiser:                        loss {res.objective_value:.8f} at {np.round(res.weights.as_array(), 4)}")
    for text in args.weights:
        w = [float(x) for x in text.split(",")]
        print(f"given {text:<27} loss {total_kl_loss(pool, w):.8f}")


if __name__ == "__main__":
    main()
