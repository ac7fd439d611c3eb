"""Weights and evidence tables for the four-expert survival example.

    python scripts/reproduce_savchuk.py [--iterations N] [--seed S]
"""

import argparse

from logpool import (
    DirichletPrior,
    McmcConfig,
    Observation,
    WeightVector,
    evidence,
    maximize_entropy,
    minimize_kl,
    pool_beta,
    pooled_entropy,
    run_mcmc,
    savchuk_pool,
    total_kl_loss,
)


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--iterations", type=int, default=200_000)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()

    pool = savchuk_pool()
    obs = Observation(9, 10)
    post = run_mcmc(pool, DirichletPrior.symmetric(4), obs, McmcConfig(iterations=args.iterations, burn_in=args.iterations // 10, seed=args.seed))
    methods = {
        "equal": WeightVector.equal(4),
        "maximum entropy": maximize_entropy(pool).weights,
        "minimum KL": minimize_kl(pool).weights,
        "hierarchical": post.mean_weights,
    }

    print("weights")
    print(f"{'method':<16}" + "".join(f"{lab:>10}" for lab in pool.labels))
    for name, w in methods.items():
        print(f"{name:<16}" + "".join(f"{x:>10.4f}" for x in w))
    print(f"(hierarchical: acceptance {post.acceptance_rate:.3f}, ESS {', '.join(f'{e:.0f}' for e in post.effective_sample_size)})")

    print("\nevidence l(y), y = 9 of n = 10")
    for o in pool:
        print(f"{o.label:<16}{evidence(o.a, o.b, obs):>10.4f}")
    print(f"\n{'pooled prior':<16}{'a*':>10}{'b*':>10}{'entropy':>10}{'total KL':>10}{'l(y)':>10}")
    for name, w in methods.items():
        p = pool_beta(pool, w)
        print(f"{name:<16}{p.a_star:>10.4f}{p.b_star:>10.4f}{pooled_entropy(p):>10.4f}{total_kl_loss(pool, w):>10.4f}{evidence(p.a_star, p.b_star, obs):>10.4f}")


if __name__ == "__main__":
    main()
