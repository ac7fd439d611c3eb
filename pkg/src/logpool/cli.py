"""``logpool`` command line interface.

Exit codes: 0 success, 2 input error, 3 numerical or diagnostic failure.
"""

from __future__ import annotations

import argparse
import csv
import sys
from pathlib import Path

import numpy as np

from .hierarchical import McmcConfig, marginal_prior_density, posterior_density, run_mcmc
from .objectives import Observation, evidence, posterior_beta
from .optimizer import OptimizerConfig, maximize_entropy, minimize_kl
from .pool import OpinionPool, WeightVector, beta_log_density
from .poolfile import PoolFileError, build_report, dumps, load_pool_file, verify_report

EXIT_OK = 0
EXIT_INPUT = 2
EXIT_NUMERIC = 3
VERIFY_TOLERANCE = 1e-9


def _parse_weights(text: str, k: int) -> WeightVector:
    if text == "equal":
        return WeightVector.equal(k)
    try:
        values = [float(v) for v in text.split(",")]
    except ValueError:
        raise PoolFileError(f"--weights: cannot parse {text!r}") from None
    if len(values) != k:
        raise PoolFileError(f"--weights: got {len(values)} weights for {k} experts")
    try:
        return WeightVector(tuple(values))
    except ValueError as exc:
        raise PoolFileError(f"--weights: {exc}") from None


def density_grid(n: int) -> np.ndarray:
    """Open midpoint grid on (1/(2n), 1 - 1/(2n))."""
    return (np.arange(n) + 0.5) / n


def _beta_pdf(a, b, theta):
    return np.exp(beta_log_density(a, b)(theta))


def write_density_csv(path: Path, theta, prior, posterior) -> None:
    with open(path, "w", newline="") as fh:
        out = csv.writer(fh, lineterminator="\n")
        out.writerow(["theta", "prior", "posterior"])
        for row in zip(theta, prior, posterior):
            out.writerow([repr(float(v)) for v in row])


def _beta_curves(a, b, obs, theta):
    prior = _beta_pdf(a, b, theta)
    if obs is None:
        return prior, prior
    return prior, _beta_pdf(*posterior_beta(a, b, obs), theta)


def _emit(args, report, pf) -> int:
    if args.verify:
        gap = verify_report(report, pf.pool, pf.observation)
        if gap > VERIFY_TOLERANCE:
            print(f"verification failed: discrepancy {gap:.3e}", file=sys.stderr)
            return EXIT_NUMERIC
        report.diagnostics["verified"] = True
    sys.stdout.write(dumps(report.to_dict(), args.precision))
    return EXIT_OK


def cmd_pool(args, pf) -> int:
    w = _parse_weights(args.weights, len(pf.pool))
    method = "equal" if args.weights == "equal" else "fixed"
    report = build_report(method, pf.pool, w, pf.observation)
    if args.grid:
        if not args.csv:
            raise PoolFileError("--grid needs --csv FILE")
        theta = density_grid(args.grid)
        write_density_csv(Path(args.csv), theta, *_beta_curves(report.a_star, report.b_star, pf.observation, theta))
    return _emit(args, report, pf)


def _optimize(pool: OpinionPool, method: str, seed: int, restarts: int):
    cfg = OptimizerConfig(restarts=restarts, seed=seed)
    return (maximize_entropy if method == "entropy" else minimize_kl)(pool, cfg)


def cmd_optimize(args, pf) -> int:
    res = _optimize(pf.pool, args.method, args.seed, args.restarts)
    report = build_report(
        res.method.value,
        pf.pool,
        res.weights,
        pf.observation,
        {
            "objective_value": res.objective_value,
            "converged": res.converged,
            "at_boundary": res.at_boundary,
            "candidates_evaluated": res.candidates_evaluated,
            "seed": args.seed,
            "restarts": args.restarts,
        },
    )
    code = _emit(args, report, pf)
    if code == EXIT_OK and not res.converged:
        print("optimizer did not converge; best point reported", file=sys.stderr)
        return EXIT_NUMERIC
    return code


def _require_observation(pf) -> Observation:
    if pf.observation is None:
        raise PoolFileError("observation: required for the hierarchical method")
    return pf.observation


def _hier(pf, args):
    obs = _require_observation(pf)
    cfg = McmcConfig(
        iterations=args.iterations,
        burn_in=args.burn_in,
        thin=args.thin,
        proposal_scale=args.proposal_scale,
        seed=args.seed,
    )
    post = run_mcmc(pf.pool, pf.dirichlet_or_default(), obs, cfg)
    d = post.draws
    ev_draws = [evidence(a, b, obs) for a, b in zip(d @ pf.pool.a, d @ pf.pool.b)]
    report = build_report(
        "hierarchical",
        pf.pool,
        post.mean_weights,
        obs,
        {
            "acceptance_rate": post.acceptance_rate,
            "burn_in_acceptance_rate": post.burn_in_acceptance_rate,
            "effective_sample_size": post.effective_sample_size.tolist(),
            "mc_standard_error": post.mc_standard_error.tolist(),
            "mean_evidence_over_draws": float(np.mean(ev_draws)),
            "draws": len(d),
            "dirichlet_x": list(pf.dirichlet_or_default().x),
            "iterations": cfg.iterations,
            "burn_in": cfg.burn_in,
            "thin": cfg.thin,
            "proposal_scale": cfg.proposal_scale,
            "seed": cfg.seed,
            "degenerate": post.degenerate,
        },
    )
    return post, report


def cmd_hier(args, pf) -> int:
    post, report = _hier(pf, args)
    if args.draws:
        with open(args.draws, "w", newline="") as fh:
            out = csv.writer(fh, lineterminator="\n")
            out.writerow(pf.pool.labels)
            for row in post.draws:
                out.writerow([repr(float(v)) for v in row])
    code = _emit(args, report, pf)
    if code == EXIT_OK and post.degenerate:
        print("MCMC chain is degenerate (acceptance 0 or 1 during burn-in)", file=sys.stderr)
        return EXIT_NUMERIC
    return code


def cmd_report(args, pf) -> int:
    pool = pf.pool
    obs = _require_observation(pf)
    outdir = Path(args.outdir or f"{Path(args.input).stem}_report")
    outdir.mkdir(parents=True, exist_ok=True)
    theta = density_grid(args.grid or 200)
    files = []

    experts = {}
    for o in pool:
        experts[o.label] = evidence(o.a, o.b, obs)
        path = outdir / f"opinion_{o.label}.csv"
        write_density_csv(path, theta, *_beta_curves(o.a, o.b, obs, theta))
        files.append(path.name)

    runs = {"equal": build_report("equal", pool, WeightVector.equal(len(pool)), obs)}
    failed = False
    for method, key in (("entropy", "maximum_entropy"), ("kl", "minimum_kl")):
        res = _optimize(pool, method, args.seed, args.restarts)
        failed |= not res.converged
        runs[key] = build_report(res.method.value, pool, res.weights, obs, {"at_boundary": res.at_boundary})
    post, runs["hierarchical"] = _hier(pf, args)
    failed |= post.degenerate

    for key, rep in runs.items():
        path = outdir / f"pooled_{key}.csv"
        if key == "hierarchical":
            prior = marginal_prior_density(pool, pf.dirichlet_or_default(), theta, args.mc_samples, args.seed).value
            posterior = posterior_density(post, pool, obs, theta)
        else:
            prior, posterior = _beta_curves(rep.a_star, rep.b_star, obs, theta)
        write_density_csv(path, theta, prior, posterior)
        files.append(path.name)

    if args.verify:
        gap = max(verify_report(r, pool, obs) for r in runs.values())
        if gap > VERIFY_TOLERANCE:
            print(f"verification failed: discrepancy {gap:.3e}", file=sys.stderr)
            return EXIT_NUMERIC

    bundle = {
        "weights": {k: r.weights for k, r in runs.items()},
        "evidence": {"experts": experts, "pooled": {k: r.evidence for k, r in runs.items()}},
        "pooled": {k: {"a_star": r.a_star, "b_star": r.b_star, "entropy": r.entropy, "total_kl": r.total_kl} for k, r in runs.items()},
        "mle": obs.mle if obs.n else None,
        "hierarchical_diagnostics": runs["hierarchical"].diagnostics,
        "output_dir": str(outdir),
        "files": files,
    }
    sys.stdout.write(dumps(bundle, args.precision))
    return EXIT_NUMERIC if failed else EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--input", required=True, help="pool file (JSON)")
    common.add_argument("--precision", type=int, default=6, help="significant digits in printed floats")
    common.add_argument("--verify", action="store_true", help="recompute every reported scalar and fail on mismatch")
    common.add_argument("--seed", type=int, default=0)

    opt = argparse.ArgumentParser(add_help=False)
    opt.add_argument("--restarts", type=int, default=50)

    mcmc = argparse.ArgumentParser(add_help=False)
    mcmc.add_argument("--iterations", type=int, default=200_000)
    mcmc.add_argument("--burn-in", type=int, default=20_000)
    mcmc.add_argument("--thin", type=int, default=10)
    mcmc.add_argument("--proposal-scale", type=float, default=3.0)

    parser = argparse.ArgumentParser(prog="logpool", description="Logarithmic pooling of Beta expert opinions.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("pool", parents=[common], help="pool with given weights")
    p.add_argument("--weights", default="equal", help="comma-separated weights or 'equal'")
    p.add_argument("--grid", type=int, help="write an N-point density CSV")
    p.add_argument("--csv", help="density CSV path (with --grid)")
    p.set_defaults(func=cmd_pool)

    p = sub.add_parser("optimize", parents=[common, opt], help="maximum entropy or minimum KL weights")
    p.add_argument("--method", choices=["entropy", "kl"], required=True)
    p.set_defaults(func=cmd_optimize)

    p = sub.add_parser("hier", parents=[common, mcmc], help="Dirichlet prior on the weights, sampled by MCMC")
    p.add_argument("--draws", help="write thinned weight draws to this CSV")
    p.set_defaults(func=cmd_hier)

    p = sub.add_parser("report", parents=[common, opt, mcmc], help="all methods, evidence tables and density CSVs")
    p.add_argument("--grid", type=int, default=200)
    p.add_argument("--outdir", help="directory for density CSVs (default: <input>_report)")
    p.add_argument("--mc-samples", type=int, default=20_000, help="Dirichlet draws for the marginal prior curve")
    p.set_defaults(func=cmd_report)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        pf = load_pool_file(args.input)
        return args.func(args, pf)
    except PoolFileError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except FloatingPointError as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC


def entry() -> None:
    sys.exit(main())


if __name__ == "__main__":
    entry()
