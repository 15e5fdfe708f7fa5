"""Command-line surface: simulate / fit / mua / eval / replicate.

Every run directory gets a manifest.json echoing the resolved config,
seeds, library version, and elapsed time; re-running a command with the
same seed and thread count reproduces every numeric output byte-for-byte
(manifest.json is the one file carrying wall-clock times).

Exit codes: 0 success, 2 usage or config error, 3 numeric failure.
"""

import argparse
import json
import os
import sys
import time
from concurrent.futures import ProcessPoolExecutor

import numpy as np

from . import __version__, _accel
from . import rng as rngmod
from .io import (
    load_dataset,
    read_f64_block,
    read_json,
    read_matrix_csv,
    rle_decode,
    rle_encode,
    write_biosr1,
    write_csv_dataset,
    write_f64_block,
    write_json,
    write_matrix_csv,
)
from .kernels import build_psi, fit_kernel_empirical
from .metrics import mean_se, mse, selection_report
from .model import Dataset, Hyperparams, MaternKernel, NumericError, ValidationError
from .mua import mua_pipeline, ols_per_location
from .sampler import ChainConfig, geweke_z, pool_summaries, run_chain
from .simulate import gen_scenario1, gen_scenario2

GEWEKE_NOTE = "per-trace geweke z over stored samples; mean_abs_z averages |z| over pi and tausum traces"
SBH_NOTE = "storey pi0 estimator at lambda=0.5; global stage falls back to pi0=1 when q < 20"


class UsageError(Exception):
    """Bad flags, config keys, or file arguments."""


# config keys shared by the fit-like commands, with defaults
CONFIG_DEFAULTS = {
    "seed": 0,
    "iters": 2000,
    "burnin": 500,
    "thin": 1,
    "chains": 1,
    "d": 0.05,
    "alpha": 0.05,
    "a_eps": 1.0,
    "b_eps": 1.0,
    "a_pi": 1.0,
    "b_pi": 1.0,
    "delta": 5,
    "mu0": 0.0,
    "sigma2_0": 1.0,
    "sigma2_s": None,
    "rho": None,
    "standardize_continuous": False,
    "threads": None,
    "format": "biosr1",
    "scenario": "s1",
    "pi": None,
    "replicates": 10,
    "dataset": None,
    "out": None,
}


def _load_config(path):
    if path is None:
        return {}
    if not os.path.exists(path):
        raise UsageError(f"config file not found: {path}")
    with open(path) as fh:
        try:
            cfg = json.load(fh)
        except json.JSONDecodeError as exc:
            raise UsageError(f"config is not valid JSON: {exc}") from exc
    if not isinstance(cfg, dict):
        raise UsageError("config must be a JSON object")
    unknown = sorted(set(cfg) - set(CONFIG_DEFAULTS))
    if unknown:
        raise UsageError(f"unknown config keys: {', '.join(unknown)}")
    return cfg


def _resolve(args, extra_flags=()):
    """defaults < config file < explicit CLI flags."""
    cfg = dict(CONFIG_DEFAULTS)
    cfg.update(_load_config(getattr(args, "config", None)))
    flags = (
        "seed",
        "iters",
        "burnin",
        "thin",
        "chains",
        "d",
        "alpha",
        "threads",
        "out",
        "dataset",
        "standardize_continuous",
    ) + tuple(extra_flags)
    for name in flags:
        val = getattr(args, name, None)
        if val is not None:
            cfg[name] = val
    if cfg["threads"] is None:
        env = os.environ.get("SGLSS_THREADS")
        if env is not None:
            try:
                cfg["threads"] = int(env)
            except ValueError as exc:
                raise UsageError(f"SGLSS_THREADS is not an integer: {env!r}") from exc
    if cfg["threads"] is None:
        cfg["threads"] = 1
    if cfg["threads"] < 1:
        raise UsageError("threads: must be >= 1")
    return cfg


def _require_out(cfg):
    out = cfg.get("out")
    if not out:
        raise UsageError("an output directory is required (--out DIR)")
    os.makedirs(out, exist_ok=True)
    return out


def _jsonable(obj):
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return _jsonable(obj.tolist())
    if isinstance(obj, (np.bool_,)):
        return bool(obj)
    if isinstance(obj, (np.integer,)):
        return int(obj)
    if isinstance(obj, (np.floating,)):
        return float(obj)
    return obj


def _write_manifest(out, command, cfg, started, extra=None):
    manifest = {
        "command": command,
        "version": __version__,
        "backend": _accel.BACKEND,
        "config": _jsonable({k: v for k, v in cfg.items() if v is not None}),
        "elapsed_seconds": time.time() - started,
    }
    if extra:
        manifest.update(_jsonable(extra))
    write_json(os.path.join(out, "manifest.json"), manifest)


# ---------------------------------------------------------------- simulate


def _simulate_to_dir(scenario, pi_target, seed, out, fmt):
    if scenario == "s1":
        dataset, truth = gen_scenario1(seed)
    elif scenario == "s2":
        if pi_target is None:
            raise UsageError("scenario s2 needs --pi (e.g. 0.09 or 0.188)")
        dataset, truth = gen_scenario2(pi_target, seed)
    else:
        raise UsageError(f"unknown scenario: {scenario!r} (expected s1 or s2)")

    if fmt == "biosr1":
        write_biosr1(os.path.join(out, "dataset.biosr1"), dataset)
        dataset_path = "dataset.biosr1"
    elif fmt == "csv":
        write_csv_dataset(out, dataset)
        dataset_path = "."
    else:
        raise UsageError(f"unknown format: {fmt!r} (expected biosr1 or csv)")

    write_matrix_csv(os.path.join(out, "beta_true.csv"), truth.beta_true)
    write_matrix_csv(os.path.join(out, "Z_true.csv"), truth.Z_true)
    write_f64_block(os.path.join(out, "Sigma_true.bin"), truth.Sigma_true)
    truth_doc = {
        "scenario": truth.scenario,
        "pi_target": truth.pi_target,
        "seed": truth.generator_seed,
        "n": dataset.n,
        "p": dataset.p,
        "q": dataset.q,
        "influential_global": truth.influential_global.tolist(),
        "support_rle": [rle_encode(row) for row in truth.support_true],
        "sigma2_eps_true": truth.sigma2_eps_true,
        "files": {
            "dataset": dataset_path,
            "beta_true": "beta_true.csv",
            "Z_true": "Z_true.csv",
            "Sigma_true": "Sigma_true.bin",
        },
        "version": __version__,
    }
    write_json(os.path.join(out, "truth.json"), _jsonable(truth_doc))
    return dataset, truth


def cmd_simulate(args):
    started = time.time()
    cfg = _resolve(args, extra_flags=("scenario", "pi", "format"))
    out = _require_out(cfg)
    _simulate_to_dir(cfg["scenario"], cfg["pi"], cfg["seed"], out, cfg["format"])
    _write_manifest(out, "simulate", cfg, started, extra={"seed": cfg["seed"]})
    return 0


# --------------------------------------------------------------------- fit


def _standardize_continuous(X):
    """z-score columns with more than two distinct values (ddof=1)."""
    X = X.copy()
    cols = []
    for j in range(X.shape[1]):
        if len(np.unique(X[:, j])) > 2:
            sd = X[:, j].std(ddof=1)
            if sd > 0:
                X[:, j] = (X[:, j] - X[:, j].mean()) / sd
                cols.append(j)
    return X, cols


def _build_hyper(cfg, q, p, kernel):
    return Hyperparams(
        a_eps=float(cfg["a_eps"]),
        b_eps=float(cfg["b_eps"]),
        a_pi=float(cfg["a_pi"]),
        b_pi=float(cfg["b_pi"]),
        d=float(cfg["d"]),
        mu0=np.full((q + 1, p), float(cfg["mu0"])),
        sigma2_0=np.full((q + 1, p), float(cfg["sigma2_0"])),
        delta=int(cfg["delta"]),
        kernel=kernel,
    )


def _chain_worker(payload):
    data, hyper, config, psi, mua = payload
    return run_chain(data, hyper, config, mua=mua, psi=psi)


def _write_trace_csv(path, traces, q):
    header = (
        "iter,sigma2_eps,"
        + ",".join(f"pi_{j}" for j in range(1, q + 1))
        + ","
        + ",".join(f"tausum_{j}" for j in range(1, q + 1))
    )
    rows = np.column_stack(
        [
            traces["iter"].astype(np.float64),
            traces["sigma2_eps"],
            traces["pi"],
            traces["tausum"].astype(np.float64),
        ]
    )
    np.savetxt(path, rows, fmt="%.17g", delimiter=",", header=header, comments="")


def _geweke_table(traces, q):
    """Per-trace z scores; unavailable traces map to None."""

    def _z(x):
        try:
            return geweke_z(np.asarray(x))
        except (ValidationError, NumericError):
            return None

    table = {"sigma2_eps": _z(traces["sigma2_eps"])}
    abs_zs = []
    for j in range(q):
        zp = _z(traces["pi"][:, j])
        zt = _z(traces["tausum"][:, j])
        table[f"pi_{j + 1}"] = zp
        table[f"tausum_{j + 1}"] = zt
        abs_zs.extend(abs(z) for z in (zp, zt) if z is not None)
    table["mean_abs_z"] = float(np.mean(abs_zs)) if abs_zs else None
    table["aggregation"] = GEWEKE_NOTE
    return table


def _fit_to_dir(cfg, out):
    data = load_dataset(cfg["dataset"])
    standardized_cols = []
    if cfg["standardize_continuous"]:
        X, standardized_cols = _standardize_continuous(data.X)
        data = Dataset(Y=data.Y, X=X, grid=data.grid)

    mua = ols_per_location(data)
    explicit = cfg["sigma2_s"] is not None or cfg["rho"] is not None
    if explicit:
        if cfg["sigma2_s"] is None or cfg["rho"] is None:
            raise UsageError("give both sigma2_s and rho, or neither")
        kernel = MaternKernel(sigma2_s=float(cfg["sigma2_s"]), rho=float(cfg["rho"]))
    else:
        kernel = fit_kernel_empirical(data, mua.beta_hat)

    q, p = data.q, data.p
    hyper = _build_hyper(cfg, q, p, kernel)
    psi = build_psi(data.grid, hyper.kernel)

    n_chains = int(cfg["chains"])
    if n_chains < 1:
        raise UsageError("chains: must be >= 1")
    seeds = [rngmod.chain_seed(cfg["seed"], c) for c in range(n_chains)]
    configs = [
        ChainConfig(
            n_iter=int(cfg["iters"]),
            burn_in=int(cfg["burnin"]),
            seed=s,
            thin=int(cfg["thin"]),
        )
        for s in seeds
    ]
    payloads = [(data, hyper, c, psi, mua) for c in configs]
    if cfg["threads"] > 1 and n_chains > 1:
        with ProcessPoolExecutor(max_workers=min(cfg["threads"], n_chains)) as pool:
            summaries = list(pool.map(_chain_worker, payloads))
    else:
        summaries = [_chain_worker(pl) for pl in payloads]

    for c, summ in enumerate(summaries):
        _write_trace_csv(os.path.join(out, f"trace_chain{c}.csv"), summ.traces, q)
    pooled = pool_summaries(summaries)

    write_matrix_csv(os.path.join(out, "beta_mean.csv"), pooled.beta_mean)
    write_matrix_csv(os.path.join(out, "Z_mean.csv"), pooled.Z_mean)
    write_f64_block(os.path.join(out, "Sigma_mean.bin"), pooled.Sigma_mean)
    write_matrix_csv(os.path.join(out, "mppi_local.csv"), pooled.mppi_local)
    write_matrix_csv(
        os.path.join(out, "selected_local.csv"),
        pooled.selected_local.astype(np.float64),
    )
    summary = {
        "mppi_global": pooled.mppi_global,
        "selected_global": pooled.selected_global,
        "sigma2_eps_mean": pooled.sigma2_eps_mean,
        "n_stored": pooled.n_stored,
        "chains": n_chains,
        "d": cfg["d"],
        "files": {
            "beta_mean": "beta_mean.csv",
            "Z_mean": "Z_mean.csv",
            "Sigma_mean": "Sigma_mean.bin",
            "mppi_local": "mppi_local.csv",
            "selected_local": "selected_local.csv",
            "traces": [f"trace_chain{c}.csv" for c in range(n_chains)],
        },
    }
    write_json(os.path.join(out, "summary.json"), _jsonable(summary))
    geweke = {f"chain{c}": _geweke_table(s.traces, q) for c, s in enumerate(summaries)}
    extra = {
        "seed": cfg["seed"],
        "chain_seeds": seeds,
        "kernel": {
            "sigma2_s": kernel.sigma2_s,
            "rho": kernel.rho,
            "nu": kernel.nu,
            "fitted_empirically": not explicit,
        },
        "standardized_columns": standardized_cols,
        "geweke": geweke,
    }
    return extra


def cmd_fit(args):
    started = time.time()
    cfg = _resolve(args, extra_flags=("sigma2_s", "rho"))
    if not cfg.get("dataset"):
        raise UsageError("a dataset path is required (--dataset PATH)")
    out = _require_out(cfg)
    extra = _fit_to_dir(cfg, out)
    _write_manifest(out, "fit", cfg, started, extra=extra)
    return 0


# --------------------------------------------------------------------- mua


def _mua_to_dir(cfg, out):
    data = load_dataset(cfg["dataset"])
    if cfg["standardize_continuous"]:
        X, _ = _standardize_continuous(data.X)
        data = Dataset(Y=data.Y, X=X, grid=data.grid)
    sel = mua_pipeline(data, alpha=float(cfg["alpha"]))
    write_matrix_csv(os.path.join(out, "mua_pvals.csv"), sel.ols.pvals)
    write_matrix_csv(os.path.join(out, "mua_beta.csv"), sel.ols.beta_hat)
    for name, mask in sel.local_selected.items():
        write_matrix_csv(
            os.path.join(out, f"mua_local_{name}.csv"), mask.astype(np.float64)
        )
    summary = {
        "alpha": sel.alpha,
        "dof": sel.ols.dof,
        "global_pvals": sel.ols.global_pvals,
        "global_selected": {k: v for k, v in sel.global_selected.items()},
        "sbh": SBH_NOTE,
        "files": {
            "pvals": "mua_pvals.csv",
            "beta": "mua_beta.csv",
            "local_selected": {k: f"mua_local_{k}.csv" for k in sel.local_selected},
        },
    }
    write_json(os.path.join(out, "mua_summary.json"), _jsonable(summary))


def cmd_mua(args):
    started = time.time()
    cfg = _resolve(args)
    if not cfg.get("dataset"):
        raise UsageError("a dataset path is required (--dataset PATH)")
    out = _require_out(cfg)
    _mua_to_dir(cfg, out)
    _write_manifest(out, "mua", cfg, started)
    return 0


# -------------------------------------------------------------------- eval


def _load_truth(truth_path):
    doc = read_json(truth_path)
    base = os.path.dirname(os.path.abspath(truth_path))
    support = np.stack([rle_decode(r) for r in doc["support_rle"]])
    return {
        "influential": np.asarray(doc["influential_global"], dtype=bool),
        "support": support,
        "beta": read_matrix_csv(os.path.join(base, doc["files"]["beta_true"])),
        "Z": read_matrix_csv(os.path.join(base, doc["files"]["Z_true"])),
        "Sigma": read_f64_block(os.path.join(base, doc["files"]["Sigma_true"])),
        "sigma2_eps": float(doc["sigma2_eps_true"]),
    }


def _eval_to_doc(fit_dir, truth_path, mua_dir=None):
    for path, what in ((fit_dir, "fit directory"), (truth_path, "truth file")):
        if path is not None and not os.path.exists(path):
            raise UsageError(f"{what} not found: {path}")
    truth = _load_truth(truth_path)
    summary_path = os.path.join(fit_dir, "summary.json")
    if not os.path.exists(summary_path):
        raise UsageError(f"not a fit directory (no summary.json): {fit_dir}")
    summary = read_json(summary_path)
    selected_global = np.asarray(summary["selected_global"], dtype=bool)
    selected_local = (
        read_matrix_csv(os.path.join(fit_dir, summary["files"]["selected_local"]))
        > 0.5
    )
    beta_mean = read_matrix_csv(os.path.join(fit_dir, summary["files"]["beta_mean"]))
    Z_mean = read_matrix_csv(os.path.join(fit_dir, summary["files"]["Z_mean"]))
    Sigma_mean = read_f64_block(os.path.join(fit_dir, summary["files"]["Sigma_mean"]))

    doc = {
        "bhm": {
            "selection": selection_report(
                selected_global,
                selected_local,
                truth["influential"],
                truth["support"],
            ),
            "mse": {
                "Z": mse(truth["Z"], Z_mean),
                "beta": mse(truth["beta"], beta_mean),
                "Sigma": mse(truth["Sigma"], Sigma_mean),
                "sigma2_eps": mse(
                    np.array([truth["sigma2_eps"]]),
                    np.array([summary["sigma2_eps_mean"]]),
                ),
            },
        }
    }
    if mua_dir is not None:
        if not os.path.exists(mua_dir):
            raise UsageError(f"mua directory not found: {mua_dir}")
        msum = read_json(os.path.join(mua_dir, "mua_summary.json"))
        mua_beta = read_matrix_csv(os.path.join(mua_dir, msum["files"]["beta"]))
        mua_doc = {"mse": {"beta": mse(truth["beta"], mua_beta)}}
        for proc, gsel in msum["global_selected"].items():
            lsel = (
                read_matrix_csv(
                    os.path.join(mua_dir, msum["files"]["local_selected"][proc])
                )
                > 0.5
            )
            mua_doc[proc] = {
                "selection": selection_report(
                    np.asarray(gsel, dtype=bool),
                    lsel,
                    truth["influential"],
                    truth["support"],
                )
            }
        doc["mua"] = mua_doc
    return doc


def cmd_eval(args):
    started = time.time()
    cfg = _resolve(args)
    if not args.fit or not args.truth:
        raise UsageError("eval needs --fit DIR and --truth FILE")
    doc = _eval_to_doc(args.fit, args.truth, args.mua)
    out = cfg.get("out") or args.fit
    os.makedirs(out, exist_ok=True)
    write_json(os.path.join(out, "metrics.json"), _jsonable(doc))
    cfg["out"] = out
    _write_manifest(out, "eval", cfg, started)
    return 0


# --------------------------------------------------------------- replicate


def _flatten(doc, prefix=""):
    flat = {}
    for key, val in doc.items():
        path = f"{prefix}.{key}" if prefix else str(key)
        if isinstance(val, dict):
            flat.update(_flatten(val, path))
        elif isinstance(val, (int, float)) or val is None:
            flat[path] = val
    return flat


def _replicate_worker(payload):
    cfg, seed, rep_dir = payload
    os.makedirs(rep_dir, exist_ok=True)
    sim_dir = os.path.join(rep_dir, "sim")
    fit_dir = os.path.join(rep_dir, "fit")
    mua_dir = os.path.join(rep_dir, "mua")
    for dpath in (sim_dir, fit_dir, mua_dir):
        os.makedirs(dpath, exist_ok=True)
    _simulate_to_dir(cfg["scenario"], cfg["pi"], seed, sim_dir, cfg["format"])
    rep_cfg = dict(cfg)
    rep_cfg["seed"] = seed
    rep_cfg["dataset"] = (
        os.path.join(sim_dir, "dataset.biosr1") if cfg["format"] == "biosr1" else sim_dir
    )
    rep_cfg["threads"] = 1  # parallelism lives at the replicate level
    _fit_to_dir(rep_cfg, fit_dir)
    _mua_to_dir(rep_cfg, mua_dir)
    doc = _eval_to_doc(fit_dir, os.path.join(sim_dir, "truth.json"), mua_dir)
    write_json(os.path.join(rep_dir, "metrics.json"), _jsonable(doc))
    return _flatten(doc)


def cmd_replicate(args):
    started = time.time()
    cfg = _resolve(args, extra_flags=("scenario", "pi", "format", "replicates"))
    out = _require_out(cfg)
    n_rep = int(cfg["replicates"])
    if n_rep < 1:
        raise UsageError("replicates: must be >= 1")
    seeds = [int(cfg["seed"]) + r for r in range(n_rep)]
    payloads = [
        (cfg, seed, os.path.join(out, f"rep_{seed}")) for seed in seeds
    ]
    if cfg["threads"] > 1 and n_rep > 1:
        with ProcessPoolExecutor(max_workers=min(cfg["threads"], n_rep)) as pool:
            flats = list(pool.map(_replicate_worker, payloads))
    else:
        flats = [_replicate_worker(pl) for pl in payloads]

    keys = sorted(set().union(*[set(f) for f in flats]))
    aggregate = {key: mean_se([f.get(key) for f in flats]) for key in keys}
    write_json(os.path.join(out, "aggregate.json"), _jsonable(aggregate))
    lines = ["metric,mean,se,n"]
    for key in keys:
        entry = aggregate[key]
        mean = "" if entry["mean"] is None else f"{entry['mean']:.17g}"
        se = "" if entry["se"] is None else f"{entry['se']:.17g}"
        lines.append(f"{key},{mean},{se},{entry['n']}")
    with open(os.path.join(out, "aggregate.csv"), "w") as fh:
        fh.write("\n".join(lines) + "\n")
    _write_manifest(out, "replicate", cfg, started, extra={"seeds": seeds})
    return 0


# ------------------------------------------------------------------ parser


def _add_common(sub):
    sub.add_argument("--config", help="JSON config file")
    sub.add_argument("--seed", type=int)
    sub.add_argument("--out")
    sub.add_argument("--threads", type=int)


def _add_fit_flags(sub):
    sub.add_argument("--dataset", help="BIOSR1 file or CSV directory")
    sub.add_argument("--iters", type=int)
    sub.add_argument("--burnin", type=int)
    sub.add_argument("--thin", type=int)
    sub.add_argument("--chains", type=int)
    sub.add_argument("--d", type=float)
    sub.add_argument("--sigma2-s", dest="sigma2_s", type=float)
    sub.add_argument("--rho", type=float)
    sub.add_argument(
        "--standardize-continuous",
        dest="standardize_continuous",
        action="store_const",
        const=True,
        default=None,
    )


def build_parser():
    parser = argparse.ArgumentParser(
        prog="sglss",
        description="Bayesian image-on-scalar regression with global-local selection",
    )
    parser.add_argument("--version", action="version", version=__version__)
    subs = parser.add_subparsers(dest="subcommand", required=True)

    p_sim = subs.add_parser("simulate", help="generate a synthetic scenario")
    _add_common(p_sim)
    p_sim.add_argument("--scenario", choices=["s1", "s2"])
    p_sim.add_argument("--pi", type=float, help="target active fraction (s2)")
    p_sim.add_argument("--format", choices=["biosr1", "csv"])
    p_sim.set_defaults(func=cmd_simulate)

    p_fit = subs.add_parser("fit", help="run the Gibbs sampler")
    _add_common(p_fit)
    _add_fit_flags(p_fit)
    p_fit.set_defaults(func=cmd_fit)

    p_mua = subs.add_parser("mua", help="mass-univariate baseline")
    _add_common(p_mua)
    p_mua.add_argument("--dataset")
    p_mua.add_argument("--alpha", type=float)
    p_mua.add_argument(
        "--standardize-continuous",
        dest="standardize_continuous",
        action="store_const",
        const=True,
        default=None,
    )
    p_mua.set_defaults(func=cmd_mua)

    p_eval = subs.add_parser("eval", help="score a fit against ground truth")
    _add_common(p_eval)
    p_eval.add_argument("--fit", help="fit output directory")
    p_eval.add_argument("--truth", help="truth.json path")
    p_eval.add_argument("--mua", help="optional mua output directory")
    p_eval.set_defaults(func=cmd_eval)

    p_rep = subs.add_parser(
        "replicate", help="simulate+fit+mua+eval over consecutive seeds"
    )
    _add_common(p_rep)
    _add_fit_flags(p_rep)
    p_rep.add_argument("--scenario", choices=["s1", "s2"])
    p_rep.add_argument("--pi", type=float)
    p_rep.add_argument("--format", choices=["biosr1", "csv"])
    p_rep.add_argument("--alpha", type=float)
    p_rep.add_argument("--replicates", type=int)
    p_rep.set_defaults(func=cmd_replicate)

    return parser


def main(argv=None):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:  # argparse already printed the message
        return 0 if exc.code in (0, None) else 2
    try:
        rc = args.func(args)
        return 0 if rc is None else int(rc)
    except (UsageError, ValidationError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (NumericError, np.linalg.LinAlgError) as exc:
        print(f"numeric failure: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
