"""Timing comparison of the numba and pure-numpy hot-kernel backends.

Run from the repository root after an editable install:

    python3 benchmarks/bench_accel.py

Two sections: per-kernel micro-benchmarks at full problem scale
(p = 900 sites, n = 100 subjects), timed by importing both backend
modules directly, and an end-to-end Gibbs sweep benchmark that re-runs
this script in a subprocess per backend (the public dispatch binds a
backend once at import time via the SGLSS_NUMBA flag, so a fresh
process is the honest way to time each path).  JIT compilation is
excluded by a warmup call before any timer starts.
"""

import argparse
import os
import statistics
import subprocess
import sys
import time

import numpy as np

P_SITES = 900
N_SUBJECTS = 100


def _inputs(rng):
    coords = np.stack(
        np.meshgrid(np.arange(30.0), np.arange(30.0), indexing="ij"), -1
    ).reshape(-1, 2)
    diff = coords[:, None, :] - coords[None, :, :]
    D = np.sqrt((diff * diff).sum(-1))
    bsum = rng.standard_normal(P_SITES) * 3.0
    sig_diag = rng.uniform(0.5, 2.0, P_SITES)
    logtheta = rng.standard_normal(P_SITES) * 2.0
    u = rng.random(P_SITES)
    nu = rng.uniform(0.01, 0.5, P_SITES)
    m = rng.standard_normal(P_SITES)
    eps = rng.standard_normal(P_SITES)
    sel = rng.random(P_SITES) < 0.6
    mu0 = np.zeros(P_SITES)
    s20 = np.ones(P_SITES)
    return {
        "matern52_gram": (D, 0.9, 0.2),
        "site_moments_logtheta": (bsum, float(N_SUBJECTS), sig_diag, mu0, s20, 0.3),
        "tau_from_logtheta": (logtheta, u),
        "beta_from_moments": (nu, m, eps, sel),
    }


def _time_call(fn, args, repeat):
    fn(*args)  # warmup; compiles the jitted path on first use
    best = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn(*args)
        best.append(time.perf_counter() - t0)
    return min(best), statistics.median(best)


def micro_table():
    from sglss._accel import _numpy as be_np

    try:
        from sglss._accel import _numba as be_nb
    except ImportError:
        be_nb = None

    args = _inputs(np.random.default_rng(7))
    rows = []
    for name, call_args in args.items():
        t_np, _ = _time_call(getattr(be_np, name), call_args, repeat=200)
        if be_nb is not None:
            t_nb, _ = _time_call(getattr(be_nb, name), call_args, repeat=200)
        else:
            t_nb = None
        rows.append((name, t_np, t_nb))

    print(f"per-kernel best-of-200, p={P_SITES} sites (seconds per call)")
    print(f"{'kernel':<24} {'numpy':>12} {'numba':>12} {'speedup':>9}")
    for name, t_np, t_nb in rows:
        if t_nb is None:
            print(f"{name:<24} {t_np:>12.2e} {'n/a':>12} {'n/a':>9}")
        else:
            print(f"{name:<24} {t_np:>12.2e} {t_nb:>12.2e} {t_np / t_nb:>8.1f}x")
    print()


def sweep_seconds(n_iter):
    """Time run_chain under whichever backend the dispatch selected."""
    from sglss import _accel
    from sglss.kernels import build_psi
    from sglss.model import Hyperparams, MaternKernel
    from sglss.sampler import ChainConfig, run_chain
    from sglss.simulate import gen_scenario1

    data, _ = gen_scenario1(0)
    hyper = Hyperparams.defaults(
        data.q, data.p, MaternKernel(sigma2_s=0.9, rho=0.2)
    )
    psi = build_psi(data.grid, hyper.kernel)
    # warmup run compiles every jitted kernel before the timer starts
    run_chain(data, hyper, ChainConfig(n_iter=2, burn_in=0, seed=1), psi=psi)
    t0 = time.perf_counter()
    run_chain(data, hyper, ChainConfig(n_iter=n_iter, burn_in=0, seed=1), psi=psi)
    return _accel.BACKEND, time.perf_counter() - t0


def sweep_table(n_iter):
    results = {}
    for flag in ("1", "0"):
        env = dict(os.environ, SGLSS_NUMBA=flag)
        out = subprocess.run(
            [sys.executable, os.path.abspath(__file__), "--sweep-secs", str(n_iter)],
            env=env,
            capture_output=True,
            text=True,
            check=True,
        )
        backend, secs = out.stdout.split()[-2:]
        results[backend] = float(secs)

    print(f"end-to-end: {n_iter} Gibbs sweeps, n={N_SUBJECTS}, p={P_SITES}")
    for backend, secs in results.items():
        print(f"{backend:<8} {secs:>8.2f} s   ({secs / n_iter * 1e3:.1f} ms/sweep)")
    if "numba" in results and "numpy" in results:
        print(f"speedup  {results['numpy'] / results['numba']:.2f}x")


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--sweeps", type=int, default=40, help="sweeps per backend")
    ap.add_argument("--sweep-secs", type=int, metavar="N", default=None,
                    help="internal: print '<backend> <seconds>' for N sweeps")
    args = ap.parse_args(argv)
    if args.sweep_secs is not None:
        backend, secs = sweep_seconds(args.sweep_secs)
        print(backend, secs)
        return 0
    micro_table()
    sweep_table(args.sweeps)
    return 0


if __name__ == "__main__":
    sys.exit(main())
