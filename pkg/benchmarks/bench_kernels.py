"""Compiled vs numpy kernels: micro timings and two end-to-end workloads.

Run with ``python benchmarks/bench_kernels.py [--repeat 5]``.  The compiled
column is skipped when the extension is not built.
"""
import argparse
import time
from contextlib import contextmanager

import numpy as np

from polyco import _backend, _fallback

try:
    from polyco import _kernels
except ImportError:  # extension not built
    _kernels = None


@contextmanager
def use(mod):
    old = (_backend.simplex_iterate, _backend.fme_combine)
    _backend.simplex_iterate, _backend.fme_combine = mod.simplex_iterate, mod.fme_combine
    try:
        yield
    finally:
        _backend.simplex_iterate, _backend.fme_combine = old


def best_of(fn, repeat):
    ts = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        ts.append(time.perf_counter() - t0)
    return min(ts)


def simplex_tableau(m, n, seed):
    """Phase-two tableau of a random bounded LP in standard form."""
    rng = np.random.default_rng(seed)
    A = rng.uniform(0.1, 1.0, (m, n))
    T = np.zeros((m + 1, n + m + 1))
    T[:m, :n] = A
    T[:m, n:n + m] = np.eye(m)
    T[:m, -1] = 1.0
    T[m, :n] = -rng.uniform(0.5, 1.5, n)
    basis = np.arange(n, n + m, dtype=np.int64)
    return T, basis


def work_simplex(mod, size=(120, 200)):
    T, basis = simplex_tableau(*size, seed=0)
    mod.simplex_iterate(T, basis, T.shape[1] - 1, 10_000, 1e-9, 50)


def work_fme(mod, rows=60, dim=12):
    rng = np.random.default_rng(1)
    pos = rng.normal(size=(rows, dim))
    pos[:, 0] = np.abs(pos[:, 0]) + 0.1
    neg = rng.normal(size=(rows, dim))
    neg[:, 0] = -np.abs(neg[:, 0]) - 0.1
    mod.fme_combine(pos, rng.normal(size=rows), neg, rng.normal(size=rows), 0)


def work_chain(m=20):
    from polyco.bench.chain import ChainSpec, gen_series_chain
    from polyco.lcdp import query_monolithic

    query_monolithic(gen_series_chain(ChainSpec(m=m)), np.ones(2))


def work_rover(N=100):
    from polyco.bench import rover
    from polyco.ldp import query_min_resources

    query_min_resources(rover.surrogate(N), (0.1, 0.05))


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args(argv)
    mods = [("python", _fallback)] + ([("cython", _kernels)] if _kernels is not None else [])
    cases = [
        ("simplex 120x200", lambda mod: work_simplex(mod)),
        ("fme 60x60 pairs", lambda mod: work_fme(mod)),
        ("chain m=20 query", lambda mod: work_chain()),
        ("rover N=100 query", lambda mod: work_rover()),
    ]
    print(f"{'case':<20}" + "".join(f"{name:>12}" for name, _ in mods) + f"{'speedup':>10}")
    for label, fn in cases:
        times = []
        for _, mod in mods:
            with use(mod):
                times.append(best_of(lambda: fn(mod), args.repeat))
        sp = f"{times[0] / times[1]:9.1f}x" if len(times) > 1 else ""
        print(f"{label:<20}" + "".join(f"{t * 1e3:10.2f}ms" for t in times) + f"{sp:>10}")


if __name__ == "__main__":
    main()
