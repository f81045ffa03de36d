"""Random series chains of pass-through LDP nodes.

Node ``j`` has functionalities ``f_j`` and resources ``r_j`` (``k`` ports
each) with rows

    f_{j,i} <= gamma_{j,i} r_{j,i} + d_j        (i = 1..k)
    a f_{j,1} <= sum_i b_i r_{j,i} + e_j

and ``r_j`` is wired to ``f_{j+1}``.  Intercepts are set so that the
nominal point obtained by pushing ``f_ext`` down the chain with zero
intercepts satisfies every row with slack exactly ``margin``.
"""
from dataclasses import dataclass, field

import numpy as np

from ..ldp import Ldp, Port
from ..lcdp import Edge, LcdpGraph
from .rng import SplitMix64


@dataclass(frozen=True)
class ChainSpec:
    m: int
    k: int = 2
    c: int = 3
    seed: int = 42
    margin: float = 0.1
    f_ext: tuple = ()

    def __post_init__(self):
        if self.m < 2 or self.k < 1:
            raise ValueError("chain needs m >= 2 and k >= 1")
        if self.margin <= 0:
            raise ValueError("margin must be positive")
        if self.c != self.k + 1:
            raise ValueError("rows per node c must equal k + 1")
        f = tuple(float(x) for x in self.f_ext) if self.f_ext else (1.0,) * self.k
        if len(f) != self.k:
            raise ValueError(f"f_ext needs {self.k} entries")
        object.__setattr__(self, "f_ext", f)


def chain_coefficients(spec):
    """Per-node ``(gamma, a, b)`` in draw order: gamma_1..gamma_k, a, b_1..b_k."""
    rng = SplitMix64(spec.seed)
    out = []
    for _ in range(spec.m):
        gamma = np.array([rng.uniform(0.5, 1.5) for _ in range(spec.k)])
        a = rng.uniform(0.5, 2.0)
        b = np.array([rng.uniform(0.5, 2.0) for _ in range(spec.k)])
        out.append((gamma, a, b))
    return out


def nominal_point(spec, coeffs=None):
    """Demand pushed through the chain: list of ``(f_j, r_j)`` per node."""
    coeffs = coeffs or chain_coefficients(spec)
    f = np.array(spec.f_ext)
    pts = []
    for gamma, _, _ in coeffs:
        r = f / gamma
        pts.append((f, r))
        f = r
    return pts


def gen_series_chain(spec):
    """Build the chain as an :class:`LcdpGraph` with nodes ``n00``, ``n01``, ..."""
    coeffs = chain_coefficients(spec)
    nominal = nominal_point(spec, coeffs)
    k, mu = spec.k, spec.margin
    width = len(str(spec.m - 1))
    ids = [f"n{j:0{max(2, width)}d}" for j in range(spec.m)]
    nodes = {}
    for j, ((gamma, a, b), (f, r)) in enumerate(zip(coeffs, nominal)):
        A_F = np.zeros((k + 1, k))
        A_R = np.zeros((k + 1, k))
        rhs = np.zeros(k + 1)
        A_F[:k, :k] = -np.eye(k)
        A_R[:k, :k] = np.diag(gamma)
        rhs[:k] = -mu  # f <= gamma r + d with d = mu
        A_F[k, 0] = -a
        A_R[k, :] = b
        e = a * f[0] - b @ r + mu
        rhs[k] = -e
        nodes[ids[j]] = Ldp([Port(f"f{i + 1}") for i in range(k)],
                            [Port(f"r{i + 1}") for i in range(k)], A_F, A_R, rhs)
    edges = [Edge((ids[j], i), (ids[j + 1], i)) for j in range(spec.m - 1) for i in range(k)]
    ext_f = [(ids[0], i) for i in range(k)]
    ext_r = [(ids[-1], i) for i in range(k)]
    return LcdpGraph(nodes, edges, ext_f, ext_r)
