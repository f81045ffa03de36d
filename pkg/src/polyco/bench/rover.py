"""Planetary rover with a bilinear battery model.

Design variables: chassis load ``l``, speed ``v``, chassis power ``p_ch``,
total mass ``m_tot``, battery power ``p_bat``, battery mass ``m_b`` and
battery cost ``c``.  The constraints are

    p_ch >= p0 + kappa (l + m_s) v
    m_tot >= l + m_s
    l >= m_pay + m_b
    p_ch <= p_bat <= alpha m_b + beta c + gamma m_b c
    m_sys >= m_tot,  c_sys >= c

The battery row is bilinear.  Along the query ``(m_pay, v_req)`` it reduces
to the convex curve ``c >= phi(m_b) = (a + b m_b) / (beta + gamma m_b)``.
"""
from dataclasses import dataclass

import numpy as np

from ..convex import ConvexConstraint
from ..errors import ConvexityViolated
from ..ldp import Ldp, Port


@dataclass(frozen=True)
class RoverParams:
    m_s: float = 770.0
    p0: float = 10.0
    kappa: float = 1.0
    alpha: float = 0.975
    beta: float = 0.02733
    gamma: float = 0.0005
    m_pay: float = 0.1
    v_req: float = 0.05

    def __post_init__(self):
        for k, v in self.__dict__.items():
            if not v > 0:
                raise ValueError(f"rover parameter {k} must be positive")
        if self.gamma * self.a - self.beta * self.b <= 0:
            raise ConvexityViolated("gamma*a - beta*b must be positive for a convex cost curve")

    @property
    def a(self):
        return self.p0 + self.kappa * (self.m_s + self.m_pay) * self.v_req

    @property
    def b(self):
        return self.kappa * self.v_req - self.alpha

    @property
    def mass_floor(self):
        """Smallest system mass, reached with no battery."""
        return self.m_s + self.m_pay

    @property
    def mb_zero_cost(self):
        """Battery mass at which the required cost drops to zero."""
        return -self.a / self.b if self.b < 0 else np.inf


def phi(m_b, params=RoverParams()):
    p = params
    m_b = np.asarray(m_b, dtype=float)
    return (p.a + p.b * m_b) / (p.beta + p.gamma * m_b)


def phi_prime(m_b, params=RoverParams()):
    p = params
    m_b = np.asarray(m_b, dtype=float)
    return (p.b * p.beta - p.a * p.gamma) / (p.beta + p.gamma * m_b) ** 2


def phi_second(m_b, params=RoverParams()):
    p = params
    m_b = np.asarray(m_b, dtype=float)
    return 2.0 * p.gamma * (p.gamma * p.a - p.beta * p.b) / (p.beta + p.gamma * m_b) ** 3


def phi_constraint(params=RoverParams()):
    """``phi(m_b) - c <= 0`` over ``("m_b", "c")``."""
    return ConvexConstraint(
        eval=lambda x: float(phi(x[0], params) - x[1]),
        grad=lambda x: np.array([float(phi_prime(x[0], params)), -1.0]),
        coords=("m_b", "c"),
    )


def resource_constraint(params=RoverParams()):
    """The same curve written on the system resources ``(c_sys, m_sys)``."""
    floor = params.mass_floor
    return ConvexConstraint(
        eval=lambda x: float(phi(x[1] - floor, params) - x[0]),
        grad=lambda x: np.array([-1.0, float(phi_prime(x[1] - floor, params))]),
        coords=("c_sys", "m_sys"),
    )


INTERNAL = ("l", "v", "p_ch", "m_tot", "p_bat", "m_b", "c")


def build_rover(params=RoverParams()):
    """Linear part of the rover LDP and the convex battery curve.

    The linear LDP has functionalities ``(m_pay, v_req)``, resources
    ``(c_sys, m_sys)`` and the seven design variables as internal ports.  The
    chassis power row is linearized at the required speed and the two last
    rows bound the functionalities by the query so that the curve, which is
    computed at the query, stays valid.

    Returns
    -------
    dict
        ``{"linear": Ldp, "phi": ConvexConstraint}``
    """
    p = params
    fun = [Port("m_pay", "kg"), Port("v_req", "m/s")]
    res = [Port("c_sys", "USD"), Port("m_sys", "kg")]
    internal = [Port(n, u) for n, u in zip(INTERNAL, ("kg", "m/s", "W", "kg", "W", "kg", "USD"))]
    col = {n: i for i, n in enumerate(INTERNAL)}
    kv = p.kappa * p.v_req
    rows = []  # (A_F, A_R, {internal: coef}, rhs)
    rows.append(([0, 0], [0, 0], {"p_ch": 1.0, "l": -kv}, p.p0 + kv * p.m_s))
    rows.append(([0, 0], [0, 0], {"m_tot": 1.0, "l": -1.0}, p.m_s))
    rows.append(([-1.0, 0], [0, 0], {"l": 1.0, "m_b": -1.0}, 0.0))
    rows.append(([0, 0], [0, 0], {"p_bat": 1.0, "p_ch": -1.0}, 0.0))
    rows.append(([0, -1.0], [0, 0], {"v": 1.0}, 0.0))
    rows.append(([0, 0], [1.0, 0], {"c": -1.0}, 0.0))
    rows.append(([0, 0], [0, 1.0], {"m_tot": -1.0}, 0.0))
    rows.append(([-1.0, 0], [0, 0], {}, -p.m_pay))
    rows.append(([0, -1.0], [0, 0], {}, -p.v_req))
    A_F = np.array([r[0] for r in rows], dtype=float)
    A_R = np.array([r[1] for r in rows], dtype=float)
    A_I = np.zeros((len(rows), len(INTERNAL)))
    for i, r in enumerate(rows):
        for k, v in r[2].items():
            A_I[i, col[k]] = v
    b = np.array([r[3] for r in rows])
    lin = Ldp(fun, res, A_F, A_R, b, internal_ports=internal, A_I=A_I)
    return {"linear": lin, "phi": phi_constraint(p)}


def anchors(N, mb_max=None, params=RoverParams()):
    """``N`` battery-mass anchors spread uniformly over ``[0, mb_max]``.

    The default upper end is the battery mass at which the cost curve
    reaches zero; anchors past it only add cuts that are inactive on the
    frontier.
    """
    if mb_max is None:
        mb_max = params.mb_zero_cost
    if N <= 0:
        return np.zeros(0)
    if N == 1:
        return np.zeros(1)
    return np.linspace(0.0, mb_max, N)


def surrogate(N, params=RoverParams(), mb_max=None):
    """Linear rows plus ``N`` tangent cuts of the battery curve."""
    from ..convex import outer_ldp

    model = build_rover(params)
    a = [np.array([x, float(phi(x, params))]) for x in anchors(N, mb_max, params)]
    return outer_ldp([model["phi"]], [a], model["linear"])


def design_at(c_sys, m_sys, params=RoverParams()):
    """Best-effort internal design for a resource pair: all battery mass
    that fits, cost equal to the budget, minimal speed and power."""
    p = params
    m_b = m_sys - p.m_s - p.m_pay
    l = p.m_pay + m_b
    v = p.v_req
    p_ch = p.p0 + p.kappa * (l + p.m_s) * v
    return dict(l=l, v=v, p_ch=p_ch, m_tot=l + p.m_s, p_bat=p_ch, m_b=m_b, c=c_sys,
                c_sys=c_sys, m_sys=m_sys, m_pay=p.m_pay, v_req=p.v_req)


def constraints_hold(d, params=RoverParams(), tol=1e-9):
    """Direct evaluation of every original (bilinear) constraint."""
    p = params
    checks = [
        d["p_ch"] - (p.p0 + p.kappa * (d["l"] + p.m_s) * d["v"]),
        d["m_tot"] - (d["l"] + p.m_s),
        d["l"] - (d["m_pay"] + d["m_b"]),
        d["p_bat"] - d["p_ch"],
        p.alpha * d["m_b"] + p.beta * d["c"] + p.gamma * d["m_b"] * d["c"] - d["p_bat"],
        d["v"] - d["v_req"],
        d["m_sys"] - d["m_tot"],
        d["c_sys"] - d["c"],
    ]
    nonneg = [d[k] for k in ("l", "v", "p_ch", "m_tot", "p_bat", "m_b", "c")]
    return all(x >= -tol for x in checks) and all(x >= -tol for x in nonneg)


def feasible(points, params=RoverParams()):
    """Exact membership of resource pairs ``(c_sys, m_sys)`` (vectorized).

    Since every requirement grows with mass and cost, the design returned by
    :func:`design_at` is feasible whenever any design is, which makes the
    test exact.
    """
    X = np.atleast_2d(np.asarray(points, dtype=float))
    c_sys, m_sys = X[:, 0], X[:, 1]
    p = params
    m_b = m_sys - p.m_s - p.m_pay
    p_req = p.p0 + p.kappa * (p.m_s + p.m_pay + m_b) * p.v_req
    supply = p.alpha * m_b + p.beta * c_sys + p.gamma * m_b * c_sys
    ok = (m_b >= 0) & (c_sys >= 0) & (supply >= p_req)
    return ok if np.ndim(points) > 1 else bool(ok[0])


def exact_frontier(n=2001, params=RoverParams()):
    """Points of the true Pareto curve, from zero battery to zero cost."""
    mb = np.linspace(0.0, params.mb_zero_cost, n)
    return np.c_[np.maximum(phi(mb, params), 0.0), params.mass_floor + mb]


BOX = ((0.0, 12000.0), (770.0, 900.0))

#: tight box used for the reference grid (the curve spans about 1775 USD x 52 kg)
REF_BOX = ((0.0, 1.05 * float(phi(0.0))), (770.0, 830.0))
REF_GRID = (4000, 8000)
TABLE_N = (2, 5, 10, 20, 50, 100, 200)


def reference(grid=REF_GRID, box=REF_BOX, params=RoverParams()):
    """Grid reference frontier of the exact model."""
    from .metrics import reference_frontier

    return reference_frontier(lambda X: feasible(X, params), box, grid)


def method_iii(N, ref, params=RoverParams(), mb_max=None):
    """Tangent-cut surrogate, exact MOLP query and accuracy metrics.

    The hypervolume gap is the staircase deficit of the vertex set inside the
    normalized ideal-nadir box, with the nadir as reference point.

    Returns
    -------
    (ApproxReport, vertices, surrogate Ldp)
    """
    import time

    from ..convex import ApproxReport, excess, normalizer, verify_recession_orthant
    from ..ldp import query_min_resources, query_polyhedron
    from .metrics import gap_stats, hv_gap_rel, igd

    q = (params.m_pay, params.v_req)
    t0 = time.perf_counter()
    L = surrogate(N, params, mb_max)
    V = query_min_resources(L, q).vertices
    dt = time.perf_counter() - t0
    lo, span = normalizer(ref)
    Vn, Rn = (V - lo) / span, (ref - lo) / span
    delta = 0.0 if verify_recession_orthant(query_polyhedron(L, q)) else float("nan")
    gs = gap_stats(V, ref)
    rep = ApproxReport(
        epsilon=excess(Vn, Rn, "polyline"), delta=delta,
        excess_PC=excess(Vn, Rn, "polyline"), excess_CP=excess(Rn, Vn),
        igd=igd(V, ref, densify_to=200, as_polyline=False), hv_gap_rel=hv_gap_rel(V, ref, kind="deficit", interpolate=False,
                              ref_point=(1.0, 1.0), clip=True),
        max_gap=gs["max_gap"], mean_gap=gs["mean_gap"], n_ineq=L.nrows, points=len(V),
        seconds=dt, label=f"N={N}", epsilon_abs=excess(V, ref, "polyline"))
    return rep, V, L


def certify(vertices, epsilon, params=RoverParams()):
    """Check every inflated vertex ``v + epsilon 1`` against the original
    bilinear constraints; returns one bool per vertex."""
    from ..convex import inflate

    return [constraints_hold(design_at(*inflate(v, epsilon), params=params), params) for v in vertices]
