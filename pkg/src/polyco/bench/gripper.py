"""Tendon-driven rigid gripper as a four-node LCDP.

Nodes and their rows (all quantities nonnegative):

* ``motor``: ``f_grasp <= alpha_f m_mot + beta_f c_mot``
* ``geometry``: ``f_ws <= k_w (L_Al + L_CF)`` and ``L_Al + L_CF >= gamma_L f_grasp``
* ``material``: ``m_f >= rho_Al L_Al + rho_CF L_CF`` and ``c_f >= p_Al L_Al + p_CF L_CF``
* ``aggregate``: ``r_mass >= m_mot + m_f`` and
  ``r_cost >= c_mot + k_AP m_mot + c_f + k_AP m_f + k_AW f_ws + c_A0``

The external demands ``f_grasp`` and ``f_ws`` each feed two nodes through
splitters; the external resources are ``(r_cost, r_mass)``.
"""
import numpy as np

from ..ldp import Ldp, Port
from ..lcdp import Edge, LcdpGraph

PARAMS = dict(alpha_f=400.0, beta_f=0.6, k_w=0.35, gamma_L=0.5,
              rho_Al=0.012, rho_CF=0.004, p_Al=2.0, p_CF=8.0,
              k_AP=200.0, k_AW=50.0, c_A0=300.0)

QUERY = (100.0, 80.0)


def gripper_nodes(params=None):
    p = dict(PARAMS, **(params or {}))
    motor = Ldp([Port("f_grasp", "N")], [Port("m_mot", "kg"), Port("c_mot", "USD")],
                [[-1.0]], [[p["alpha_f"], p["beta_f"]]], [0.0])
    geometry = Ldp([Port("f_ws", "mm"), Port("f_grasp", "N")], [Port("L_Al", "mm"), Port("L_CF", "mm")],
                   [[-1.0, 0.0], [0.0, -p["gamma_L"]]],
                   [[p["k_w"], p["k_w"]], [1.0, 1.0]], [0.0, 0.0])
    material = Ldp([Port("L_Al", "mm"), Port("L_CF", "mm")], [Port("m_f", "kg"), Port("c_f", "USD")],
                   [[-p["rho_Al"], -p["rho_CF"]], [-p["p_Al"], -p["p_CF"]]],
                   [[1.0, 0.0], [0.0, 1.0]], [0.0, 0.0])
    aggregate = Ldp([Port("m_mot", "kg"), Port("c_mot", "USD"), Port("m_f", "kg"), Port("c_f", "USD"),
                     Port("f_ws", "mm")],
                    [Port("r_cost", "USD"), Port("r_mass", "kg")],
                    [[-p["k_AP"], -1.0, -p["k_AP"], -1.0, -p["k_AW"]],
                     [-1.0, 0.0, -1.0, 0.0, 0.0]],
                    [[1.0, 0.0], [0.0, 1.0]], [p["c_A0"], 0.0])
    return {"motor": motor, "geometry": geometry, "material": material, "aggregate": aggregate}


def build_gripper(params=None):
    """The gripper graph; external functionalities ``(f_grasp, f_ws)``,
    external resources ``(r_cost, r_mass)``."""
    nodes = gripper_nodes(params)
    edges = [
        Edge(("motor", 0), ("aggregate", 0)),     # m_mot
        Edge(("motor", 1), ("aggregate", 1)),     # c_mot
        Edge(("geometry", 0), ("material", 0)),   # L_Al
        Edge(("geometry", 1), ("material", 1)),   # L_CF
        Edge(("material", 0), ("aggregate", 2)),  # m_f
        Edge(("material", 1), ("aggregate", 3)),  # c_f
    ]
    ext_f = [[("motor", 0), ("geometry", 1)],      # f_grasp
             [("geometry", 0), ("aggregate", 4)]]  # f_ws
    ext_r = [("aggregate", 0), ("aggregate", 1)]
    return LcdpGraph(nodes, edges, ext_f, ext_r)


def subsystem_rows(g):
    """Rows of the four physical subsystems (splitters excluded)."""
    return sum(g.nodes[k].nrows for k in ("motor", "geometry", "material", "aggregate"))


def stacked_subsystems(g):
    """The four subsystem relations stacked over one shared set of
    physical variables, before any wiring."""
    from ..polyhedron import Coord, Polyhedron

    names = ["f_grasp", "f_ws", "L_Al", "L_CF", "m_mot", "c_mot", "m_f", "c_f", "r_cost", "r_mass"]
    idx = {n: i for i, n in enumerate(names)}
    rows, rhs = [], []
    for k in ("motor", "geometry", "material", "aggregate"):
        ldp = g.nodes[k]
        for i in range(ldp.nrows):
            row = np.zeros(len(names))
            for j, p in enumerate(ldp.fun_ports):
                row[idx[p.name]] += ldp.A_F[i, j]
            for j, p in enumerate(ldp.res_ports):
                row[idx[p.name]] += ldp.A_R[i, j]
            rows.append(row)
            rhs.append(ldp.b[i])
    return Polyhedron([Coord(n) for n in names], np.array(rows), np.array(rhs))
