"""Interconnections of LDPs and the two system-level constructions.

``build_monolithic`` lifts every node port into one block-angular polyhedron
and adds the wiring equalities.  ``compose_compositional`` instead walks the
graph and eliminates wired ports as soon as two subsystems are joined,
falling back to a partially lifted (hybrid) description when an intermediate
system grows past a row budget.
"""
from collections import OrderedDict
from dataclasses import dataclass, field
import json
import time

import numpy as np

from .errors import EmptyFeasible, EmptyPolyhedron, MalformedGraph
from .ldp import Ldp, Port, require_monotone
from .molp import MolpProblem, solve_molp
from .polyhedron import (
    Coord,
    Polyhedron,
    RowLimitExceeded,
    _empty_like,
    dumps,
    product,
    project,
    remove_redundancy,
)


@dataclass(frozen=True)
class Edge:
    """Resource port ``src = (node, res_index)`` wired to functionality port
    ``dst = (node, fun_index)``."""

    src: tuple
    dst: tuple


def _port_ref(x):
    if isinstance(x, (list, tuple)) and len(x) == 2 and isinstance(x[1], (int, np.integer)):
        return (str(x[0]), int(x[1]))
    raise MalformedGraph(f"port reference must be [node, index], got {x!r}")


def _is_group(x):
    return isinstance(x, (list, tuple)) and x and isinstance(x[0], (list, tuple))


def _splitter(n, unit, name="in"):
    """One functionality, ``n`` resources, ``f <= r_k`` for every k."""
    A_F = -np.ones((n, 1))
    A_R = np.eye(n)
    return Ldp([Port(name, unit)], [Port(f"out{k}", unit) for k in range(n)], A_F, A_R,
               np.zeros(n), check=False)


def _merger(n, unit, name="out"):
    """``n`` functionalities, one resource, ``f_k <= r`` for every k."""
    A_F = -np.eye(n)
    A_R = np.ones((n, 1))
    return Ldp([Port(f"in{k}", unit) for k in range(n)], [Port(name, unit)], A_F, A_R,
               np.zeros(n), check=False)


def _fresh(nodes, base):
    name, k = base, 1
    while name in nodes:
        k += 1
        name = f"{base}{k}"
    return name


def _units_ok(a, b):
    return a == b or not a or not b


class LcdpGraph:
    """Multigraph of LDP nodes with resource-to-functionality edges.

    Fan-out (one port in several edges) is resolved during construction by
    inserting splitter or merger nodes, so the stored graph has every port
    in at most one edge.  ``external_fun`` / ``external_res`` entries may be
    a single ``(node, index)`` or a list of them; a list shares one external
    port across several node ports through a splitter (functionalities) or a
    merger (resources).  When omitted, the external lists are all
    unconnected ports in node order.

    Parameters
    ----------
    nodes : mapping of id to Ldp
    edges : sequence of Edge, ``(src, dst)`` pairs or ``{"from":..,"to":..}`` dicts
    external_fun, external_res : sequence, optional
    intersections : sequence of node-id groups, optional
        Nodes over identical ports whose relations are intersected (stacked)
        into one node before anything else.
    """

    def __init__(self, nodes, edges=(), external_fun=None, external_res=None, intersections=()):
        nodes = OrderedDict((str(k), v) for k, v in nodes.items())
        raw_edges = [self._coerce_edge(e) for e in edges]
        redirect = {}
        for group in intersections or ():
            group = [str(g) for g in group]
            for g in group:
                if g not in nodes:
                    raise MalformedGraph(f"intersection references unknown node {g!r}")
            first = nodes[group[0]]
            for g in group[1:]:
                o = nodes[g]
                if o.fun_ports != first.fun_ports or o.res_ports != first.res_ports or o.n_I or first.n_I:
                    raise MalformedGraph(f"intersection group {group} needs identical ports")
            merged = Ldp(first.fun_ports, first.res_ports,
                         np.vstack([nodes[g].A_F for g in group]),
                         np.vstack([nodes[g].A_R for g in group]),
                         np.concatenate([nodes[g].b for g in group]), check=False)
            new_id = "&".join(group)
            rebuilt = OrderedDict()
            for k, v in nodes.items():
                if k == group[0]:
                    rebuilt[new_id] = merged
                elif k not in group:
                    rebuilt[k] = v
            nodes = rebuilt
            for g in group:
                redirect[g] = new_id
        rd = lambda ref: (redirect.get(ref[0], ref[0]), ref[1])
        raw_edges = [Edge(rd(e.src), rd(e.dst)) for e in raw_edges]
        ext_f = None if external_fun is None else [
            [rd(_port_ref(p)) for p in x] if _is_group(x) else rd(_port_ref(x)) for x in external_fun]
        ext_r = None if external_res is None else [
            [rd(_port_ref(p)) for p in x] if _is_group(x) else rd(_port_ref(x)) for x in external_res]

        for e in raw_edges:
            self._check_ref(nodes, e.src, "res")
            self._check_ref(nodes, e.dst, "fun")

        # fan-out on a resource port -> splitter; fan-in on a functionality port -> merger
        edges_out = []
        by_src = OrderedDict()
        for e in raw_edges:
            by_src.setdefault(e.src, []).append(e)
        stage = []
        for src, es in by_src.items():
            if len(es) == 1:
                stage.append(es[0])
                continue
            unit = nodes[src[0]].res_ports[src[1]].unit
            sid = f"split[{src[0]}.{nodes[src[0]].res_ports[src[1]].name}]"
            nodes[sid] = _splitter(len(es), unit)
            stage.append(Edge(src, (sid, 0)))
            for k, e in enumerate(es):
                stage.append(Edge((sid, k), e.dst))
        by_dst = OrderedDict()
        for e in stage:
            by_dst.setdefault(e.dst, []).append(e)
        for dst, es in by_dst.items():
            if len(es) == 1:
                edges_out.append(es[0])
                continue
            unit = nodes[dst[0]].fun_ports[dst[1]].unit
            mid = f"merge[{dst[0]}.{nodes[dst[0]].fun_ports[dst[1]].name}]"
            nodes[mid] = _merger(len(es), unit)
            for k, e in enumerate(es):
                edges_out.append(Edge(e.src, (mid, k)))
            edges_out.append(Edge((mid, 0), dst))

        if ext_f is not None:
            flat = []
            for x in ext_f:
                if _is_group(x):
                    for p in x:
                        self._check_ref(nodes, p, "fun")
                    port0 = nodes[x[0][0]].fun_ports[x[0][1]]
                    sid = _fresh(nodes, f"split_{port0.name}")
                    nodes[sid] = _splitter(len(x), port0.unit, port0.name)
                    for k, p in enumerate(x):
                        edges_out.append(Edge((sid, k), p))
                    flat.append((sid, 0))
                else:
                    flat.append(x)
            ext_f = flat
        if ext_r is not None:
            flat = []
            for x in ext_r:
                if _is_group(x):
                    for p in x:
                        self._check_ref(nodes, p, "res")
                    port0 = nodes[x[0][0]].res_ports[x[0][1]]
                    mid = _fresh(nodes, f"merge_{port0.name}")
                    nodes[mid] = _merger(len(x), port0.unit, port0.name)
                    for k, p in enumerate(x):
                        edges_out.append(Edge(p, (mid, k)))
                    flat.append((mid, 0))
                else:
                    flat.append(x)
            ext_r = flat

        for e in edges_out:
            u = nodes[e.src[0]].res_ports[e.src[1]].unit
            v = nodes[e.dst[0]].fun_ports[e.dst[1]].unit
            if not _units_ok(u, v):
                raise MalformedGraph(f"unit mismatch on edge {e.src}->{e.dst}: {u!r} vs {v!r}")
        used_src = [e.src for e in edges_out]
        used_dst = [e.dst for e in edges_out]
        if len(set(used_src)) != len(used_src) or len(set(used_dst)) != len(used_dst):
            raise MalformedGraph("a port appears in more than one edge after splitter insertion")
        free_f = [(k, i) for k, v in nodes.items() for i in range(v.n_F) if (k, i) not in set(used_dst)]
        free_r = [(k, i) for k, v in nodes.items() for i in range(v.n_R) if (k, i) not in set(used_src)]
        for name, given, free, kind in (("external_fun", ext_f, free_f, "fun"),
                                        ("external_res", ext_r, free_r, "res")):
            if given is None:
                continue
            for p in given:
                self._check_ref(nodes, p, kind)
            if sorted(given) != sorted(free) or len(set(given)) != len(given):
                raise MalformedGraph(f"{name} must list exactly the unconnected ports; "
                                     f"unconnected: {self._fmt(nodes, free, kind)}")
        self.nodes = nodes
        self.edges = tuple(edges_out)
        self.external_fun = tuple(ext_f if ext_f is not None else free_f)
        self.external_res = tuple(ext_r if ext_r is not None else free_r)

    # ------------------------------------------------------------------
    @staticmethod
    def _coerce_edge(e):
        if isinstance(e, Edge):
            return Edge(_port_ref(e.src), _port_ref(e.dst))
        if isinstance(e, dict):
            return Edge(_port_ref(e["from"]), _port_ref(e["to"]))
        src, dst = e
        return Edge(_port_ref(src), _port_ref(dst))

    @staticmethod
    def _check_ref(nodes, ref, kind):
        node, idx = ref
        if node not in nodes:
            raise MalformedGraph(f"unknown node {node!r}")
        n = nodes[node].n_F if kind == "fun" else nodes[node].n_R
        if not 0 <= idx < n:
            raise MalformedGraph(f"node {node!r} has no {kind} port {idx}")

    @staticmethod
    def _fmt(nodes, refs, kind):
        return [f"{k}.{(nodes[k].fun_ports if kind == 'fun' else nodes[k].res_ports)[i].name}" for k, i in refs]

    def label(self, ref, kind):
        node, idx = ref
        ports = self.nodes[node].fun_ports if kind == "fun" else self.nodes[node].res_ports
        return f"{node}.{ports[idx].name}"

    def port(self, ref, kind):
        node, idx = ref
        return (self.nodes[node].fun_ports if kind == "fun" else self.nodes[node].res_ports)[idx]

    @property
    def external_fun_labels(self):
        return [self.label(p, "fun") for p in self.external_fun]

    @property
    def external_res_labels(self):
        return [self.label(p, "res") for p in self.external_res]

    def __repr__(self):
        return f"LcdpGraph(nodes={len(self.nodes)}, edges={len(self.edges)})"

    # ------------------------------------------------------------------
    def to_dict(self):
        return {
            "nodes": {k: v.to_dict() for k, v in self.nodes.items()},
            "edges": [{"from": list(e.src), "to": list(e.dst)} for e in self.edges],
            "external_fun": [list(p) for p in self.external_fun],
            "external_res": [list(p) for p in self.external_res],
        }

    def to_json(self, indent=1):
        return dumps(self.to_dict(), indent=indent)

    @classmethod
    def from_dict(cls, d):
        if not isinstance(d, dict) or "nodes" not in d:
            raise MalformedGraph("graph JSON needs a 'nodes' object")
        try:
            nodes = OrderedDict((k, Ldp.from_dict(v)) for k, v in d["nodes"].items())
        except (KeyError, TypeError, ValueError) as exc:
            if isinstance(exc, MalformedGraph):
                raise
            raise MalformedGraph(f"bad node description: {exc}") from exc
        return cls(nodes, d.get("edges", []), d.get("external_fun"), d.get("external_res"),
                   d.get("intersections", ()))

    @classmethod
    def from_json(cls, text):
        try:
            d = json.loads(text)
        except json.JSONDecodeError as exc:
            raise MalformedGraph(f"invalid JSON: {exc}") from exc
        return cls.from_dict(d)


# ---------------------------------------------------------------------------
# monolithic lifting


@dataclass(frozen=True)
class LiftedSystem:
    """Block-angular lifted polyhedron with selectors for the external ports."""

    poly: Polyhedron
    S_F: np.ndarray
    S_R: np.ndarray
    node_rows: int = 0
    edge_rows: int = 0

    @property
    def S_ext(self):
        return np.concatenate([self.S_F, self.S_R])

    @property
    def nvars(self):
        return self.poly.dim

    @property
    def nrows(self):
        return self.poly.nrows

    def to_dict(self):
        return {"polyhedron": self.poly.to_dict(), "S_F": self.S_F.tolist(), "S_R": self.S_R.tolist()}


def _node_coords(nid, ldp):
    return [Coord(f"{nid}.{p.name}", p.unit, True)
            for p in ldp.fun_ports + ldp.res_ports + ldp.internal_ports]


def build_monolithic(g, one_sided=False):
    """Lift all node ports into one polyhedron and add the wiring rows.

    Each edge contributes ``z_f - z_r >= 0`` and, unless ``one_sided``, the
    reverse row, so the default row count is ``sum of node rows + 2|E|``.
    """
    coords, offsets = [], {}
    for nid, ldp in g.nodes.items():
        offsets[nid] = len(coords)
        coords.extend(_node_coords(nid, ldp))
    n = len(coords)
    blocks_M, blocks_m = [], []
    for nid, ldp in g.nodes.items():
        B = np.zeros((ldp.nrows, n))
        o = offsets[nid]
        B[:, o:o + ldp.nvars] = np.hstack([ldp.A_F, ldp.A_R, ldp.A_I])
        blocks_M.append(B)
        blocks_m.append(ldp.b)
    node_rows = sum(l.nrows for l in g.nodes.values())

    def zf(ref):
        return offsets[ref[0]] + ref[1]

    def zr(ref):
        return offsets[ref[0]] + g.nodes[ref[0]].n_F + ref[1]

    E = []
    for e in g.edges:
        row = np.zeros(n)
        row[zf(e.dst)] += 1.0
        row[zr(e.src)] -= 1.0
        E.append(row)
    E = np.array(E).reshape(-1, n)
    parts = blocks_M + [E] + ([] if one_sided else [-E])
    M = np.vstack(parts) if parts else np.zeros((0, n))
    m = np.concatenate(blocks_m + [np.zeros(E.shape[0] * (1 if one_sided else 2))])
    S_F = np.array([zf(p) for p in g.external_fun], dtype=int)
    S_R = np.array([zr(p) for p in g.external_res], dtype=int)
    return LiftedSystem(Polyhedron(coords, M, m), S_F, S_R, node_rows, M.shape[0] - node_rows)


def query_monolithic(g, f_fixed, one_sided=False, lifted=None, tol=None):
    """Pareto-minimal external resources for fixed external functionalities
    from the lifted system (two pinning rows per functionality)."""
    L = lifted if lifted is not None else build_monolithic(g, one_sided=one_sided)
    f = np.asarray(f_fixed, dtype=float).ravel()
    if f.size != L.S_F.size:
        raise ValueError(f"expected {L.S_F.size} functionality values, got {f.size}")
    n = L.poly.dim
    Pin = np.zeros((f.size, n))
    Pin[np.arange(f.size), L.S_F] = 1.0
    M = np.vstack([L.poly.M, Pin, -Pin])
    m = np.concatenate([L.poly.m, f, -f])
    P = Polyhedron(L.poly.coords, M, m)
    C = np.zeros((L.S_R.size, n))
    C[np.arange(L.S_R.size), L.S_R] = 1.0
    return solve_molp(MolpProblem(C, P, "min"), tol=tol)


# ---------------------------------------------------------------------------
# edge classification


@dataclass(frozen=True)
class EdgeClasses:
    series: tuple
    feedback: tuple
    components: tuple


def classify_edges(g):
    """Split edges into series (tree/forward/cross) and feedback (back) edges
    by a DFS over nodes in id order; also return undirected components."""
    ids = sorted(g.nodes)
    out = {k: [] for k in ids}
    for i, e in enumerate(g.edges):
        out[e.src[0]].append((e.dst[0], i))
    for k in out:
        out[k].sort(key=lambda t: (t[0], t[1]))
    state = {k: 0 for k in ids}  # 0 new, 1 on stack, 2 done
    feedback = set()
    for root in ids:
        if state[root]:
            continue
        state[root] = 1
        stack = [(root, iter(out[root]))]
        while stack:
            v, it = stack[-1]
            nxt = next(it, None)
            if nxt is None:
                state[v] = 2
                stack.pop()
                continue
            w, ei = nxt
            if state[w] == 1:
                feedback.add(ei)
            elif state[w] == 0:
                state[w] = 1
                stack.append((w, iter(out[w])))
    series = tuple(i for i in range(len(g.edges)) if i not in feedback)
    # undirected components
    parent = {k: k for k in ids}

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for e in g.edges:
        a, b = find(e.src[0]), find(e.dst[0])
        if a != b:
            parent[max(a, b)] = min(a, b)
    comps = OrderedDict()
    for k in ids:
        comps.setdefault(find(k), []).append(k)
    return EdgeClasses(series, tuple(sorted(feedback)), tuple(tuple(c) for c in comps.values()))


def _topo_order(g, series):
    ids = sorted(g.nodes)
    indeg = {k: 0 for k in ids}
    succ = {k: set() for k in ids}
    for i in series:
        e = g.edges[i]
        u, v = e.src[0], e.dst[0]
        if v not in succ[u] and u != v:
            succ[u].add(v)
            indeg[v] += 1
    ready = sorted(k for k in ids if indeg[k] == 0)
    order = []
    import heapq

    heapq.heapify(ready)
    while ready:
        u = heapq.heappop(ready)
        order.append(u)
        for v in sorted(succ[u]):
            indeg[v] -= 1
            if indeg[v] == 0:
                heapq.heappush(ready, v)
    if len(order) != len(ids):
        raise MalformedGraph("series edges contain a cycle")
    return order


# ---------------------------------------------------------------------------
# compositional elimination


def identify(P, keep, drop):
    """Substitute ``x_drop = x_keep``: the exact effect of the wiring
    equality followed by eliminating ``drop``."""
    i, j = P.index(keep), P.index(drop)
    M = np.array(P.M)
    M[:, i] += M[:, j]
    coords = list(P.coords)
    if coords[j].nonneg and not coords[i].nonneg:
        coords[i] = Coord(coords[i].name, coords[i].unit, True)
    M = np.delete(M, j, axis=1)
    del coords[j]
    return Polyhedron(coords, M, P.m)


def _wire(P, pairs, tol=None, row_limit=None):
    """Identify each ``(res_label, fun_label)`` pair and project the shared
    coordinate out, with redundancy removal."""
    for r_lab, f_lab in pairs:
        P = identify(P, f_lab, r_lab)
    wired = {f for _, f in pairs}
    keep = [c.name for c in P.coords if c.name not in wired]
    return project(P, keep, redundancy=True, tol=tol, row_limit=row_limit)


@dataclass
class CompositionReport:
    method: str = "compositional"
    hybrid: bool = False
    fme_steps: int = 0
    max_rows: int = 0
    vars: int = 0
    rows: int = 0
    trigger: str = ""
    seconds: float = 0.0
    lifted_edges: int = 0


def _finish(P_ext, g, report, internal=()):
    fun = g.external_fun_labels
    res = g.external_res_labels
    order = fun + res + list(internal)
    P_ext = P_ext.reorder(order)
    out = Ldp.from_polyhedron(P_ext, fun, res, internal, check=False)
    report.vars = out.nvars
    report.rows = out.nrows
    return out


def compose_compositional(g, cutoff=50, tol=None, return_report=False, hybrid=True):
    """System-level LDP over the external ports by graph-guided elimination.

    Phases: node polyhedra (intersections already stacked at graph
    construction), series contractions in topological order, products of
    the resulting components, feedback closures, and a final projection onto
    the external ports.  If a contraction would leave a subsystem with more
    than ``cutoff`` rows and ``hybrid`` is true, the step is not taken; the
    remaining edges are kept as equality rows and the unexported coordinates
    become internal coordinates of the returned LDP.

    Returns
    -------
    Ldp, or (Ldp, CompositionReport) when ``return_report``.
    """
    t0 = time.perf_counter()
    report = CompositionReport()
    cls = classify_edges(g)
    order = _topo_order(g, cls.series)
    pos = {k: i for i, k in enumerate(order)}
    limit = cutoff if hybrid else None

    # current polyhedron of each cluster, keyed by representative id
    cluster_of = {k: k for k in g.nodes}
    poly = {k: g.nodes[k].polyhedron(prefix=f"{k}.") for k in g.nodes}
    members = {k: [k] for k in g.nodes}
    ext_labels = set(g.external_fun_labels) | set(g.external_res_labels)

    def rlab(e):
        return g.label(e.src, "res")

    def flab(e):
        return g.label(e.dst, "fun")

    series = sorted(cls.series, key=lambda i: (pos[g.edges[i].dst[0]], i))
    pending = list(series) + list(cls.feedback)
    done = set()
    stopped = False

    for phase, edge_ids in (("series", series), ("feedback", list(cls.feedback))):
        if stopped:
            break
        if phase == "feedback":
            # parallel product of the remaining clusters
            reps = sorted(set(cluster_of.values()), key=lambda k: pos[k])
            if len(reps) > 1:
                Pp = poly[reps[0]]
                for r in reps[1:]:
                    Pp = product(Pp, poly[r])
                    members[reps[0]].extend(members[r])
                    del poly[r]
                for k in cluster_of:
                    cluster_of[k] = reps[0]
                poly[reps[0]] = Pp
        for ei in edge_ids:
            e = g.edges[ei]
            cu, cv = cluster_of[e.src[0]], cluster_of[e.dst[0]]
            base = poly[cu] if cu == cv else product(poly[cu], poly[cv])
            try:
                new = _wire(base, [(rlab(e), flab(e))], tol=tol, row_limit=limit)
            except RowLimitExceeded as exc:
                report.hybrid = True
                report.trigger = f"{phase} edge {rlab(e)}->{flab(e)} reached {exc.rows} rows"
                stopped = True
                break
            except EmptyPolyhedron:
                raise
            report.fme_steps += 1
            report.max_rows = max(report.max_rows, new.nrows)
            if limit is not None and new.nrows > limit:
                report.hybrid = True
                report.trigger = f"{phase} edge {rlab(e)}->{flab(e)} reached {new.nrows} rows"
                stopped = True
                break
            if cu != cv:
                keep_rep = cu if pos[cu] <= pos[cv] else cv
                other = cv if keep_rep == cu else cu
                for k, c in cluster_of.items():
                    if c == other:
                        cluster_of[k] = keep_rep
                members[keep_rep].extend(members.pop(other))
                del poly[other]
                poly[keep_rep] = new
            else:
                poly[cu] = new
            done.add(ei)

    reps = sorted(set(cluster_of.values()), key=lambda k: pos[k])
    P = poly[reps[0]]
    for r in reps[1:]:
        P = product(P, poly[r])

    if not stopped:
        try:
            P_ext = project(P, [c.name for c in P.coords if c.name in ext_labels], tol=tol)
        except EmptyPolyhedron:
            raise
        if P_ext.nrows and np.any(np.all(P_ext.M == 0, axis=1) & (P_ext.m > 0)):
            raise EmptyPolyhedron("composed system is empty")
        out = _finish(P_ext, g, report)
    else:
        rest = [ei for ei in pending if ei not in done]
        report.lifted_edges = len(rest)
        rows = []
        for ei in rest:
            e = g.edges[ei]
            row = np.zeros(P.dim)
            row[P.index(flab(e))] += 1.0
            row[P.index(rlab(e))] -= 1.0
            rows.append(row)
        R = np.array(rows).reshape(-1, P.dim)
        P = Polyhedron(P.coords, np.vstack([P.M, R, -R]), np.concatenate([P.m, np.zeros(2 * len(rows))]))
        internal = [c.name for c in P.coords if c.name not in ext_labels]
        out = _finish(P, g, report, internal)
    report.method = "hybrid" if report.hybrid else "compositional"
    report.seconds = time.perf_counter() - t0
    return (out, report) if return_report else out


# ---------------------------------------------------------------------------
# two-node and single-node building blocks


def _rename_unique(P, groups):
    """Strip the ``u.``/``v.`` prefixes when that leaves the names unique."""
    names = [c.name.split(".", 1)[1] for c in P.coords]
    if len(set(names)) == len(names):
        mapping = {c.name: n for c, n in zip(P.coords, names)}
        return P.rename(mapping), [[mapping[x] for x in grp] for grp in groups]
    return P, groups


def series_contract(u, v, wiring, tol=None):
    """Series composition of two LDPs.

    ``wiring`` lists ``(res_index_of_u, fun_index_of_v)`` pairs.  The result
    provides ``u``'s functionalities and ``v``'s unwired functionalities and
    needs ``u``'s unwired resources and ``v``'s resources; internal
    coordinates are projected out.
    """
    wiring = [(int(a), int(b)) for a, b in wiring]
    for a, b in wiring:
        if not (0 <= a < u.n_R and 0 <= b < v.n_F):
            raise MalformedGraph(f"wiring pair {(a, b)} out of range")
        if not _units_ok(u.res_ports[a].unit, v.fun_ports[b].unit):
            raise MalformedGraph(f"unit mismatch on wiring pair {(a, b)}")
    P = product(u.polyhedron("u."), v.polyhedron("v."))
    pairs = [(f"u.{u.res_ports[a].name}", f"v.{v.fun_ports[b].name}") for a, b in wiring]
    Q = _wire(P, pairs, tol=tol)
    wired_r = {a for a, _ in wiring}
    wired_f = {b for _, b in wiring}
    fun = [f"u.{p.name}" for p in u.fun_ports] + [f"v.{p.name}" for i, p in enumerate(v.fun_ports) if i not in wired_f]
    res = [f"u.{p.name}" for i, p in enumerate(u.res_ports) if i not in wired_r] + [f"v.{p.name}" for p in v.res_ports]
    Q = project(Q, fun + res, tol=tol)
    Q = Q.reorder(fun + res)
    Q, (fun, res) = _rename_unique(Q, [fun, res])
    out = Ldp.from_polyhedron(Q, fun, res, check=False)
    return require_monotone(out)


def feedback_close(n, fun_index, res_index, tol=None):
    """Close a loop on one LDP: identify resource ``res_index`` with
    functionality ``fun_index`` and eliminate the shared coordinate.

    Raises
    ------
    EmptyPolyhedron
        If the closed loop is infeasible.
    """
    if not _units_ok(n.fun_ports[fun_index].unit, n.res_ports[res_index].unit):
        raise MalformedGraph("feedback ports have different units")
    P = n.polyhedron()
    f_lab = n.fun_ports[fun_index].name
    r_lab = n.res_ports[res_index].name
    Q = _wire(P, [(r_lab, f_lab)], tol=tol)
    fun = [p.name for i, p in enumerate(n.fun_ports) if i != fun_index]
    res = [p.name for i, p in enumerate(n.res_ports) if i != res_index]
    Q = project(Q, fun + res, tol=tol)
    if Q.nrows and np.any(np.all(Q.M == 0, axis=1) & (Q.m > 0)):
        raise EmptyPolyhedron("feedback loop is infeasible")
    if Q.is_empty():
        raise EmptyPolyhedron("feedback loop is infeasible")
    Q = Q.reorder(fun + res)
    out = Ldp.from_polyhedron(Q, fun, res, check=False)
    return require_monotone(out)


def query_ldp(ldp, f_fixed, tol=None):
    """Min-resource query on a (possibly hybrid) composed LDP."""
    from .ldp import query_min_resources

    return query_min_resources(ldp, f_fixed, tol=tol)
