"""``polyco`` command line.

Subcommands::

    polyco compose MODEL --method {monolithic,compositional,hybrid} [--cutoff N]
    polyco query MODEL (--fix-fun v ... | --fix-res v ...) [--method ...]
    polyco bench {series-chain,gripper,rover} [--m LIST] [--N LIST] [--grid NX,NY]

Exit codes: 0 success, 2 input error, 3 infeasible, 4 numeric failure.
Errors are printed to stderr as one JSON object.
"""
import argparse
import csv
import io
import json
import os
import sys
import tempfile
import time

import numpy as np

from . import errors
from ._config import get_tol
from .polyhedron import dumps

EXIT_OK, EXIT_INPUT, EXIT_INFEASIBLE, EXIT_NUMERIC = 0, 2, 3, 4


class InputError(errors.PolycoError):
    pass


def _exit_code(exc):
    if isinstance(exc, errors.EmptyPolyhedron):
        return EXIT_INFEASIBLE
    if isinstance(exc, (errors.NumericInstability, errors.UnboundedObjective,
                        errors.DimensionCapExceeded, errors.OracleInconsistent)):
        return EXIT_NUMERIC
    return EXIT_INPUT


def _fail(exc):
    code = _exit_code(exc)
    payload = {"error": type(exc).__name__, "message": str(exc), "exit_code": code}
    sys.stderr.write(json.dumps(payload) + "\n")
    return code


# ---------------------------------------------------------------------------
# output helpers


def write_atomic(path, text):
    """Write ``text`` to ``path`` through a temporary file and a rename."""
    d = os.path.dirname(os.path.abspath(path))
    os.makedirs(d, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=d, prefix=".tmp-", suffix=os.path.basename(path))
    try:
        with os.fdopen(fd, "w", newline="") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _csv(header, rows):
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for r in rows:
        w.writerow([format(x, ".17g") if isinstance(x, float) else x for x in r])
    return buf.getvalue()


def _gnuplot(title, series, xlabel, ylabel):
    lines = [f"set title {json.dumps(title)}", f"set xlabel {json.dumps(xlabel)}",
             f"set ylabel {json.dumps(ylabel)}", "set datafile separator ','", "set key outside"]
    plots = [f"{json.dumps(f)} using 1:2 every ::1 with {style} title {json.dumps(t)}"
             for f, t, style in series]
    lines.append("plot " + ", \\\n     ".join(plots))
    return "\n".join(lines) + "\n"


def _floats(text):
    out = []
    for tok in text if isinstance(text, list) else [text]:
        out.extend(float(x) for x in str(tok).replace(",", " ").split())
    return out


def _ints(text):
    return [int(x) for x in str(text).replace(",", " ").split()]


# ---------------------------------------------------------------------------
# model loading


def load_model(path):
    """Return an :class:`LcdpGraph` or an :class:`Ldp` from a JSON file."""
    from .lcdp import LcdpGraph
    from .ldp import Ldp

    try:
        with open(path) as fh:
            text = fh.read()
        d = json.loads(text)
    except (OSError, json.JSONDecodeError) as exc:
        raise InputError(f"cannot read model {path!r}: {exc}") from None
    if not isinstance(d, dict):
        raise errors.MalformedGraph("model file must hold a JSON object")
    try:
        if "nodes" in d:
            return LcdpGraph.from_dict(d)
        if "fun_ports" in d:
            return Ldp.from_dict(d)
    except (KeyError, TypeError, ValueError, AttributeError) as exc:
        if isinstance(exc, errors.PolycoError):
            raise
        raise errors.MalformedGraph(f"bad model: {exc}") from None
    raise errors.MalformedGraph("model must be an LCDP graph ('nodes') or an LDP ('fun_ports')")


def _compose(g, method, cutoff, tol):
    from .lcdp import build_monolithic, compose_compositional

    t0 = time.perf_counter()
    if method == "monolithic":
        L = build_monolithic(g)
        rep = {"method": "monolithic", "vars": L.nvars, "rows": L.nrows,
               "seconds": time.perf_counter() - t0}
        return L, rep
    ldp, r = compose_compositional(g, cutoff=cutoff, tol=tol, return_report=True,
                                   hybrid=(method == "hybrid"))
    rep = {"method": r.method, "vars": r.vars, "rows": r.rows, "hybrid": r.hybrid,
           "trigger": r.trigger, "fme_steps": r.fme_steps, "max_rows": r.max_rows,
           "seconds": r.seconds}
    return ldp, rep


# ---------------------------------------------------------------------------
# commands


def cmd_compose(cfg):
    from .lcdp import LcdpGraph

    model = load_model(cfg.model)
    if not isinstance(model, LcdpGraph):
        raise InputError("compose needs an LCDP graph model")
    out, rep = _compose(model, cfg.method, cfg.cutoff, cfg.tol)
    os.makedirs(cfg.out, exist_ok=True)
    write_atomic(os.path.join(cfg.out, "composed.json"), dumps(out.to_dict()))
    write_atomic(os.path.join(cfg.out, "report.json"), dumps(rep))
    print(json.dumps(rep))
    return EXIT_OK


def cmd_query(cfg):
    from .lcdp import LcdpGraph, query_monolithic
    from .ldp import query_max_functionalities, query_min_resources

    model = load_model(cfg.model)
    if (cfg.fix_fun is None) == (cfg.fix_res is None):
        raise InputError("give exactly one of --fix-fun or --fix-res")
    t0 = time.perf_counter()
    if isinstance(model, LcdpGraph):
        if cfg.fix_fun is not None and cfg.method == "monolithic":
            labels = model.external_res_labels
            ui = query_monolithic(model, _floats(cfg.fix_fun))
        else:
            model, _ = _compose(model, "hybrid" if cfg.method == "monolithic" else cfg.method,
                                cfg.cutoff, cfg.tol)
    if not isinstance(model, LcdpGraph):
        if cfg.fix_fun is not None:
            f = _floats(cfg.fix_fun)
            if len(f) != model.n_F:
                raise errors.DimensionMismatch(f"expected {model.n_F} functionality values, got {len(f)}")
            labels = model.res_names
            ui = query_min_resources(model, f)
        else:
            r = _floats(cfg.fix_res)
            if len(r) != model.n_R:
                raise errors.DimensionMismatch(f"expected {model.n_R} resource values, got {len(r)}")
            labels = model.fun_names
            ui = query_max_functionalities(model, r)
    dt = time.perf_counter() - t0
    os.makedirs(cfg.out, exist_ok=True)
    write_atomic(os.path.join(cfg.out, "upper_image.json"), ui.to_json())
    write_atomic(os.path.join(cfg.out, "frontier.csv"), ui.to_csv(header=labels))
    print(json.dumps({"vertices": int(len(ui.vertices)), "rays": int(len(ui.rays)), "seconds": dt}))
    return EXIT_OK


def _bench_chain(cfg):
    from .bench.chain import ChainSpec, gen_series_chain
    from .lcdp import build_monolithic, compose_compositional, query_ldp, query_monolithic

    ms = _ints(cfg.m) if cfg.m else [3, 4, 6, 8, 10]
    rows = []
    for m in ms:
        spec = ChainSpec(m=m, seed=cfg.seed)
        g = gen_series_chain(spec)
        f = np.asarray(spec.f_ext if spec.f_ext else np.ones(spec.k))
        t0 = time.perf_counter()
        L = build_monolithic(g)
        A = query_monolithic(g, f, lifted=L)
        t_mono = time.perf_counter() - t0
        t0 = time.perf_counter()
        ldp, rep = compose_compositional(g, cutoff=cfg.cutoff, tol=cfg.tol, return_report=True)
        B = query_ldp(ldp, f)
        t_comp = time.perf_counter() - t0
        agree = _same_vertices(A.vertices, B.vertices) and np.allclose(A.rays, B.rays)
        rows.append([m, L.nvars, L.nrows, len(A.vertices), rep.vars, rep.rows, rep.hybrid,
                     agree, round(t_mono, 6), round(t_comp, 6)])
        write_atomic(os.path.join(cfg.out, f"chain_m{m}.json"), g.to_json())
        write_atomic(os.path.join(cfg.out, f"chain_m{m}_frontier.csv"),
                     A.to_csv(header=g.external_res_labels))
    header = ["m", "vars", "rows", "vertices", "comp_vars", "comp_rows", "hybrid", "agree",
              "t_mono_s", "t_comp_s"]
    write_atomic(os.path.join(cfg.out, "series_chain.csv"), _csv(header, rows))
    print(_csv(header, rows), end="")
    return EXIT_OK


def _same_vertices(A, B, tol=1e-6):
    A, B = np.atleast_2d(A), np.atleast_2d(B)
    if A.shape != B.shape:
        return False
    D = np.linalg.norm(A[:, None, :] - B[None, :, :], axis=2)
    return bool(np.all(D.min(axis=1) <= tol) and np.all(D.min(axis=0) <= tol))


def _bench_gripper(cfg):
    from .bench.gripper import QUERY, build_gripper
    from .lcdp import compose_compositional, query_ldp, query_monolithic

    g = build_gripper()
    t0 = time.perf_counter()
    A = query_monolithic(g, QUERY)
    t_mono = time.perf_counter() - t0
    t0 = time.perf_counter()
    B = query_ldp(compose_compositional(g, cutoff=cfg.cutoff, tol=cfg.tol), QUERY)
    t_comp = time.perf_counter() - t0
    write_atomic(os.path.join(cfg.out, "gripper.json"), g.to_json())
    write_atomic(os.path.join(cfg.out, "gripper_frontier.csv"), A.to_csv(header=["r_cost", "r_mass"]))
    write_atomic(os.path.join(cfg.out, "gripper.gp"),
                 _gnuplot("gripper exact frontier", [("gripper_frontier.csv", "exact", "linespoints")],
                          "cost (USD)", "mass (kg)"))
    rep = {"vertices": A.vertices.tolist(), "agree": _same_vertices(A.vertices, B.vertices),
           "t_mono_s": t_mono, "t_comp_s": t_comp}
    print(json.dumps(rep))
    return EXIT_OK


def _bench_rover(cfg):
    from .bench import rover
    from .convex import reports_to_csv

    Ns = _ints(cfg.N) if cfg.N else list(rover.TABLE_N)
    grid = tuple(_ints(cfg.grid)) if cfg.grid else rover.REF_GRID
    if len(grid) == 1:
        grid = grid * 2
    ref = rover.reference(grid=grid)
    write_atomic(os.path.join(cfg.out, "rover_reference.csv"), _csv(["c_sys", "m_sys"], ref.tolist()))
    reports, series = [], [("rover_reference.csv", "reference", "lines")]
    for N in Ns:
        rep, V, _ = rover.method_iii(N, ref)
        reports.append(rep)
        name = f"rover_N{N}.csv"
        write_atomic(os.path.join(cfg.out, name), _csv(["c_sys", "m_sys"], V.tolist()))
        series.append((name, f"N={N}", "linespoints"))
    text = reports_to_csv(reports)
    write_atomic(os.path.join(cfg.out, "rover_table.csv"), text)
    write_atomic(os.path.join(cfg.out, "rover.gp"),
                 _gnuplot("rover frontier", series, "cost (USD)", "mass (kg)"))
    print(text, end="")
    return EXIT_OK


def cmd_bench(cfg):
    return {"series-chain": _bench_chain, "gripper": _bench_gripper,
            "rover": _bench_rover}[cfg.suite](cfg)


# ---------------------------------------------------------------------------


def build_parser():
    p = argparse.ArgumentParser(prog="polyco", description="Polyhedral co-design tools.")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--tol", type=float, default=None,
                        help="feasibility tolerance (default: POLYCO_TOL or 1e-8)")
    common.add_argument("--out", default=".", help="output directory")
    common.add_argument("--seed", type=int, default=42)
    common.add_argument("--cutoff", type=int, default=50)
    common.add_argument("--method", choices=["monolithic", "compositional", "hybrid"],
                        default="monolithic")
    sub = p.add_subparsers(dest="command", required=True)

    c = sub.add_parser("compose", parents=[common], help="compose an LCDP graph")
    c.add_argument("model")

    q = sub.add_parser("query", parents=[common], help="run a Pareto query")
    q.add_argument("model")
    q.add_argument("--fix-fun", nargs="+", default=None)
    q.add_argument("--fix-res", nargs="+", default=None)

    b = sub.add_parser("bench", parents=[common], help="run a benchmark suite")
    b.add_argument("suite", choices=["series-chain", "gripper", "rover"])
    b.add_argument("--m", default=None, help="chain lengths, e.g. 3,4,6")
    b.add_argument("--N", default=None, help="anchor counts, e.g. 2,5,10")
    b.add_argument("--grid", default=None, help="reference grid, e.g. 4000,8000")
    return p


def main(argv=None):
    parser = build_parser()
    try:
        cfg = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_INPUT if exc.code else EXIT_OK
    cfg.tol = get_tol(cfg.tol)
    if not cfg.tol > 0:
        return _fail(InputError("tolerance must be positive"))
    if cfg.cutoff < 1:
        return _fail(InputError("cutoff must be at least 1"))
    cmds = {"compose": cmd_compose, "query": cmd_query, "bench": cmd_bench}
    try:
        return cmds[cfg.command](cfg)
    except (errors.PolycoError, ValueError, KeyError, TypeError) as exc:
        return _fail(exc)


if __name__ == "__main__":
    sys.exit(main())
