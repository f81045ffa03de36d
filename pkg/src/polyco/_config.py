"""Global numerical tolerances.

``POLYCO_TOL`` in the environment overrides the core default at import time.
"""
import os


def _env_tol(default):
    raw = os.environ.get("POLYCO_TOL")
    if not raw:
        return default
    try:
        val = float(raw)
    except ValueError:
        return default
    return val if val > 0 else default


#: row comparison, feasibility and redundancy slack
TOL = _env_tol(1e-8)
#: objective-space distances in the MOLP solvers
MOLP_TOL = 1e-7
#: coefficients below this magnitude (after row scaling) are treated as zero
ZERO_TOL = 1e-12
#: default dimension cap for the vertex-enumeration oracle
VERTEX_DIM_CAP = 8


def get_tol(tol=None):
    return TOL if tol is None else float(tol)
