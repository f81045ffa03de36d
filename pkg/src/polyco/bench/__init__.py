"""Benchmark model builders and frontier metrics."""
from .chain import ChainSpec, gen_series_chain
from .gripper import build_gripper
from .metrics import gap_stats, hv_gap_rel, hypervolume, igd, reference_frontier
from .rover import RoverParams, build_rover
