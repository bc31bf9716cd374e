"""Facade, workloads, runner and command line tools."""
from .facade import STRUCTURES, Block, DynamicKMismatch, decompose_long_text, designated_block, make_structure
from .runner import CSV_COLUMNS, RunResult, run, sweep, to_csv, update_split
from .workload import (
    InstanceConfig,
    Op,
    Workload,
    default_k,
    gen_omv,
    gen_periodic,
    gen_random,
    gen_threesum,
    omv_reported,
    threesum_reported,
    threesum_solutions,
)

__all__ = [
    "STRUCTURES", "Block", "DynamicKMismatch", "decompose_long_text", "designated_block",
    "make_structure", "CSV_COLUMNS", "RunResult", "run", "sweep", "to_csv", "update_split",
    "InstanceConfig", "Op", "Workload", "default_k", "gen_omv", "gen_periodic", "gen_random",
    "gen_threesum", "omv_reported", "threesum_reported", "threesum_solutions",
]
