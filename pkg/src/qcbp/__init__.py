"""Quantum-classical branch-and-price vertex coloring at desk scale.

Solves graph coloring through a set-partitioning master problem whose pricing
step samples independent sets from an emulated neutral-atom adiabatic
evolution, safeguarded by an exact classical pricer.
"""

from .bench import RunConfig, generate_dataset, run_benchmark
from .bnp import SolverConfig, solve_qcbp
from .chromatic import exact_chromatic_number
from .embedding import EmbedParams, Register, audit, embed
from .emulator import EmulatorConfig, PulseSchedule, build_adiabatic_pulse, evolve, sample
from .graphs import Graph, parse_dimacs, random_ud_graph
from .hcg import HcgCaps, run_hcg
from .pricing import PricingEngine, SamplerConfig, exact_mwis
from .rmp import ColumnPool, init_rmp, solve_rmp

__all__ = [
    "ColumnPool",
    "EmbedParams",
    "EmulatorConfig",
    "Graph",
    "HcgCaps",
    "PricingEngine",
    "PulseSchedule",
    "Register",
    "RunConfig",
    "SamplerConfig",
    "SolverConfig",
    "audit",
    "build_adiabatic_pulse",
    "embed",
    "evolve",
    "exact_chromatic_number",
    "exact_mwis",
    "generate_dataset",
    "init_rmp",
    "parse_dimacs",
    "random_ud_graph",
    "run_benchmark",
    "run_hcg",
    "sample",
    "solve_qcbp",
    "solve_rmp",
]
__version__ = "0.1.0"
