"""Exact Ising criticality on doubly periodic planar graphs via Kac-Ward determinants."""

from .critical import CriticalPoint, critical_beta, phase_indicator
from .errors import KacWardError
from .examples import builtin
from .free_energy import free_energy, free_energy_ising
from .graphfile import dumps, load, loads
from .homology import HomologyTable, homology_table, partition_function
from .kac_ward import KacWardOperator, half_period_roots, kac_ward_det
from .toric_graph import ToricGraph, WeightSystem, dual, enlarge, isoradial_couplings, validate

__all__ = [
    "CriticalPoint",
    "HomologyTable",
    "KacWardError",
    "KacWardOperator",
    "ToricGraph",
    "WeightSystem",
    "builtin",
    "critical_beta",
    "dual",
    "dumps",
    "enlarge",
    "free_energy",
    "free_energy_ising",
    "half_period_roots",
    "homology_table",
    "isoradial_couplings",
    "kac_ward_det",
    "load",
    "loads",
    "partition_function",
    "phase_indicator",
    "validate",
]
