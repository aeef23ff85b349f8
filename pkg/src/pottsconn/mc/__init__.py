"""Monte Carlo side: critical FK lattices, cluster sweeps, and connectivity estimators."""

from .lattice import (
    BondConfig,
    ColoredConfig,
    Lattice,
    all_open,
    build_lattice,
    build_rect_lattice,
    label_components,
    min_vertex_of_cluster,
)
from .micro import (
    MicroTables,
    build_tables,
    chi_squared_pvalue,
    exact_distribution,
    run_ensemble,
    single_chain_states,
)
from .observables import (
    ConnectivityResult,
    Estimate,
    connectivity_ratio,
    default_triangle,
    integrated_autocorrelation_time,
)
from .samplers import (
    LatticeSim,
    chayes_machta_sweep,
    cm_update,
    color_and_label,
    color_update,
    p_critical,
    sw_update,
    swendsen_wang_sweep,
)

__all__ = [
    "BondConfig",
    "ColoredConfig",
    "ConnectivityResult",
    "Estimate",
    "Lattice",
    "LatticeSim",
    "MicroTables",
    "all_open",
    "build_lattice",
    "build_rect_lattice",
    "build_tables",
    "chayes_machta_sweep",
    "chi_squared_pvalue",
    "cm_update",
    "color_and_label",
    "color_update",
    "connectivity_ratio",
    "default_triangle",
    "exact_distribution",
    "integrated_autocorrelation_time",
    "label_components",
    "min_vertex_of_cluster",
    "p_critical",
    "run_ensemble",
    "single_chain_states",
    "sw_update",
    "swendsen_wang_sweep",
]
