"""Cluster Monte Carlo updates for critical FK percolation and fuzzy coloring.

Randomness protocol
-------------------
Every sweep consumes exactly ``n_vertices`` uniforms (the cluster block)
followed by ``n_edges`` uniforms (the edge block) from the chain's generator,
and a coloring consumes one further ``n_vertices`` block.  A cluster's
decision variable (activation, spin, or color) is the uniform stored at the
cluster's minimum vertex index, and an edge decision uses the edge's own slot.
The sampled trajectory is therefore a function of the seed alone, independent
of how the labeling backend happens to enumerate clusters, which lets an
enumerated micro-lattice kernel reproduce these updates step for step.

Chain ``m`` of a simulation with seed ``s`` draws from
``numpy.random.Generator(PCG64(SeedSequence(s, spawn_key=(m,))))``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from ..errors import DomainError
from .lattice import (
    BondConfig,
    ColoredConfig,
    Lattice,
    build_lattice,
    label_components,
    min_vertex_of_cluster,
)


def p_critical(q: float) -> float:
    """Self-dual bond density sqrt(q) / (1 + sqrt(q))."""
    if q <= 0:
        raise DomainError("q must be positive")
    s = math.sqrt(q)
    return s / (1.0 + s)


@dataclass(frozen=True)
class LatticeSim:
    """Parameters of one lattice simulation."""

    L: int
    q: float
    boundary: str = "periodic"
    p: float | None = None
    r: float | None = None
    sweeps: int = 200_000
    thermalization: int = 20_000
    seed: int = 0
    batch_count: int = 20

    def __post_init__(self):
        if self.L < 8:
            raise DomainError("L must be at least 8 for simulations")
        if self.q < 1.0:
            raise DomainError("q must be at least 1")
        if self.p is None:
            object.__setattr__(self, "p", p_critical(self.q))
        if self.r is None:
            object.__setattr__(self, "r", 1.0 / self.q)
        if not 0.0 < self.p <= 1.0:
            raise DomainError("p must lie in (0, 1]")
        if not 0.0 < self.r <= 1.0:
            raise DomainError("r must lie in (0, 1]")
        if self.batch_count < 10:
            raise DomainError("batch_count must be at least 10")
        if self.sweeps % self.batch_count != 0:
            raise DomainError("sweeps must be divisible by batch_count")
        if self.thermalization < 0:
            raise DomainError("thermalization must be nonnegative")

    def lattice(self) -> Lattice:
        return build_lattice(self.L, self.boundary)

    def rng_for_chain(self, chain: int) -> np.random.Generator:
        return np.random.Generator(np.random.PCG64(np.random.SeedSequence(self.seed, spawn_key=(chain,))))


def _cluster_uniforms(labels: np.ndarray, n_clusters: int, u_vertex: np.ndarray) -> np.ndarray:
    roots = min_vertex_of_cluster(labels, n_clusters)
    return u_vertex[roots]


def cm_update(
    lattice: Lattice,
    q: float,
    p: float,
    open_state: np.ndarray,
    labels: np.ndarray,
    n_clusters: int,
    u_vertex: np.ndarray,
    u_edge: np.ndarray,
) -> np.ndarray:
    """Core of the single-replica update, on explicit uniforms.

    Clusters with root uniform below 1/q are active; every edge joining two
    active vertices is resampled as Bernoulli(p) and all others keep their
    state.
    """
    cluster_u = _cluster_uniforms(labels, n_clusters, u_vertex)
    active = (cluster_u < 1.0 / q)[labels]
    both_active = active[lattice.edge_u] & active[lattice.edge_v]
    return np.where(both_active, u_edge < p, open_state)


def sw_update(
    lattice: Lattice,
    q_int: int,
    p: float,
    labels: np.ndarray,
    n_clusters: int,
    u_vertex: np.ndarray,
    u_edge: np.ndarray,
) -> np.ndarray:
    """Core of the spin-assignment update, on explicit uniforms.

    Cluster spins are floor(q * root uniform); monochromatic edges reopen with
    probability p, all others close.
    """
    cluster_u = _cluster_uniforms(labels, n_clusters, u_vertex)
    spin = np.minimum((cluster_u * q_int).astype(np.int64), q_int - 1)[labels]
    mono = spin[lattice.edge_u] == spin[lattice.edge_v]
    return mono & (u_edge < p)


def color_update(
    lattice: Lattice,
    r: float,
    bond: BondConfig,
    labels: np.ndarray,
    n_clusters: int,
    u_vertex: np.ndarray,
) -> ColoredConfig:
    """Core of the cluster coloring, on explicit uniforms."""
    cluster_color = _cluster_uniforms(labels, n_clusters, u_vertex) < r
    red_mask = cluster_color[labels]
    red_edge = red_mask[lattice.edge_u] & red_mask[lattice.edge_v]
    _, red_component = label_components(lattice, red_edge)
    return ColoredConfig(
        bond=bond,
        cluster_color=cluster_color,
        red_mask=red_mask,
        red_component=red_component,
    )


def _resolve_labels(lattice: Lattice, open_state: np.ndarray, labels: np.ndarray | None) -> tuple[int, np.ndarray]:
    if labels is None:
        return label_components(lattice, open_state)
    return int(labels.max()) + 1, labels


def chayes_machta_sweep(
    state: BondConfig,
    sim: LatticeSim,
    rng: np.random.Generator,
    labels: np.ndarray | None = None,
) -> BondConfig:
    """One single-replica update valid for any real q >= 1.

    At q = 1 every cluster is active and the sweep degenerates to an
    independent Bernoulli(p) resampling of all bonds.  ``labels`` may carry
    precomputed cluster labels of ``state``.
    """
    lattice = sim.lattice()
    u_vertex = rng.random(lattice.n_vertices)
    u_edge = rng.random(lattice.n_edges)
    n_clusters, labels = _resolve_labels(lattice, state.open, labels)
    return BondConfig(open=cm_update(lattice, sim.q, sim.p, state.open, labels, n_clusters, u_vertex, u_edge))


def swendsen_wang_sweep(
    state: BondConfig,
    sim: LatticeSim,
    rng: np.random.Generator,
    labels: np.ndarray | None = None,
) -> BondConfig:
    """One spin-assignment update for integer q in {2, 3}."""
    q_int = int(sim.q)
    if sim.q != q_int or q_int not in (2, 3):
        raise DomainError("spin-assignment updates require integer q in {2, 3}")
    lattice = sim.lattice()
    u_vertex = rng.random(lattice.n_vertices)
    u_edge = rng.random(lattice.n_edges)
    n_clusters, labels = _resolve_labels(lattice, state.open, labels)
    return BondConfig(open=sw_update(lattice, q_int, sim.p, labels, n_clusters, u_vertex, u_edge))


def color_and_label(
    bond: BondConfig,
    r: float,
    rng: np.random.Generator,
    lattice: Lattice,
    labels: np.ndarray | None = None,
) -> ColoredConfig:
    """Color FK clusters red with probability r and label red spin clusters.

    Red spin clusters are the connected components of the red-vertex subgraph
    under full lattice adjacency (open and closed edges alike), which merges
    adjacent red FK clusters exactly as the spin marginal does.
    """
    if not 0.0 < r <= 1.0:
        raise DomainError("r must lie in (0, 1]")
    u_vertex = rng.random(lattice.n_vertices)
    n_clusters, labels = _resolve_labels(lattice, bond.open, labels)
    return color_update(lattice, r, bond, labels, n_clusters, u_vertex)
