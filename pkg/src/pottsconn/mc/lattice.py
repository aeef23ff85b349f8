"""Rectangular-lattice geometry, bond configurations, and cluster labeling.

Vertices of the nx x ny lattice are indexed v = x + nx*y (x fastest,
row-major).  Edges are indexed with all horizontal edges first, then all
vertical ones:

    periodic:  horizontal edge (x, y)-((x+1) mod nx, y) has index x + nx*y,
               vertical edge (x, y)-(x, (y+1) mod ny) has index
               nx*ny + x + nx*y;
    free:      horizontal edges exist for x < nx-1 with index x + (nx-1)*y,
               vertical edges for y < ny-1 follow them in the same x-fastest
               order.

When a periodic direction has extent 2 the lattice is a multigraph: each
neighbor pair along it is joined by two distinct edges, and both edges carry
their own open/closed state.  Simulations use the square nx = ny = L case;
the rectangular form exists for exhaustive micro-lattice enumeration.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np
from scipy.sparse import coo_matrix
from scipy.sparse.csgraph import connected_components

from ..errors import DomainError


@dataclass(frozen=True)
class Lattice:
    """Immutable edge structure of one lattice geometry."""

    nx: int
    ny: int
    boundary: str
    n_vertices: int
    edge_u: np.ndarray
    edge_v: np.ndarray

    @property
    def L(self) -> int:
        """Side length of a square lattice."""
        if self.nx != self.ny:
            raise DomainError(f"lattice is {self.nx} x {self.ny}, not square")
        return self.nx

    @property
    def n_edges(self) -> int:
        return self.edge_u.size


@dataclass(frozen=True)
class BondConfig:
    """Open/closed state of every lattice edge."""

    open: np.ndarray

    def __post_init__(self):
        if self.open.dtype != np.bool_:
            raise DomainError("bond state must be a boolean array")


@dataclass(frozen=True)
class ColoredConfig:
    """A bond configuration with cluster colors and red spin-cluster labels."""

    bond: BondConfig
    cluster_color: np.ndarray  # bool per FK cluster id, True = red
    red_mask: np.ndarray  # bool per vertex
    red_component: np.ndarray  # spin-cluster label per vertex (meaningful where red)


@lru_cache(maxsize=16)
def build_rect_lattice(nx: int, ny: int, boundary: str = "periodic") -> Lattice:
    if nx < 2 or ny < 2:
        raise DomainError("both lattice extents must be at least 2")
    if boundary not in ("periodic", "free"):
        raise DomainError(f"boundary must be 'periodic' or 'free', got {boundary!r}")
    x, y = np.meshgrid(np.arange(nx), np.arange(ny), indexing="xy")
    x = x.ravel()
    y = y.ravel()
    if boundary == "periodic":
        hu = x + nx * y
        hv = (x + 1) % nx + nx * y
        vu = x + nx * y
        vv = x + nx * ((y + 1) % ny)
    else:
        keep_h = x < nx - 1
        hu = (x + nx * y)[keep_h]
        hv = (x + 1 + nx * y)[keep_h]
        keep_v = y < ny - 1
        vu = (x + nx * y)[keep_v]
        vv = (x + nx * (y + 1))[keep_v]
    edge_u = np.concatenate([hu, vu]).astype(np.int64)
    edge_v = np.concatenate([hv, vv]).astype(np.int64)
    edge_u.setflags(write=False)
    edge_v.setflags(write=False)
    return Lattice(
        nx=nx, ny=ny, boundary=boundary, n_vertices=nx * ny, edge_u=edge_u, edge_v=edge_v
    )


def build_lattice(L: int, boundary: str = "periodic") -> Lattice:
    return build_rect_lattice(L, L, boundary)


def label_components(lattice: Lattice, edge_mask: np.ndarray) -> tuple[int, np.ndarray]:
    """Vertex labels of the subgraph keeping only the masked edges."""
    u = lattice.edge_u[edge_mask]
    v = lattice.edge_v[edge_mask]
    n = lattice.n_vertices
    graph = coo_matrix((np.ones(u.size, dtype=np.int8), (u, v)), shape=(n, n))
    return connected_components(graph, directed=False)


def min_vertex_of_cluster(labels: np.ndarray, n_clusters: int) -> np.ndarray:
    """Per-cluster minimum vertex index, the cluster's deterministic root."""
    roots = np.full(n_clusters, labels.size, dtype=np.int64)
    np.minimum.at(roots, labels, np.arange(labels.size, dtype=np.int64))
    return roots


def all_open(lattice: Lattice) -> BondConfig:
    """Deterministic initial state with every edge open."""
    return BondConfig(open=np.ones(lattice.n_edges, dtype=np.bool_))
