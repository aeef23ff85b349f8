"""Exact stationarity checks on enumerable lattices.

For lattices small enough to enumerate every bond configuration (a 2 x 2 torus
has 2^8, a 2 x 3 torus 2^12), this module precomputes per-configuration label
tables and runs many update chains in lockstep with numpy, so tens of millions
of sweeps take seconds.  Because both the production sweeps and this kernel
resolve a cluster's decision uniform through the cluster's minimum vertex
index, the two implementations produce identical trajectories from identical
generator streams; ``single_chain_states`` exposes that trajectory for the
step-identity test.

The empirical distribution of visited configurations can then be tested
against the exact random-cluster weights (p/(1-p))^open * q^clusters.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy import stats

from ..errors import DomainError
from .lattice import Lattice


@dataclass(frozen=True)
class MicroTables:
    """Per-configuration lookup tables for an enumerable lattice."""

    lattice: Lattice
    open_table: np.ndarray  # (n_cfg, n_edges) bool
    root_table: np.ndarray  # (n_cfg, n_vertices) min vertex of each vertex's cluster
    n_open: np.ndarray  # (n_cfg,)
    n_clusters: np.ndarray  # (n_cfg,)


def _components_union_find(n_vertices: int, pairs: list[tuple[int, int]]) -> np.ndarray:
    parent = list(range(n_vertices))

    def find(a: int) -> int:
        while parent[a] != a:
            parent[a] = parent[parent[a]]
            a = parent[a]
        return a

    for u, v in pairs:
        ru, rv = find(u), find(v)
        if ru != rv:
            parent[max(ru, rv)] = min(ru, rv)
    return np.array([find(v) for v in range(n_vertices)], dtype=np.int64)


def build_tables(lattice: Lattice) -> MicroTables:
    n_e = lattice.n_edges
    if n_e > 16:
        raise DomainError(f"{n_e} edges is too many to enumerate")
    n_v = lattice.n_vertices
    n_cfg = 1 << n_e
    edges = list(zip(lattice.edge_u.tolist(), lattice.edge_v.tolist()))
    open_table = np.zeros((n_cfg, n_e), dtype=np.bool_)
    root_table = np.zeros((n_cfg, n_v), dtype=np.int64)
    n_clusters = np.zeros(n_cfg, dtype=np.int64)
    for cfg in range(n_cfg):
        mask = [(cfg >> e) & 1 == 1 for e in range(n_e)]
        open_table[cfg] = mask
        roots = _components_union_find(n_v, [edges[e] for e in range(n_e) if mask[e]])
        # with union-by-min, the representative is already the minimum vertex
        root_table[cfg] = roots
        n_clusters[cfg] = np.unique(roots).size
    return MicroTables(
        lattice=lattice,
        open_table=open_table,
        root_table=root_table,
        n_open=open_table.sum(axis=1).astype(np.int64),
        n_clusters=n_clusters,
    )


def exact_distribution(tables: MicroTables, q: float, p: float) -> np.ndarray:
    """Normalized random-cluster weights (p/(1-p))^open * q^clusters per configuration."""
    if not 0.0 < p < 1.0:
        raise DomainError("p must lie in (0, 1)")
    log_w = tables.n_open * np.log(p / (1.0 - p)) + tables.n_clusters * np.log(q)
    w = np.exp(log_w - log_w.max())
    return w / w.sum()


def _chain_generators(seed: int, n_chains: int) -> list[np.random.Generator]:
    return [
        np.random.Generator(np.random.PCG64(np.random.SeedSequence(seed, spawn_key=(m,))))
        for m in range(n_chains)
    ]


def _step(
    tables: MicroTables,
    kind: str,
    q: float,
    p: float,
    state: np.ndarray,
    u_vertex: np.ndarray,
    u_edge: np.ndarray,
    pow2: np.ndarray,
) -> np.ndarray:
    lattice = tables.lattice
    rows = np.arange(state.size)[:, None]
    root_u = u_vertex[rows, tables.root_table[state]]
    if kind == "cm":
        active = root_u < 1.0 / q
        both = active[:, lattice.edge_u] & active[:, lattice.edge_v]
        new_open = np.where(both, u_edge < p, tables.open_table[state])
    else:
        q_int = int(q)
        spin = np.minimum((root_u * q_int).astype(np.int64), q_int - 1)
        mono = spin[:, lattice.edge_u] == spin[:, lattice.edge_v]
        new_open = mono & (u_edge < p)
    return new_open @ pow2


def run_ensemble(
    tables: MicroTables,
    kind: str,
    q: float,
    p: float,
    seed: int,
    n_chains: int,
    sweeps_per_chain: int,
    thermalization: int = 100,
    thin: int = 10,
    chunk: int = 2000,
) -> np.ndarray:
    """Visit counts over configurations, thinned, pooled across chains.

    ``kind`` is "cm" or "sw".  Chain m uses the documented per-chain stream
    (spawn_key (m,)); every sweep consumes one vertex block then one edge
    block, exactly like the production sweeps.
    """
    if kind not in ("cm", "sw"):
        raise DomainError(f"kind must be 'cm' or 'sw', got {kind!r}")
    lattice = tables.lattice
    n_v, n_e = lattice.n_vertices, lattice.n_edges
    n_cfg = tables.open_table.shape[0]
    pow2 = (1 << np.arange(n_e, dtype=np.int64))
    gens = _chain_generators(seed, n_chains)
    state = np.full(n_chains, n_cfg - 1, dtype=np.int64)  # all edges open
    counts = np.zeros(n_cfg, dtype=np.int64)
    done = 0
    total = thermalization + sweeps_per_chain
    while done < total:
        block = min(chunk, total - done)
        draws = np.stack([g.random((block, n_v + n_e)) for g in gens])
        for i in range(block):
            sweep_index = done + i
            state = _step(
                tables, kind, q, p, state,
                draws[:, i, :n_v], draws[:, i, n_v:], pow2,
            )
            if sweep_index >= thermalization and (sweep_index - thermalization + 1) % thin == 0:
                counts += np.bincount(state, minlength=n_cfg)
        done += block
    return counts


def single_chain_states(
    tables: MicroTables,
    kind: str,
    q: float,
    p: float,
    seed: int,
    n_sweeps: int,
    chain: int = 0,
) -> np.ndarray:
    """Configuration index after each sweep of one chain, for step-identity tests."""
    lattice = tables.lattice
    n_v, n_e = lattice.n_vertices, lattice.n_edges
    pow2 = (1 << np.arange(n_e, dtype=np.int64))
    gen = _chain_generators(seed, chain + 1)[chain]
    state = np.array([tables.open_table.shape[0] - 1], dtype=np.int64)
    out = np.empty(n_sweeps, dtype=np.int64)
    for i in range(n_sweeps):
        u = gen.random(n_v + n_e)
        state = _step(tables, kind, q, p, state, u[None, :n_v], u[None, n_v:], pow2)
        out[i] = state[0]
    return out


def chi_squared_pvalue(counts: np.ndarray, probs: np.ndarray) -> tuple[float, float, int]:
    """(statistic, p-value, dof) of Pearson's chi-squared against exact probabilities."""
    n = counts.sum()
    expected = probs * n
    if expected.min() < 5.0:
        raise DomainError(
            f"minimum expected count {expected.min():.2f} below 5; draw more samples"
        )
    stat = float(((counts - expected) ** 2 / expected).sum())
    dof = counts.size - 1
    return stat, float(stats.chi2.sf(stat, dof)), dof
