"""Slow-but-obvious reference implementations shared across test modules."""

from collections import deque

import numpy as np


def bfs_components(n_vertices, pairs):
    """Vertex component labels by breadth-first search over an edge list."""
    adj = [[] for _ in range(n_vertices)]
    for u, v in pairs:
        adj[u].append(v)
        adj[v].append(u)
    labels = np.full(n_vertices, -1, dtype=np.int64)
    next_label = 0
    for start in range(n_vertices):
        if labels[start] >= 0:
            continue
        labels[start] = next_label
        queue = deque([start])
        while queue:
            a = queue.popleft()
            for b in adj[a]:
                if labels[b] < 0:
                    labels[b] = next_label
                    queue.append(b)
        next_label += 1
    return labels


def canonical_partition(labels):
    """Relabel so ids appear in first-seen order; partitions compare equal iff equal here."""
    labels = np.asarray(labels)
    seen = {}
    out = np.empty(labels.size, dtype=np.int64)
    for i, lab in enumerate(labels.tolist()):
        out[i] = seen.setdefault(lab, len(seen))
    return out
