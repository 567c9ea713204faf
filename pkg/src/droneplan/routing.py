"""Closed tours over a symmetric distance matrix by cheapest insertion."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np


class TooFewNodes(ValueError):
    pass


@dataclass(frozen=True)
class DistanceMatrix:
    d: np.ndarray

    def __post_init__(self):
        d = np.asarray(self.d, dtype=float)
        if d.ndim != 2 or d.shape[0] != d.shape[1]:
            raise ValueError(f"distance matrix must be square, got shape {d.shape}")
        if not np.all(np.isfinite(d)):
            raise ValueError("distance matrix has non-finite entries")
        if np.any(d < 0) or np.any(np.diag(d) != 0) or not np.array_equal(d, d.T):
            raise ValueError("distance matrix must be symmetric, non-negative, zero diagonal")
        d.setflags(write=False)
        object.__setattr__(self, "d", d)

    @property
    def n(self) -> int:
        return self.d.shape[0]

    def __getitem__(self, ij):
        return self.d[ij]


@dataclass(frozen=True)
class Tour:
    """Closed tour; the edge from the last node back to the first is implied."""

    order: tuple[int, ...]
    cost: float

    def __post_init__(self):
        object.__setattr__(self, "order", tuple(int(i) for i in self.order))
        if len(set(self.order)) != len(self.order):
            raise ValueError(f"tour repeats a node: {self.order}")

    def __len__(self):
        return len(self.order)

    @property
    def n_edges(self) -> int:
        return len(self.order) if len(self.order) >= 2 else 0

    def to_json(self) -> dict:
        return {"order": list(self.order), "cost_m": self.cost}


def distance_matrix(points) -> DistanceMatrix:
    """Pairwise Euclidean distances of ``(n, 2)`` points (or PlanarPoints)."""
    xy = _xy(points)
    if len(xy) == 0:
        raise ValueError("need at least one point")
    d = np.hypot(xy[:, None, 0] - xy[None, :, 0], xy[:, None, 1] - xy[None, :, 1])
    return DistanceMatrix(d)


def _xy(points) -> np.ndarray:
    if isinstance(points, np.ndarray):
        return np.asarray(points, dtype=float).reshape(-1, 2)
    return np.array([(p.x, p.y) if hasattr(p, "x") else tuple(p) for p in points], dtype=float).reshape(-1, 2)


def tour_cost(tour: Tour | Sequence[int], D: DistanceMatrix) -> float:
    """Closed-tour length recomputed from scratch."""
    order = tour.order if isinstance(tour, Tour) else tuple(tour)
    if len(order) < 2:
        return 0.0
    idx = np.asarray(order)
    return float(D.d[idx, np.roll(idx, -1)].sum())


def cia_initial_pair(D: DistanceMatrix, nodes: Sequence[int]) -> Tour:
    """Two-node subtour minimising ``c_ij + c_ji``; ties go to the lexicographically first pair."""
    nodes = sorted(nodes)
    if len(nodes) < 2:
        raise TooFewNodes(f"need at least 2 nodes, got {len(nodes)}")
    best = None
    for a, i in enumerate(nodes):
        for j in nodes[a + 1 :]:
            c = D.d[i, j] + D.d[j, i]
            if best is None or c < best[0]:
                best = (c, i, j)
    c, i, j = best
    return Tour((i, j), float(c))


def insertion_costs(D: DistanceMatrix, order: Sequence[int], candidates: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Cheapest insertion of each candidate into a closed tour.

    Returns ``(cost, position)`` arrays: inserting candidate ``k`` after
    ``order[position]`` lengthens the tour by ``cost``. A singleton tour has
    one zero-length self-edge, so its insertion cost is ``2 * c_ik``.
    Ties go to the lowest edge position.
    """
    tour = np.asarray(order)
    nxt = np.roll(tour, -1)
    delta = D.d[np.ix_(candidates, tour)] + D.d[np.ix_(candidates, nxt)] - D.d[tour, nxt][None, :]
    pos = np.argmin(delta, axis=1)
    return delta[np.arange(len(candidates)), pos], pos


def cia_tour(D: DistanceMatrix, nodes: Sequence[int]) -> Tour:
    """Cheapest Insertion tour through ``nodes``.

    Starts from :func:`cia_initial_pair` and repeatedly inserts the outside
    node whose cheapest insertion is smallest, at its cheapest edge. The
    cost is accumulated incrementally; ties go to the lowest node index,
    then the lowest edge position.
    """
    nodes = sorted(int(k) for k in nodes)
    if not nodes:
        raise TooFewNodes("need at least 1 node")
    if len(nodes) == 1:
        return Tour((nodes[0],), 0.0)
    start = cia_initial_pair(D, nodes)
    order = list(start.order)
    cost = start.cost
    outside = np.array([k for k in nodes if k not in start.order], dtype=int)
    while len(outside):
        c, pos = insertion_costs(D, order, outside)
        best = int(np.argmin(c))
        order.insert(int(pos[best]) + 1, int(outside[best]))
        cost += float(c[best])
        outside = np.delete(outside, best)
    return Tour(tuple(order), cost)
