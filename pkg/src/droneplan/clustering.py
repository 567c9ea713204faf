"""Seeded k-means for splitting monitoring sites into tour clusters."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np


class KTooLarge(ValueError):
    pass


@dataclass(frozen=True)
class Clustering:
    k: int
    assignment: np.ndarray
    centroids: np.ndarray
    inertia: float
    inertia_history: tuple[float, ...] = ()

    @property
    def n_iter(self) -> int:
        return max(len(self.inertia_history) - 1, 0)


def _sq_dists(points: np.ndarray, centroids: np.ndarray) -> np.ndarray:
    diff = points[:, None, :] - centroids[None, :, :]
    return np.einsum("ijk,ijk->ij", diff, diff)


def kmeans_plusplus(points: np.ndarray, k: int, rng: np.random.Generator) -> np.ndarray:
    """k-means++ seeding; duplicate points fall back to uniform picks among unused ones."""
    n = len(points)
    chosen = [int(rng.integers(n))]
    closest = _sq_dists(points, points[chosen])[:, 0]
    for _ in range(1, k):
        total = closest.sum()
        if total > 0:
            nxt = int(rng.choice(n, p=closest / total))
        else:
            unused = np.setdiff1d(np.arange(n), chosen)
            nxt = int(rng.choice(unused))
        chosen.append(nxt)
        closest = np.minimum(closest, _sq_dists(points, points[[nxt]])[:, 0])
    return points[chosen].copy()


def _assign(points: np.ndarray, centroids: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    d2 = _sq_dists(points, centroids)
    labels = np.argmin(d2, axis=1)  # first minimum = lowest cluster index
    return labels, d2


def _repair_empty(points, labels, centroids, d2) -> bool:
    """Give each empty cluster the point farthest from its own centroid.

    Donor clusters must keep at least one point. Returns whether any
    repair happened.
    """
    k = len(centroids)
    repaired = False
    for c in range(k):
        counts = np.bincount(labels, minlength=k)
        if counts[c]:
            continue
        own = d2[np.arange(len(points)), labels].copy()
        own[counts[labels] < 2] = -np.inf
        far = int(np.argmax(own))
        labels[far] = c
        centroids[c] = points[far]
        d2[:, c] = np.sum((points - points[far]) ** 2, axis=1)
        repaired = True
    return repaired


def _inertia(points, labels, centroids) -> float:
    diff = points - centroids[labels]
    return float(np.einsum("ij,ij->", diff, diff))


def kmeans(points, k: int, seed: int = 0, max_iter: int = 100, tol: float = 1e-6) -> Clustering:
    """Lloyd's algorithm from k-means++ seeding.

    Stops once an iteration improves inertia by less than ``tol`` (m^2) or
    after ``max_iter`` iterations. The returned centroids are those the
    final assignment was made against, so ``inertia`` is consistent with
    both.
    """
    pts = np.asarray(points, dtype=float).reshape(-1, 2)
    n = len(pts)
    if k < 1:
        raise ValueError(f"k must be >= 1, got {k}")
    if k > n:
        raise KTooLarge(f"k={k} exceeds number of points {n}")
    rng = np.random.default_rng(seed)
    centroids = kmeans_plusplus(pts, k, rng)
    labels, d2 = _assign(pts, centroids)
    repaired = _repair_empty(pts, labels, centroids, d2)
    inertia = _inertia(pts, labels, centroids)
    history = [inertia]
    for _ in range(max_iter):
        new_centroids = np.array([pts[labels == c].mean(axis=0) for c in range(k)])
        new_labels, d2 = _assign(pts, new_centroids)
        repaired = _repair_empty(pts, new_labels, new_centroids, d2)
        new_inertia = _inertia(pts, new_labels, new_centroids)
        history.append(new_inertia)
        improvement = inertia - new_inertia
        centroids, labels, inertia = new_centroids, new_labels, new_inertia
        if improvement < tol and not repaired:
            break
    return Clustering(k, labels, centroids, inertia, tuple(history))


def cluster_subsets(clustering: Clustering) -> list[list[int]]:
    """Point indices per cluster, ordered by cluster index."""
    return [np.flatnonzero(clustering.assignment == c).tolist() for c in range(clustering.k)]
