"""Site-to-PoI coverage and the set-covering placement problem.

A site ``i`` covers PoI ``j`` when their planar distance is at most the
PoI's detection radius. Placement picks the fewest sites covering every
PoI, either greedily or exactly by depth-first branch and bound.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from droneplan.geometry import CandidateSite, PoI, as_array


class UncoverablePoIs(ValueError):
    """Raised when some PoIs are not covered by any site."""

    def __init__(self, pois: Sequence[int]):
        self.pois = list(pois)
        shown = ", ".join(map(str, self.pois[:20]))
        more = f" (+{len(self.pois) - 20} more)" if len(self.pois) > 20 else ""
        super().__init__(f"{len(self.pois)} PoI(s) not covered by any site: {shown}{more}")


class NodeLimitExceeded(RuntimeError):
    pass


@dataclass(frozen=True)
class CoverageMatrix:
    n_sites: int
    n_pois: int
    rows: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        rows = tuple(tuple(sorted(set(r))) for r in self.rows)
        if len(rows) != self.n_sites:
            raise ValueError(f"expected {self.n_sites} rows, got {len(rows)}")
        for r in rows:
            if r and (r[0] < 0 or r[-1] >= self.n_pois):
                raise ValueError(f"PoI index out of range in row {r}")
        object.__setattr__(self, "rows", rows)

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[int]], n_pois: int) -> CoverageMatrix:
        return cls(len(rows), n_pois, tuple(tuple(r) for r in rows))

    @classmethod
    def from_dense(cls, dense) -> CoverageMatrix:
        dense = np.asarray(dense, dtype=bool)
        rows = tuple(tuple(int(j) for j in np.flatnonzero(row)) for row in dense)
        return cls(dense.shape[0], dense.shape[1], rows)

    def to_dense(self) -> np.ndarray:
        out = np.zeros((self.n_sites, self.n_pois), dtype=bool)
        for i, row in enumerate(self.rows):
            out[i, list(row)] = True
        return out

    def columns(self) -> list[list[int]]:
        """Covering sites per PoI, ascending."""
        cols: list[list[int]] = [[] for _ in range(self.n_pois)]
        for i, row in enumerate(self.rows):
            for j in row:
                cols[j].append(i)
        return cols

    def uncoverable(self) -> list[int]:
        return [j for j, col in enumerate(self.columns()) if not col]


@dataclass(frozen=True)
class CoverSolution:
    selected: tuple[int, ...]
    objective: int
    method: str

    def to_json(self) -> dict:
        return {"method": self.method, "objective": self.objective, "selected_sites": list(self.selected)}

    @classmethod
    def from_json(cls, data: dict) -> CoverSolution:
        return cls(tuple(data["selected_sites"]), int(data["objective"]), data["method"])


def build_coverage(sites: Sequence[CandidateSite], pois: Sequence[PoI], chunk: int = 4096) -> CoverageMatrix:
    """Incidence of ``distance(site, poi) <= poi.radius`` (boundary inclusive)."""
    site_xy = as_array([s.position for s in sites])
    poi_xy = as_array([p.position for p in pois])
    radii = np.array([p.radius for p in pois], dtype=float)
    rows: list[tuple[int, ...]] = []
    for start in range(0, len(sites), chunk):
        block = site_xy[start : start + chunk]
        d = np.hypot(block[:, None, 0] - poi_xy[None, :, 0], block[:, None, 1] - poi_xy[None, :, 1])
        hits = d <= radii[None, :]
        rows.extend(tuple(np.flatnonzero(h).tolist()) for h in hits)
    return CoverageMatrix(len(sites), len(pois), tuple(rows))


def greedy_cover(C: CoverageMatrix) -> CoverSolution:
    """Repeatedly take the site covering the most uncovered PoIs (lowest index on ties)."""
    missing = C.uncoverable()
    if missing:
        raise UncoverablePoIs(missing)
    cols = C.columns()
    gain = np.array([len(r) for r in C.rows], dtype=np.int64)
    covered = np.zeros(C.n_pois, dtype=bool)
    remaining = C.n_pois
    selected = []
    while remaining:
        best = int(np.argmax(gain))
        selected.append(best)
        for j in C.rows[best]:
            if not covered[j]:
                covered[j] = True
                remaining -= 1
                for i in cols[j]:
                    gain[i] -= 1
    selected.sort()
    return CoverSolution(tuple(selected), len(selected), "greedy")


def exact_cover(C: CoverageMatrix, node_limit: int = 1_000_000) -> CoverSolution:
    """Minimum-cardinality cover by depth-first branch and bound.

    Branches on the uncovered PoI with the fewest covering sites; prunes
    with ``depth + ceil(uncovered / best_row_gain)``. The greedy cover seeds
    the incumbent. Raises :class:`NodeLimitExceeded` when optimality cannot
    be proven within ``node_limit`` search nodes.
    """
    missing = C.uncoverable()
    if missing:
        raise UncoverablePoIs(missing)
    if C.n_pois == 0:
        return CoverSolution((), 0, "exact")

    masks = [sum(1 << j for j in row) for row in C.rows]
    cols = C.columns()
    full = (1 << C.n_pois) - 1
    incumbent = list(greedy_cover(C).selected)
    nodes = 0

    def search(covered: int, chosen: list[int]):
        nonlocal incumbent, nodes
        nodes += 1
        if nodes > node_limit:
            raise NodeLimitExceeded(f"exact cover exceeded {node_limit} nodes")
        uncovered = full & ~covered
        if not uncovered:
            if len(chosen) < len(incumbent):
                incumbent = sorted(chosen)
            return
        n_unc = bin(uncovered).count("1")
        max_gain = max(bin(m & uncovered).count("1") for m in masks)
        if len(chosen) + -(-n_unc // max_gain) >= len(incumbent):
            return
        # PoI with the fewest covering sites, lowest index on ties
        target = min(
            (j for j in range(C.n_pois) if uncovered >> j & 1),
            key=lambda j: (len(cols[j]), j),
        )
        branches = sorted(cols[target], key=lambda i: (-bin(masks[i] & uncovered).count("1"), i))
        for i in branches:
            chosen.append(i)
            search(covered | masks[i], chosen)
            chosen.pop()

    search(0, [])
    return CoverSolution(tuple(sorted(incumbent)), len(incumbent), "exact")


def solve_cover(C: CoverageMatrix, method: str = "greedy", node_limit: int = 1_000_000) -> CoverSolution:
    if method == "greedy":
        return greedy_cover(C)
    if method == "exact":
        return exact_cover(C, node_limit)
    raise ValueError(f"unknown cover method {method!r}")
