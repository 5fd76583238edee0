"""
Hexagonal multi-cell layout, pilot groups, interference-cancellation
clusters, BS-pilot reuse slots and user placement.

Cells are indexed ring-major, angle-minor; cell 0 is the centre cell and
group 0 is the group containing it. Hexagons are pointy-top, so adjacent
centres lie along multiples of 60 degrees at distance sqrt(3) * r_c.
"""

import dataclasses
import logging
import math
from dataclasses import dataclass
from typing import Dict, FrozenSet, List, Optional, Tuple

import numpy as np

from tsp_core.exceptions import TopologyError

logger = logging.getLogger(__name__)

SQRT3 = math.sqrt(3)


@dataclass(frozen=True, eq=False)
class NetworkTopology:
    centers: np.ndarray
    """(L, 2) cell centre coordinates in meters."""
    axial: np.ndarray
    """(L, 2) integer axial lattice coordinates."""
    rings: np.ndarray
    cell_radius: float
    protection_radius: float = 20.0
    group_of: Optional[Tuple[int, ...]] = None
    groups: Tuple[FrozenSet[int], ...] = ()

    @property
    def num_cells(self) -> int:
        return len(self.centers)

    @property
    def num_groups(self) -> int:
        return len(self.groups)

    def distance(self, l: int, d: int) -> float:
        return float(np.hypot(*(self.centers[l] - self.centers[d])))

    def group_members(self, l: int) -> FrozenSet[int]:
        if self.group_of is None:
            raise TopologyError("groups have not been assigned")
        return self.groups[self.group_of[l]]

    def interferers(self, l: int) -> List[int]:
        """Cells outside the pilot group of ``l``, in index order."""
        members = self.group_members(l)
        return [d for d in range(self.num_cells) if d not in members]


@dataclass(frozen=True)
class BsReuseSchedule:
    slots: Dict[int, FrozenSet[int]]
    """Cluster cell d -> B_d, the BSs sending their BS pilot together with d."""
    method: str
    """``"lattice"`` or ``"greedy"``."""

    def co_slot(self, d: int) -> FrozenSet[int]:
        return self.slots[d] - {d}


@dataclass(frozen=True, eq=False)
class MsPlacement:
    positions: np.ndarray
    """(L, K, 2) absolute MS coordinates; MS k of cell l is served by cell l."""
    offsets: np.ndarray
    """(L, K, 2) coordinates relative to the serving BS."""

    def serving_cell(self, l: int, k: int) -> int:
        return l


def _hex_distance(q: int, r: int) -> int:
    return max(abs(q), abs(r), abs(q + r))


def _axial_to_xy(axial: np.ndarray, r_c: float) -> np.ndarray:
    q, r = axial[:, 0].astype(float), axial[:, 1].astype(float)
    return np.stack([SQRT3 * r_c * (q + r / 2), 1.5 * r_c * r], axis=1)


def build_hex_layout(n_rings: int, r_c: float, r_d: float = 20.0) -> NetworkTopology:
    if n_rings < 0 or r_c <= 0:
        raise TopologyError(f"invalid layout: n_rings={n_rings}, r_c={r_c}")

    cells = []
    for q in range(-n_rings, n_rings + 1):
        for r in range(-n_rings, n_rings + 1):
            ring = _hex_distance(q, r)
            if ring <= n_rings:
                cells.append((ring, q, r))
    axial = np.array([(q, r) for _, q, r in cells], dtype=int).reshape(-1, 2)
    rings = np.array([ring for ring, _, _ in cells], dtype=int)
    xy = _axial_to_xy(axial, r_c)

    angle = np.round(np.mod(np.arctan2(xy[:, 1], xy[:, 0]), 2 * np.pi), 9)
    angle[angle >= round(2 * np.pi, 9)] = 0.0
    order = np.lexsort((angle, rings))

    return NetworkTopology(
        centers=xy[order],
        axial=axial[order],
        rings=rings[order],
        cell_radius=float(r_c),
        protection_radius=float(r_d),
    )


def _shift_vectors(gamma: int) -> Optional[Tuple[int, int]]:
    b = 0
    while b * b <= gamma:
        for c in range(0, b + 1):
            if b * b + b * c + c * c == gamma:
                return b, c
        b += 1
    return None


def valid_group_numbers(max: int) -> List[int]:
    values = set()
    b = 0
    while b * b <= max:
        for c in range(0, b + 1):
            v = b * b + b * c + c * c
            if 0 < v <= max:
                values.add(v)
        b += 1
    return sorted(values)


def _coset_labels(topology: NetworkTopology, gamma: int) -> List[int]:
    """
    Labels every cell by its coset of the sublattice spanned by the shift
    vector (b, c) and its 60 degree rotation. Labels are numbered in order of
    first appearance, so cell 0 gets label 0.
    """
    shift = _shift_vectors(gamma)
    if shift is None:
        raise TopologyError(f"{gamma} is not of the form b^2+bc+c^2")
    b, c = shift
    keys: Dict[Tuple[int, int], int] = {}
    labels = []
    for q, r in topology.axial:
        key = (((b + c) * q + c * r) % gamma, (-c * q + b * r) % gamma)
        labels.append(keys.setdefault(key, len(keys)))
    return labels


def assign_groups(topology: NetworkTopology, gamma: int) -> NetworkTopology:
    labels = _coset_labels(topology, gamma)
    groups = [frozenset(i for i, g in enumerate(labels) if g == p) for p in range(gamma)]
    if any(len(g) == 0 for g in groups):
        raise TopologyError(f"layout of {topology.num_cells} cells leaves a group of {gamma} empty")
    logger.debug(f"Assigned {topology.num_cells} cells to {gamma} groups: {[len(g) for g in groups]}")
    return dataclasses.replace(topology, group_of=tuple(labels), groups=tuple(groups))


def ic_cluster(topology: NetworkTopology, l: int, layers: int) -> FrozenSet[int]:
    """
    Cell ``l`` and every cell within ``layers`` hexagon steps of it. Near the
    edge of the layout the cluster is clipped to the cells that exist, so
    ``d in ic_cluster(l)`` iff ``l in ic_cluster(d)``.
    """
    if layers < 1:
        raise TopologyError(f"cluster needs at least one layer, got {layers}")
    main_cells = 3 * layers * (layers + 1)
    if topology.num_cells - 1 < main_cells:
        raise TopologyError(
            f"layout has {topology.num_cells} cells, a {layers}-layer cluster needs {main_cells + 1}"
        )
    q, r = (topology.axial - topology.axial[l]).T
    steps = np.maximum(np.maximum(np.abs(q), np.abs(r)), np.abs(q + r))
    cluster = frozenset(int(d) for d in np.flatnonzero(steps <= layers))
    if len(cluster) - 1 < main_cells:
        logger.debug(f"Cluster of cell {l} clipped to {len(cluster) - 1} of {main_cells} cells")
    return cluster


def _greedy_schedule(topology: NetworkTopology, cluster: List[int]) -> Dict[int, List[int]]:
    slots: Dict[int, List[int]] = {d: [d] for d in cluster}
    for cell in range(topology.num_cells):
        if cell in slots:
            continue
        best, best_dist = cluster[0], -1.0
        for d in cluster:
            nearest = min(topology.distance(cell, b) for b in slots[d])
            if nearest > best_dist + 1e-9:
                best, best_dist = d, nearest
        slots[best].append(cell)
    return slots


def bs_reuse_schedule(topology: NetworkTopology, cluster: FrozenSet[int]) -> BsReuseSchedule:
    """
    Splits every BS of the layout into ``len(cluster)`` BS-pilot slots, one
    per cluster cell. Uses the lattice colouring with reuse factor
    ``len(cluster)`` when it separates the cluster cells, and falls back to a
    greedy max-distance packing otherwise.
    """
    members = sorted(cluster)
    reuse = len(members)
    if reuse in valid_group_numbers(reuse):
        labels = _coset_labels(topology, reuse)
        if len({labels[d] for d in members}) == reuse:
            slots = {
                d: frozenset(i for i, g in enumerate(labels) if g == labels[d]) for d in members
            }
            return BsReuseSchedule(slots=slots, method="lattice")

    logger.info(f"Lattice colouring can't separate the cluster of {reuse} cells, packing greedily")
    greedy = _greedy_schedule(topology, members)
    return BsReuseSchedule(slots={d: frozenset(v) for d, v in greedy.items()}, method="greedy")


def _inside_hexagon(x: np.ndarray, y: np.ndarray, r_c: float) -> np.ndarray:
    ax = np.abs(x)
    return (ax <= r_c * SQRT3 / 2) & (np.abs(y) <= r_c - ax / SQRT3)


def drop_users(topology: NetworkTopology, users: int, rng: np.random.Generator) -> MsPlacement:
    """Uniform placement inside each hexagon, outside the protection disk."""
    r_c, r_d = topology.cell_radius, topology.protection_radius
    needed = topology.num_cells * users
    accepted: List[np.ndarray] = []
    count = 0
    while count < needed:
        batch = max(64, 2 * (needed - count))
        x = rng.uniform(-r_c * SQRT3 / 2, r_c * SQRT3 / 2, batch)
        y = rng.uniform(-r_c, r_c, batch)
        keep = _inside_hexagon(x, y, r_c) & (x * x + y * y >= r_d * r_d)
        points = np.stack([x[keep], y[keep]], axis=1)
        accepted.append(points)
        count += len(points)
    offsets = np.concatenate(accepted)[:needed].reshape(topology.num_cells, users, 2)
    positions = offsets + topology.centers[:, None, :]
    return MsPlacement(positions=positions, offsets=offsets)


def hexagon_second_moment(r_c: float, r_d: float = 0.0) -> float:
    """Mean squared distance to the centre of a uniform point in the hexagon minus the disk."""
    area_hex = 3 * SQRT3 / 2 * r_c**2
    area_disk = math.pi * r_d**2
    moment_hex = area_hex * 5 * r_c**2 / 12
    moment_disk = math.pi * r_d**4 / 2
    return (moment_hex - moment_disk) / (area_hex - area_disk)


def hexagon_grid(r_c: float, r_d: float = 0.0, per_radius: int = 40) -> np.ndarray:
    """
    (P, 2) centres of an equal-area square grid over the hexagon minus the
    protection disk, relative to the cell centre. Averages over the rows
    approximate averages over uniformly placed MSs.
    """
    step = r_c / per_radius
    xs = np.arange(-r_c * SQRT3 / 2 + step / 2, r_c * SQRT3 / 2, step)
    ys = np.arange(-r_c + step / 2, r_c, step)
    x, y = (a.ravel() for a in np.meshgrid(xs, ys))
    keep = _inside_hexagon(x, y, r_c) & (x * x + y * y >= r_d * r_d)
    return np.stack([x[keep], y[keep]], axis=1)
