"""
Neighbourhood homogeneity of a cube layout
------------------------------------------

Two distinct cells are neighbours when every coordinate differs by at most
one (Moore neighbourhood, hard edges).  ``ihb`` counts ordered pairs of full
neighbours, ``ihb_max`` is that count for a completely full cube of the same
shape and ``ih`` is their ratio.
"""
from __future__ import annotations

import itertools
import json
import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .arrange import Arrangement, DimensionArrangement
from .cube import Cube, _open_text, sparsity

__all__ = [
    "DegenerateShapeError",
    "UndefinedGainError",
    "SearchSpaceError",
    "HomogeneityReport",
    "neighbors",
    "delta",
    "ihb",
    "ihb_max",
    "ih",
    "gain",
    "evaluate",
    "brute_force_best",
]


class DegenerateShapeError(ArithmeticError):
    """Every dimension has a single modality, so no cell has a neighbour."""


class UndefinedGainError(ArithmeticError):
    """The baseline layout has homogeneity 0."""


class SearchSpaceError(ValueError):
    pass


def _offsets(d: int) -> np.ndarray:
    offs = np.array(list(itertools.product((-1, 0, 1), repeat=d)), dtype=np.int64)
    return offs[np.any(offs != 0, axis=1)]


def neighbors(cell: Sequence[int], shape: Sequence[int]) -> set[tuple[int, ...]]:
    """All in-range cells at Chebyshev distance exactly 1 from ``cell``."""
    cell = tuple(int(c) for c in cell)
    if len(cell) != len(shape) or any(not 0 <= c < p for c, p in zip(cell, shape)):
        raise ValueError(f"cell {cell} is outside shape {tuple(shape)}")
    ranges = [range(max(c - 1, 0), min(c + 2, p)) for c, p in zip(cell, shape)]
    return {nb for nb in itertools.product(*ranges) if nb != cell}


def delta(cube: Cube, cell: Sequence[int]) -> int:
    """Number of full neighbours of ``cell``; 0 when the cell itself is empty."""
    full = cube.occupied()
    if tuple(int(c) for c in cell) not in full:
        return 0
    return sum(nb in full for nb in neighbors(cell, cube.shape))


def ihb(cube: Cube) -> int:
    """Raw homogeneity: ordered pairs of full neighbouring cells.

    Each full cell probes its ``3**d - 1`` offsets against the sorted linear
    codes of the occupancy, so the cost follows the number of full cells
    rather than the size of the grid.
    """
    occ = np.asarray(cube.occupancy, dtype=np.int64)
    if len(occ) < 2:
        return 0
    shape = np.asarray(cube.shape, dtype=np.int64)
    codes = np.ravel_multi_index(occ.T, cube.shape)
    codes.sort()
    total = 0
    for off in _offsets(cube.d):
        nb = occ + off
        inside = np.all((nb >= 0) & (nb < shape), axis=1)
        if not inside.any():
            continue
        probe = np.ravel_multi_index(nb[inside].T, cube.shape)
        pos = np.searchsorted(codes, probe)
        pos[pos == len(codes)] = 0
        total += int(np.count_nonzero(codes[pos] == probe))
    return total


def ihb_max(shape: Sequence[int]) -> int:
    """``prod(3 p_t - 2) - prod(p_t)``: neighbour pairs of a completely full cube."""
    if any(int(p) < 1 for p in shape):
        raise ValueError(f"every dimension needs at least one modality, got {tuple(shape)}")
    return math.prod(3 * int(p) - 2 for p in shape) - math.prod(int(p) for p in shape)


def ih(cube: Cube) -> float:
    top = ihb_max(cube.shape)
    if top == 0:
        raise DegenerateShapeError(
            f"degenerate shape {cube.shape}: no cell has a neighbour"
        )
    return ihb(cube) / top


def gain(ih_initial: float, ih_arranged: float) -> float:
    """Relative improvement ``(ih_arranged - ih_initial) / ih_initial``."""
    if ih_initial == 0:
        raise UndefinedGainError("baseline has no adjacent full pairs")
    return (ih_arranged - ih_initial) / ih_initial


@dataclass(frozen=True)
class HomogeneityReport:
    ihb: int
    ihb_max: int
    ih: float
    sparsity: float
    gain: float | None = None

    def to_document(self) -> dict:
        return {
            "schemaVersion": 1,
            "ihb": self.ihb,
            "ihbMax": self.ihb_max,
            "ih": self.ih,
            "sparsity": self.sparsity,
            "gain": self.gain,
        }

    def write(self, dest) -> str:
        text = json.dumps(self.to_document(), indent=2) + "\n"
        with _open_text(dest, "w") as fh:
            fh.write(text)
        return text


def evaluate(cube: Cube, baseline: Cube | None = None) -> HomogeneityReport:
    """Homogeneity report; ``gain`` is filled in against ``baseline`` when possible."""
    raw, top = ihb(cube), ihb_max(cube.shape)
    if top == 0:
        raise DegenerateShapeError(f"degenerate shape {cube.shape}: no cell has a neighbour")
    g = None
    if baseline is not None:
        base = ih(baseline)
        g = gain(base, raw / top) if base > 0 else None
    return HomogeneityReport(raw, top, raw / top, sparsity(cube), g)


def _inverse_perms(p: int) -> tuple[list[tuple[int, ...]], np.ndarray]:
    perms = list(itertools.permutations(range(p)))
    inv = np.empty((len(perms), p), dtype=np.int64)
    for i, order in enumerate(perms):
        inv[i, list(order)] = np.arange(p)
    return perms, inv


def brute_force_best(cube: Cube, limit: int = 10**6) -> tuple[Arrangement, float]:
    """Exhaustive search for the arrangement with the largest ``ih``.

    Orders are enumerated lexicographically, dimension by dimension, and the
    first maximiser wins.  Only practical for tiny shapes: raises
    :class:`SearchSpaceError` when ``prod(p_t!)`` exceeds ``limit``.
    """
    shape = cube.shape
    space = math.prod(math.factorial(p) for p in shape)
    if space > limit:
        raise SearchSpaceError(
            f"{space} configurations for shape {shape} exceed the limit {limit}; "
            "use a smaller cube"
        )
    top = ihb_max(shape)
    if top == 0:
        raise DegenerateShapeError(f"degenerate shape {shape}: no cell has a neighbour")
    occ = np.asarray(cube.occupancy, dtype=np.int64)
    tables = [_inverse_perms(p) for p in shape]
    k = len(occ)
    off_diag = ~np.eye(k, dtype=bool)

    # per dimension, per permutation: which cell pairs sit within one step
    close = []
    for t, (_, inv) in enumerate(tables):
        pos = inv[:, occ[:, t]] if k else np.zeros((len(inv), 0), dtype=np.int64)
        close.append(np.abs(pos[:, :, None] - pos[:, None, :]) <= 1)

    best_val, best_idx = -1, None
    head = [range(len(tab[0])) for tab in tables[:-1]]
    for idx in itertools.product(*head):
        fixed = off_diag.copy()
        for t, i in enumerate(idx):
            fixed &= close[t][i]
        counts = np.count_nonzero(close[-1] & fixed[None, :, :], axis=(1, 2))
        j = int(np.argmax(counts))
        if counts[j] > best_val:
            best_val, best_idx = int(counts[j]), (*idx, j)

    dims = []
    for (perms, _), i, spec in zip(tables, best_idx, cube.schema.dimensions):
        order = perms[i]
        dims.append(
            DimensionArrangement(spec.name, tuple(order), tuple(spec.modalities[j] for j in order))
        )
    arrangement = Arrangement(tuple(dims), tuple(s.modalities for s in cube.schema.dimensions))
    return arrangement, best_val / top
