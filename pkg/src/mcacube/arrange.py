"""
Modality arrangement
--------------------

Every dimension is attached to the factorial axis that it explains best, in
the sense of ``lambda_a * Cr_a(D_t)``, and its modalities are laid out in
ascending order of their coordinates on that axis.  Modalities without any
fact are pushed to the end of the order.
"""
from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .cube import Cube, CubeError, CubeSchema, _open_text
from .mca import (
    Contributions,
    EigenSystem,
    MCAError,
    build_disjunctive,
    burt,
    contributions,
    solve_eigen,
)

__all__ = [
    "DimensionArrangement",
    "Arrangement",
    "select_axis",
    "order_modalities",
    "arrange_cube",
    "read_arrangement",
    "write_arrangement",
]

SCHEMA_VERSION = 1
TIE_TOL = 1e-9


@dataclass(frozen=True)
class DimensionArrangement:
    name: str
    order: tuple[int, ...]
    labels: tuple[str, ...]
    axis: int | None = None
    eigenvalue: float | None = None
    contribution: float | None = None
    score: float | None = None


@dataclass(frozen=True)
class Arrangement:
    """Per-dimension modality orders plus the diagnostics that produced them.

    ``dimensions[t].order[k]`` is the index, in the initial catalog, of the
    modality placed at position ``k``.
    """

    dimensions: tuple[DimensionArrangement, ...]
    initial: tuple[tuple[str, ...], ...] = ()

    @property
    def orders(self) -> list[tuple[int, ...]]:
        return [dim.order for dim in self.dimensions]

    @classmethod
    def identity(cls, schema: CubeSchema) -> "Arrangement":
        dims = tuple(
            DimensionArrangement(dim.name, tuple(range(dim.size)), dim.modalities)
            for dim in schema.dimensions
        )
        return cls(dims, tuple(dim.modalities for dim in schema.dimensions))

    @classmethod
    def from_orders(cls, schema: CubeSchema, orders: Sequence[Sequence[int]]) -> "Arrangement":
        dims = []
        for dim, order in zip(schema.dimensions, orders):
            order = tuple(int(j) for j in order)
            if sorted(order) != list(range(dim.size)):
                raise CubeError(f"order for {dim.name!r} is not a permutation")
            dims.append(
                DimensionArrangement(dim.name, order, tuple(dim.modalities[j] for j in order))
            )
        return cls(tuple(dims), tuple(dim.modalities for dim in schema.dimensions))

    def to_document(self) -> dict:
        return {
            "schemaVersion": SCHEMA_VERSION,
            "dimensions": [
                {
                    "name": dim.name,
                    "axis": dim.axis,
                    "eigenvalue": dim.eigenvalue,
                    "contribution": dim.contribution,
                    "score": dim.score,
                    "order": list(dim.labels),
                }
                for dim in self.dimensions
            ],
        }

    @classmethod
    def from_document(cls, doc: dict, schema: CubeSchema) -> "Arrangement":
        """Resolve an arrangement document against the catalogs of ``schema``."""
        version = doc.get("schemaVersion")
        if version != SCHEMA_VERSION:
            raise CubeError(f"unsupported arrangement schemaVersion {version!r}")
        by_name = {entry["name"]: entry for entry in doc.get("dimensions", [])}
        dims = []
        for spec in schema.dimensions:
            entry = by_name.get(spec.name)
            if entry is None:
                raise CubeError(f"arrangement has no entry for dimension {spec.name!r}")
            labels = tuple(str(x) for x in entry["order"])
            if sorted(labels) != sorted(spec.modalities):
                raise CubeError(
                    f"arrangement order for {spec.name!r} does not match the cube catalog"
                )
            order = tuple(spec.index(label) for label in labels)
            dims.append(
                DimensionArrangement(
                    spec.name,
                    order,
                    labels,
                    entry.get("axis"),
                    entry.get("eigenvalue"),
                    entry.get("contribution"),
                    entry.get("score"),
                )
            )
        return cls(tuple(dims), tuple(spec.modalities for spec in schema.dimensions))


def select_axis(eig: EigenSystem, contrib: Contributions, t: int, tol: float = TIE_TOL) -> int:
    """Axis maximising ``lambda * Cr(D_t)``.

    Scores within ``tol`` of the best count as tied; ties go to the larger
    eigenvalue (again within ``tol``) and then to the smaller axis index.
    """
    if eig.retained == 0 or contrib.per_dimension.shape[0] == 0:
        raise MCAError("no retained factorial axis to select from")
    lam = np.asarray(contrib.eigenvalues)
    score = lam * contrib.per_dimension[:, t]
    cand = np.flatnonzero(score >= score.max() - tol)
    lam_c = lam[cand]
    cand = cand[lam_c >= lam_c.max() - tol]
    return int(cand.min())


def _tiered_sort(indices, keys, tol):
    """Sort by ``keys[0]``; runs within ``tol`` are refined by the next key, then by index."""
    if len(indices) <= 1 or not keys:
        return sorted(indices)
    vals = keys[0][indices]
    order = np.argsort(vals, kind="stable")
    ranked = [indices[i] for i in order]
    svals = vals[order]
    scale = tol * max(1.0, float(np.max(np.abs(keys[0]))))
    out, start = [], 0
    for i in range(1, len(ranked) + 1):
        if i == len(ranked) or svals[i] - svals[i - 1] > scale:
            out.extend(_tiered_sort(ranked[start:i], keys[1:], tol))
            start = i
    return out


def order_modalities(
    eig: EigenSystem,
    t: int,
    axis: int,
    tie_axes: Sequence[int] = (),
    tol: float = TIE_TOL,
) -> list[int]:
    """Ascending-coordinate order of dimension ``t``'s modalities on ``axis``.

    Coordinates closer than ``tol`` are ties.  They are resolved by the
    coordinates on ``tie_axes`` (in the given order) and finally by catalog
    order.  Modalities without facts come last, in catalog order.
    """
    nonempty = eig.nonempty(t)
    present = [j for j in range(len(nonempty)) if nonempty[j]]
    absent = [j for j in range(len(nonempty)) if not nonempty[j]]
    keys = [eig.dimension_coordinates(a, t) for a in (axis, *tie_axes)]
    return _tiered_sort(present, keys, tol) + absent


def arrange_cube(cube: Cube, *, method: str = "jacobi") -> Arrangement:
    """Full pipeline: disjunctive coding, Burt table, eigen system, axis choice, sort.

    Dimensions with at most one non-empty modality skip axis selection; their
    non-empty modality (if any) stays first.
    """
    z = build_disjunctive(cube)
    eig = solve_eigen(burt(z), cube.d, method=method)
    contrib = contributions(eig, z)
    dims = []
    for t, spec in enumerate(cube.schema.dimensions):
        nonempty = eig.nonempty(t)
        if nonempty.sum() <= 1:
            order = [j for j in range(spec.size) if nonempty[j]]
            order += [j for j in range(spec.size) if not nonempty[j]]
            dims.append(
                DimensionArrangement(spec.name, tuple(order), tuple(spec.modalities[j] for j in order))
            )
            continue
        axis = select_axis(eig, contrib, t)
        others = [a for a in range(eig.retained) if a != axis]
        order = order_modalities(eig, t, axis, tie_axes=others)
        lam = float(contrib.eigenvalues[axis])
        cr = float(contrib.per_dimension[axis, t])
        dims.append(
            DimensionArrangement(
                spec.name,
                tuple(order),
                tuple(spec.modalities[j] for j in order),
                axis=axis,
                eigenvalue=lam,
                contribution=cr,
                score=lam * cr,
            )
        )
    return Arrangement(tuple(dims), tuple(spec.modalities for spec in cube.schema.dimensions))


def write_arrangement(arrangement: Arrangement, dest) -> str:
    text = json.dumps(arrangement.to_document(), indent=2, ensure_ascii=False) + "\n"
    with _open_text(dest, "w") as fh:
        fh.write(text)
    return text


def read_arrangement(source, schema: CubeSchema) -> Arrangement:
    with _open_text(source) as fh:
        try:
            doc = json.load(fh)
        except json.JSONDecodeError as exc:
            raise CubeError(f"arrangement document is not valid JSON: {exc}") from None
    return Arrangement.from_document(doc, schema)
