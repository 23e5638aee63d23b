"""
Data cube model
---------------

A cube is a multiset of facts over qualitative dimensions.  Each dimension
carries an ordered catalog of modality labels; the catalog order is the
geometric order used when cells are laid out on a grid.  Facts are stored as
an ``(n, d)`` integer array of 0-based modality indices.

Cells are *full* when at least one fact projects onto them.  Duplicate facts
are kept (they weight the factorial analysis) while ``occupancy`` collapses
them to distinct cells.
"""
from __future__ import annotations

import csv
import json
import math
import os
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

__all__ = [
    "DimensionSpec",
    "CubeSchema",
    "Cube",
    "CubeError",
    "FactTableError",
    "load_fact_table",
    "read_schema",
    "write_fact_table",
    "write_schema",
    "sparsity",
    "sample_facts",
    "apply_arrangement",
]


class CubeError(ValueError):
    """Invalid cube construction or manipulation."""


class FactTableError(CubeError):
    """Malformed fact file or schema document."""


@dataclass(frozen=True)
class DimensionSpec:
    name: str
    modalities: tuple[str, ...]

    def __post_init__(self):
        object.__setattr__(self, "modalities", tuple(str(m) for m in self.modalities))
        if not self.modalities:
            raise CubeError(f"dimension {self.name!r} has no modalities")
        if len(set(self.modalities)) != len(self.modalities):
            raise CubeError(f"dimension {self.name!r} has duplicate modality labels")

    @property
    def size(self) -> int:
        return len(self.modalities)

    def index(self, label: str) -> int:
        try:
            return self.modalities.index(label)
        except ValueError:
            raise CubeError(
                f"modality {label!r} is not in the catalog of dimension {self.name!r}"
            ) from None


@dataclass(frozen=True)
class CubeSchema:
    dimensions: tuple[DimensionSpec, ...]
    measures: tuple[str, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "dimensions", tuple(self.dimensions))
        object.__setattr__(self, "measures", tuple(self.measures))
        if not self.dimensions:
            raise CubeError("a cube needs at least one dimension")
        names = [dim.name for dim in self.dimensions] + list(self.measures)
        if len(set(names)) != len(names):
            raise CubeError("dimension and measure names must be unique")

    @classmethod
    def from_sizes(cls, sizes: Sequence[int], names: Sequence[str] | None = None):
        """Schema with generated labels ``"<name>_<j>"``, handy for synthetic cubes."""
        if names is None:
            names = [f"D{t + 1}" for t in range(len(sizes))]
        dims = tuple(
            DimensionSpec(name, tuple(f"{name}_{j + 1}" for j in range(int(p))))
            for name, p in zip(names, sizes)
        )
        return cls(dims)

    @property
    def d(self) -> int:
        return len(self.dimensions)

    @property
    def shape(self) -> tuple[int, ...]:
        return tuple(dim.size for dim in self.dimensions)

    @property
    def names(self) -> tuple[str, ...]:
        return tuple(dim.name for dim in self.dimensions)

    def dimension_index(self, name: str) -> int:
        try:
            return self.names.index(name)
        except ValueError:
            raise CubeError(f"unknown dimension {name!r}") from None


def _frozen(array: np.ndarray) -> np.ndarray:
    array = np.array(array, copy=True)
    array.setflags(write=False)
    return array


class Cube:
    """Immutable multiset of facts over a :class:`CubeSchema`.

    Parameters
    ----------
    schema : CubeSchema
    coords : (n, d) array_like of int
        0-based modality index of every fact on every dimension.
    measures : (n, m) array_like of float, optional
        One column per ``schema.measures`` entry.
    """

    def __init__(self, schema: CubeSchema, coords, measures=None):
        d = schema.d
        coords = np.asarray(coords, dtype=np.int64)
        if coords.size == 0:
            coords = coords.reshape(0, d)
        if coords.ndim != 2 or coords.shape[1] != d:
            raise CubeError(f"coords must have shape (n, {d}), got {coords.shape}")
        shape = np.asarray(schema.shape)
        bad = (coords < 0) | (coords >= shape)
        if bad.any():
            row, col = map(int, np.argwhere(bad)[0])
            raise CubeError(
                f"fact {row} refers to modality index {coords[row, col]} outside "
                f"dimension {schema.names[col]!r} (size {shape[col]})"
            )
        m = len(schema.measures)
        if measures is None:
            measures = np.zeros((coords.shape[0], m))
        measures = np.asarray(measures, dtype=np.float64).reshape(coords.shape[0], m)

        self.schema = schema
        self.coords = _frozen(coords)
        self.measures = _frozen(measures)
        self._occupancy = None
        self._occupied = None

    @property
    def n(self) -> int:
        return self.coords.shape[0]

    @property
    def d(self) -> int:
        return self.schema.d

    @property
    def shape(self) -> tuple[int, ...]:
        return self.schema.shape

    @property
    def degenerate(self) -> bool:
        """True for a cube without facts; legal, but refused by the analysis."""
        return self.n == 0

    @property
    def occupancy(self) -> np.ndarray:
        """Distinct full cells, ``(k, d)`` in lexicographic order."""
        if self._occupancy is None:
            self._occupancy = _frozen(np.unique(self.coords, axis=0))
        return self._occupancy

    def occupied(self) -> frozenset:
        """Full cells as a set of index tuples."""
        if self._occupied is None:
            self._occupied = frozenset(map(tuple, self.occupancy.tolist()))
        return self._occupied

    def is_full(self, cell: Sequence[int]) -> bool:
        return tuple(int(c) for c in cell) in self.occupied()

    def dense(self) -> np.ndarray:
        """Boolean occupancy grid of shape ``self.shape``."""
        grid = np.zeros(self.shape, dtype=bool)
        if self.n:
            grid[tuple(self.occupancy.T)] = True
        return grid

    def cell_aggregates(self) -> dict[tuple[int, ...], tuple[float, ...]]:
        """Per-cell sum of every measure."""
        cells, inverse = np.unique(self.coords, axis=0, return_inverse=True)
        sums = np.zeros((len(cells), self.measures.shape[1]))
        np.add.at(sums, inverse.ravel(), self.measures)
        return {tuple(c): tuple(s) for c, s in zip(cells.tolist(), sums.tolist())}

    def labels(self, t: int) -> tuple[str, ...]:
        return self.schema.dimensions[t].modalities

    def modality_counts(self, t: int) -> np.ndarray:
        return np.bincount(self.coords[:, t], minlength=self.shape[t])

    def __eq__(self, other):
        if not isinstance(other, Cube):
            return NotImplemented
        return (
            self.schema == other.schema
            and np.array_equal(self.coords, other.coords)
            and np.array_equal(self.measures, other.measures)
        )

    __hash__ = None

    def __repr__(self):
        dims = ", ".join(f"{dim.name}={dim.size}" for dim in self.schema.dimensions)
        return f"Cube({dims}; n={self.n}, full={len(self.occupancy)})"


# ---------------------------------------------------------------------------
# ingestion

@dataclass
class _SchemaDoc:
    dimensions: list[tuple[str, list[str] | None]]
    measures: list[str] = field(default_factory=list)


def _open_text(source, mode="r"):
    if isinstance(source, (str, os.PathLike)):
        return open(source, mode, encoding="utf-8", newline="")
    return _NoClose(source)


class _NoClose:
    def __init__(self, stream):
        self.stream = stream

    def __enter__(self):
        return self.stream

    def __exit__(self, *exc):
        return False


def read_schema(source) -> _SchemaDoc:
    """Parse a schema document.

    ``source`` may be a path, an open text stream, or an already decoded
    mapping of the form::

        {"dimensions": [{"name": "P", "modalities": ["x", "y"]}, "Q"],
         "measures": ["amount"]}

    A dimension given as a bare string (or without ``modalities``) gets its
    catalog from the fact file in order of first appearance.
    """
    if isinstance(source, dict):
        doc = source
    else:
        with _open_text(source) as fh:
            try:
                doc = json.load(fh)
            except json.JSONDecodeError as exc:
                raise FactTableError(f"schema document is not valid JSON: {exc}") from None
    if not isinstance(doc, dict) or "dimensions" not in doc:
        raise FactTableError("schema document must be a mapping with a 'dimensions' list")
    dims = []
    for entry in doc["dimensions"]:
        if isinstance(entry, str):
            dims.append((entry, None))
        elif isinstance(entry, dict) and "name" in entry:
            mods = entry.get("modalities")
            dims.append((str(entry["name"]), None if mods is None else [str(m) for m in mods]))
        else:
            raise FactTableError(f"bad dimension entry in schema: {entry!r}")
    measures = [str(m) for m in doc.get("measures", [])]
    return _SchemaDoc(dims, measures)


def load_fact_table(facts, schema) -> Cube:
    """Build a :class:`Cube` from a comma-separated fact file.

    The first row holds column headers.  Columns not named by the schema are
    ignored.  Raises :class:`FactTableError` for unknown columns, modalities
    missing from an explicit catalog and non-numeric measure cells.

    A file with a header but no data rows yields a degenerate cube (``n == 0``);
    dimensions without an explicit catalog then get a single placeholder
    modality ``""``.
    """
    doc = schema if isinstance(schema, _SchemaDoc) else read_schema(schema)
    with _open_text(facts) as fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise FactTableError("fact file is empty (no header row)") from None
        rows = list(reader)

    header = [h.strip() for h in header]
    position = {name: i for i, name in enumerate(header)}
    wanted = [name for name, _ in doc.dimensions] + doc.measures
    for name in wanted:
        if name not in position:
            raise FactTableError(f"unknown column {name!r}; fact file has {header}")

    d = len(doc.dimensions)
    coords = np.empty((len(rows), d), dtype=np.int64)
    catalogs = []
    for t, (name, mods) in enumerate(doc.dimensions):
        col = position[name]
        lookup = {} if mods is None else {label: j for j, label in enumerate(mods)}
        fixed = mods is not None
        order = list(mods) if fixed else []
        for i, row in enumerate(rows):
            if len(row) != len(header):
                raise FactTableError(
                    f"row {i + 2}: expected {len(header)} cells, got {len(row)}"
                )
            label = row[col]
            j = lookup.get(label)
            if j is None:
                if fixed:
                    raise FactTableError(
                        f"row {i + 2}, column {name!r}: modality {label!r} is not in "
                        "the schema catalog"
                    )
                j = lookup[label] = len(order)
                order.append(label)
            coords[i, t] = j
        catalogs.append(DimensionSpec(name, tuple(order) if order else ("",)))

    measures = np.empty((len(rows), len(doc.measures)))
    for k, name in enumerate(doc.measures):
        col = position[name]
        for i, row in enumerate(rows):
            try:
                measures[i, k] = float(row[col])
            except ValueError:
                raise FactTableError(
                    f"row {i + 2}, column {name!r}: measure value {row[col]!r} is not numeric"
                ) from None

    return Cube(CubeSchema(tuple(catalogs), tuple(doc.measures)), coords, measures)


def write_fact_table(cube: Cube, dest) -> None:
    """Write facts back out in the format read by :func:`load_fact_table`."""
    schema = cube.schema
    with _open_text(dest, "w") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(list(schema.names) + list(schema.measures))
        labels = [dim.modalities for dim in schema.dimensions]
        for coord, meas in zip(cube.coords.tolist(), cube.measures.tolist()):
            writer.writerow(
                [labels[t][j] for t, j in enumerate(coord)] + [repr(v) for v in meas]
            )


def schema_document(schema: CubeSchema) -> dict:
    return {
        "dimensions": [
            {"name": dim.name, "modalities": list(dim.modalities)}
            for dim in schema.dimensions
        ],
        "measures": list(schema.measures),
    }


def write_schema(schema: CubeSchema, dest) -> None:
    """Write a schema document with explicit catalogs (current order)."""
    text = json.dumps(schema_document(schema), indent=2, ensure_ascii=False) + "\n"
    with _open_text(dest, "w") as fh:
        fh.write(text)


# ---------------------------------------------------------------------------
# queries and transforms

def sparsity(cube: Cube) -> float:
    """Fraction of empty cells, ``(prod(p) - |full|) / prod(p)``."""
    total = math.prod(cube.shape)
    return (total - len(cube.occupancy)) / total


def sample_facts(cube: Cube, rate: float, seed: int) -> Cube:
    """Keep a uniform random subset of ``ceil(rate * n)`` facts.

    Sampling is without replacement and driven by ``numpy.random.default_rng(seed)``;
    surviving facts keep their original relative order.  The schema, and
    therefore every catalog, is unchanged.
    """
    if not 0 < rate <= 1:
        raise CubeError(f"sampling rate must lie in (0, 1], got {rate}")
    n = cube.n
    # round first so that e.g. 0.3 * 10 does not ceil to 4
    k = min(n, math.ceil(round(rate * n, 9)))
    if k == n:
        return Cube(cube.schema, cube.coords, cube.measures)
    rng = np.random.default_rng(seed)
    keep = np.sort(rng.choice(n, size=k, replace=False))
    return Cube(cube.schema, cube.coords[keep], cube.measures[keep])


def _orders(arrangement) -> list[list[int]]:
    orders = getattr(arrangement, "orders", arrangement)
    return [list(map(int, o)) for o in orders]


def apply_arrangement(cube: Cube, arrangement) -> Cube:
    """Reorder every catalog and re-index facts consistently.

    ``arrangement`` is an :class:`~mcacube.arrange.Arrangement` or a plain
    sequence of per-dimension orders; ``order[k]`` is the original index of
    the modality placed at position ``k``.
    """
    orders = _orders(arrangement)
    if len(orders) != cube.d:
        raise CubeError(f"arrangement has {len(orders)} orders for a {cube.d}-d cube")
    dims = []
    coords = np.empty_like(cube.coords)
    for t, (dim, order) in enumerate(zip(cube.schema.dimensions, orders)):
        if sorted(order) != list(range(dim.size)):
            raise CubeError(
                f"order for dimension {dim.name!r} is not a permutation of 0..{dim.size - 1}"
            )
        inverse = np.empty(dim.size, dtype=np.int64)
        inverse[order] = np.arange(dim.size)
        coords[:, t] = inverse[cube.coords[:, t]]
        dims.append(DimensionSpec(dim.name, tuple(dim.modalities[j] for j in order)))
    return Cube(CubeSchema(tuple(dims), cube.schema.measures), coords, cube.measures)


def cube_from_cells(shape: Sequence[int], cells: Iterable[Sequence[int]]) -> Cube:
    """One fact per listed cell on a generated schema; mostly for tests and demos."""
    cells = np.asarray(list(cells), dtype=np.int64).reshape(-1, len(shape))
    return Cube(CubeSchema.from_sizes(shape), cells)


__all__ += ["cube_from_cells", "schema_document"]
