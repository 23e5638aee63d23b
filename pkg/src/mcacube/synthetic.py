"""Synthetic cubes for tests, demos and sparsity sweeps."""
from __future__ import annotations

import math
from typing import Sequence

import numpy as np

from .cube import Cube, CubeSchema, DimensionSpec, apply_arrangement

__all__ = [
    "BANK_DIMENSIONS",
    "bank_schema",
    "planted_blocks",
    "random_cube",
    "cube_with_fill",
    "shuffle_catalogs",
]

# dimension template of the retail-bank cube (name, number of modalities)
BANK_DIMENSIONS = (
    ("socio_professional_category", 58),
    ("product", 25),
    ("sales_unit", 65),
    ("segment", 15),
    ("age", 12),
    ("family_status", 6),
    ("client_type", 4),
    ("market", 4),
)


def bank_schema(names: Sequence[str] | None = None) -> CubeSchema:
    """Schema with the bank template's catalog sizes (optionally a subset of dimensions)."""
    dims = [(n, p) for n, p in BANK_DIMENSIONS if names is None or n in names]
    return CubeSchema(
        tuple(DimensionSpec(n, tuple(f"{n[:3]}{j + 1:02d}" for j in range(p))) for n, p in dims),
        ("net_banking_income", "assets"),
    )


def shuffle_catalogs(cube: Cube, rng) -> Cube:
    """Same cube with every catalog randomly permuted."""
    rng = np.random.default_rng(rng)
    return apply_arrangement(cube, [rng.permutation(p) for p in cube.shape])


def planted_blocks(
    shape: Sequence[int] = (8, 12),
    n_blocks: int = 2,
    fill: float = 1.0,
    facts_per_cell: int = 1,
    seed: int = 0,
    shuffle: bool = True,
) -> Cube:
    """Cube whose full cells form diagonal blocks under a hidden label order.

    Every dimension is split into ``n_blocks`` contiguous runs; block ``b`` is
    the product of the ``b``-th runs.  Each block cell is full with
    probability ``fill`` and then holds ``facts_per_cell`` facts.  With
    ``shuffle`` the catalogs are randomly permuted so the blocks are hidden.
    """
    rng = np.random.default_rng(seed)
    parts = [np.array_split(np.arange(p), n_blocks) for p in shape]
    cells = []
    for b in range(n_blocks):
        grids = np.meshgrid(*[part[b] for part in parts], indexing="ij")
        block = np.stack([g.ravel() for g in grids], axis=1)
        keep = rng.random(len(block)) < fill
        cells.append(block[keep])
    cells = np.concatenate(cells)
    coords = np.repeat(cells, facts_per_cell, axis=0)
    schema = CubeSchema(
        tuple(
            DimensionSpec(f"D{t + 1}", tuple(f"{chr(ord('a') + t)}{j + 1}" for j in range(p)))
            for t, p in enumerate(shape)
        )
    )
    cube = Cube(schema, coords)
    return shuffle_catalogs(cube, rng) if shuffle else cube


def random_cube(
    rng,
    dims: Sequence[int] = (2, 3),
    sizes: tuple[int, int] = (2, 8),
    facts: tuple[int, int] = (10, 200),
) -> Cube:
    """Uniformly random facts on a random shape (bounds inclusive)."""
    rng = np.random.default_rng(rng)
    d = int(rng.choice(dims))
    shape = tuple(int(x) for x in rng.integers(sizes[0], sizes[1] + 1, size=d))
    n = int(rng.integers(facts[0], facts[1] + 1))
    coords = rng.integers(0, shape, size=(n, d))
    return Cube(CubeSchema.from_sizes(shape), coords)


def cube_with_fill(schema: CubeSchema, full_fraction: float, seed: int = 0,
                   facts_per_cell: int = 1) -> Cube:
    """Exactly ``round(full_fraction * prod(p))`` distinct full cells, chosen uniformly."""
    total = math.prod(schema.shape)
    k = int(round(full_fraction * total))
    rng = np.random.default_rng(seed)
    flat = np.sort(rng.choice(total, size=k, replace=False))
    cells = np.stack(np.unravel_index(flat, schema.shape), axis=1)
    coords = np.repeat(cells, facts_per_cell, axis=0)
    measures = rng.gamma(2.0, 100.0, size=(len(coords), len(schema.measures)))
    return Cube(schema, coords, measures)
