"""Two-dimensional occupancy heatmaps as plain PBM or SVG."""
from __future__ import annotations

import numpy as np

from .cube import Cube, CubeError, apply_arrangement

__all__ = ["project", "to_pbm", "to_svg", "render"]


def project(cube: Cube, dims: tuple[str, str], arrangement=None) -> np.ndarray:
    """Boolean grid over two named dimensions; a cell is dark when any fact lands on it.

    Rows follow the first dimension, columns the second, in catalog order
    (after ``arrangement`` if one is given).
    """
    if arrangement is not None:
        cube = apply_arrangement(cube, arrangement)
    rows, cols = (cube.schema.dimension_index(name) for name in dims)
    if rows == cols:
        raise CubeError("render needs two distinct dimensions")
    grid = np.zeros((cube.shape[rows], cube.shape[cols]), dtype=bool)
    grid[cube.coords[:, rows], cube.coords[:, cols]] = True
    return grid


def to_pbm(grid: np.ndarray, scale: int = 1) -> str:
    """Plain (P1) portable bitmap; 1 is black."""
    grid = np.kron(np.asarray(grid, dtype=np.uint8), np.ones((scale, scale), dtype=np.uint8))
    h, w = grid.shape
    lines = ["P1", f"{w} {h}"]
    lines += [" ".join(map(str, row)) for row in grid.tolist()]
    return "\n".join(lines) + "\n"


def to_svg(grid: np.ndarray, cell: int = 10, row_labels=None, col_labels=None) -> str:
    grid = np.asarray(grid, dtype=bool)
    h, w = grid.shape
    margin = 0 if row_labels is None and col_labels is None else 6 * cell
    width, height = margin + w * cell, margin + h * cell
    out = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" '
        f'viewBox="0 0 {width} {height}">',
        f'<rect x="{margin}" y="{margin}" width="{w * cell}" height="{h * cell}" '
        'fill="white" stroke="black"/>',
    ]
    for i, j in zip(*np.nonzero(grid)):
        out.append(
            f'<rect x="{margin + j * cell}" y="{margin + i * cell}" '
            f'width="{cell}" height="{cell}" fill="black"/>'
        )
    font = max(cell - 2, 4)
    if row_labels is not None:
        for i, label in enumerate(row_labels):
            out.append(
                f'<text x="{margin - 2}" y="{margin + (i + 1) * cell - 2}" '
                f'font-size="{font}" text-anchor="end">{_escape(label)}</text>'
            )
    if col_labels is not None:
        for j, label in enumerate(col_labels):
            x = margin + j * cell + cell - 2
            out.append(
                f'<text x="{x}" y="{margin - 2}" font-size="{font}" '
                f'transform="rotate(-90 {x} {margin - 2})">{_escape(label)}</text>'
            )
    out.append("</svg>")
    return "\n".join(out) + "\n"


def _escape(text) -> str:
    return (
        str(text).replace("&", "&amp;").replace("<", "&lt;").replace(">", "&gt;")
        .replace('"', "&quot;")
    )


def render(cube: Cube, dims: tuple[str, str], arrangement=None, fmt: str = "ppm",
           scale: int = 1) -> str:
    """Image text for the projection of ``cube`` on ``dims``."""
    grid = project(cube, dims, arrangement)
    if fmt == "ppm":
        return to_pbm(grid, scale)
    if fmt == "svg":
        shown = apply_arrangement(cube, arrangement) if arrangement is not None else cube
        r, c = (shown.schema.dimension_index(name) for name in dims)
        return to_svg(grid, cell=10 * scale, row_labels=shown.labels(r), col_labels=shown.labels(c))
    raise ValueError(f"unknown image format {fmt!r}")
