"""
Multiple correspondence analysis of a cube's facts
--------------------------------------------------

Facts are coded into a complete disjunctive table ``Z`` (one 0/1 column per
modality, one block per dimension), crossed into the Burt table ``B = Z'Z``
and the factorial axes are read off the eigenpairs of ``(1/d) X^-1 B`` where
``X = diag(B)``.

The non-symmetric problem is solved through the symmetric matrix
``W = (1/d) X^-1/2 B X^-1/2`` from which the trivial solution (eigenvalue 1,
constant coordinates) is deflated before diagonalisation.  Coordinates are
scaled so that ``sum_j z_j phi_j**2 == n * d * lambda``.
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .cube import Cube, CubeError
from .jacobi import jacobi_eigh

__all__ = [
    "EmptyCubeError",
    "MCAError",
    "DisjunctiveTable",
    "BurtTable",
    "EigenSystem",
    "Contributions",
    "build_disjunctive",
    "burt",
    "solve_eigen",
    "contributions",
    "invariant_residuals",
    "dump_debug",
]

EIGENVALUE_FLOOR = 1e-12
DEGENERACY_TOL = 1e-9
TRIVIAL_STD_TOL = 1e-9


class EmptyCubeError(CubeError):
    """The analysis needs at least one fact."""


class MCAError(ArithmeticError):
    pass


def _block_offsets(sizes):
    return np.concatenate([[0], np.cumsum(sizes)]).astype(np.int64)


@dataclass(frozen=True)
class DisjunctiveTable:
    """Complete disjunctive coding of ``n`` facts.

    Only the position of the single 1 in every block is stored
    (``columns[i, t]`` is a global column index); :attr:`entries` expands it
    to the dense ``(n, p)`` 0/1 matrix on demand.
    """

    sizes: tuple[int, ...]
    columns: np.ndarray

    @property
    def n(self) -> int:
        return self.columns.shape[0]

    @property
    def d(self) -> int:
        return len(self.sizes)

    @property
    def p(self) -> int:
        return int(sum(self.sizes))

    @property
    def offsets(self) -> np.ndarray:
        return _block_offsets(self.sizes)

    def block(self, t: int) -> slice:
        off = self.offsets
        return slice(int(off[t]), int(off[t + 1]))

    @property
    def blocks(self) -> list[slice]:
        return [self.block(t) for t in range(self.d)]

    @property
    def column_sums(self) -> np.ndarray:
        return np.bincount(self.columns.ravel(), minlength=self.p).astype(np.int64)

    @property
    def entries(self) -> np.ndarray:
        z = np.zeros((self.n, self.p), dtype=np.uint8)
        rows = np.repeat(np.arange(self.n), self.d)
        z[rows, self.columns.ravel()] = 1
        return z


@dataclass(frozen=True)
class BurtTable:
    entries: np.ndarray
    sizes: tuple[int, ...]

    @property
    def order(self) -> int:
        return self.entries.shape[0]

    @property
    def diagonal_weights(self) -> np.ndarray:
        return np.diag(self.entries).copy()

    def block(self, t: int, u: int) -> np.ndarray:
        off = _block_offsets(self.sizes)
        return self.entries[off[t]:off[t + 1], off[u]:off[u + 1]]


@dataclass(frozen=True)
class EigenSystem:
    """Retained factorial axes, in descending eigenvalue order.

    ``coordinates[a]`` is the ``p``-long vector of modality coordinates on
    axis ``a``.  Modalities with zero weight (listed in ``dropped``) take no
    part in the analysis and get coordinate 0 on every axis.
    """

    eigenvalues: np.ndarray
    coordinates: np.ndarray
    weights: np.ndarray
    sizes: tuple[int, ...]
    n: int
    dropped: tuple[int, ...]
    sweeps: int = 0
    trivial: bool = False

    @property
    def d(self) -> int:
        return len(self.sizes)

    @property
    def p(self) -> int:
        return int(sum(self.sizes))

    @property
    def retained(self) -> int:
        return len(self.eigenvalues)

    def block(self, t: int) -> slice:
        off = _block_offsets(self.sizes)
        return slice(int(off[t]), int(off[t + 1]))

    def dimension_coordinates(self, axis: int, t: int) -> np.ndarray:
        return self.coordinates[axis, self.block(t)]

    def nonempty(self, t: int) -> np.ndarray:
        return self.weights[self.block(t)] > 0


@dataclass(frozen=True)
class Contributions:
    """``per_modality[a, j]`` is Cr_a of modality j; ``per_dimension[a, t]`` sums a block."""

    per_modality: np.ndarray
    per_dimension: np.ndarray
    eigenvalues: np.ndarray

    def scores(self) -> np.ndarray:
        """``lambda_a * Cr_a(D_t)`` for every axis (rows) and dimension (columns)."""
        return self.eigenvalues[:, None] * self.per_dimension


def build_disjunctive(cube: Cube) -> DisjunctiveTable:
    if cube.n == 0:
        raise EmptyCubeError("empty cube: the analysis needs at least one fact")
    offsets = _block_offsets(cube.shape)[:-1]
    columns = cube.coords + offsets[None, :]
    columns.setflags(write=False)
    return DisjunctiveTable(tuple(cube.shape), columns)


def burt(z: DisjunctiveTable) -> BurtTable:
    """``Z'Z`` accumulated block by block from the coded positions."""
    p = z.p
    b = np.zeros((p, p), dtype=np.int64)
    cols = z.columns
    for t in range(z.d):
        for u in range(t, z.d):
            pair = cols[:, t] * p + cols[:, u]
            counts = np.bincount(pair, minlength=p * p).reshape(p, p)
            b += counts
            if u != t:
                b += counts.T
    return BurtTable(b, z.sizes)


def _canonical_basis(q, forms, tol=DEGENERACY_TOL):
    """Rotate an orthonormal basis of a degenerate eigenspace to a canonical one.

    Each form is a diagonal quadratic form applied inside the subspace; the
    basis is aligned with its principal directions (largest first) and ties
    are refined with the next form.  All forms are invariant under relabelling
    modalities, so the result is equivariant up to sign.
    """
    k = q.shape[1]
    if k == 1 or not forms:
        return q
    f = forms[0]
    c = q.T @ (f[:, None] * q)
    vals, vecs = np.linalg.eigh(0.5 * (c + c.T))
    order = np.argsort(-vals, kind="stable")
    vals, vecs = vals[order], vecs[:, order]
    scale = max(1.0, float(np.max(np.abs(f))))
    out = []
    start = 0
    for i in range(1, k + 1):
        if i == k or vals[i - 1] - vals[i] > tol * scale:
            out.append(_canonical_basis(q @ vecs[:, start:i], forms[1:], tol))
            start = i
    return np.hstack(out)


def _clusters(values, tol):
    """Split a descending sequence into runs whose consecutive gaps are <= tol."""
    groups, start = [], 0
    for i in range(1, len(values) + 1):
        if i == len(values) or values[i - 1] - values[i] > tol:
            groups.append(range(start, i))
            start = i
    return groups


def _fix_sign(phi, weights, tol=1e-9):
    """Make the largest-magnitude coordinate positive.

    When several coordinates share the largest magnitude with opposite signs,
    the sign of the weighted third moment decides, then the lowest index.
    """
    mag = np.abs(phi)
    top = float(mag.max())
    if top == 0.0:
        return phi
    cand = np.flatnonzero(mag >= top * (1 - tol))
    signs = np.sign(phi[cand])
    if np.all(signs == signs[0]):
        return phi * signs[0]
    skew = float(np.sum(weights * phi ** 3))
    if abs(skew) > tol * float(np.sum(weights * mag ** 3)):
        return phi * math.copysign(1.0, skew)
    return phi * signs[0]


def solve_eigen(
    b: BurtTable,
    d: int,
    *,
    method: str = "jacobi",
    tol: float = 1e-12,
    max_sweeps: int = 100,
    keep_trivial: bool = False,
) -> EigenSystem:
    """Factorial axes of the Burt table.

    Parameters
    ----------
    b : BurtTable
    d : int
        Number of dimensions (blocks) in the table.
    method : {'jacobi', 'lapack'}
        ``'jacobi'`` is the built-in cyclic Jacobi solver; ``'lapack'`` uses
        :func:`numpy.linalg.eigh` and exists for cross-checking.
    keep_trivial : bool
        Prepend the trivial axis (eigenvalue 1, unit coordinates).

    Raises
    ------
    MCAError
        If every column has zero weight.
    ConvergenceError
        If Jacobi sweeps exceed ``max_sweeps``.
    """
    full = np.asarray(b.entries)
    p = full.shape[0]
    z = np.diag(full).astype(np.int64)
    keep = np.flatnonzero(z > 0)
    if keep.size == 0:
        raise MCAError("all modalities have zero weight")
    dropped = tuple(int(j) for j in np.flatnonzero(z == 0))
    bk = full[np.ix_(keep, keep)].astype(np.float64)
    zk = z[keep].astype(np.float64)
    nd = float(zk.sum())
    n = int(round(nd / d))

    root = np.sqrt(zk)
    w = bk / np.outer(root, root) / d
    v0 = root / math.sqrt(nd)
    w_defl = w - np.outer(v0, v0)
    w_defl = 0.5 * (w_defl + w_defl.T)

    sweeps = 0
    if method == "jacobi":
        vals, vecs, sweeps = jacobi_eigh(w_defl, tol=tol, max_sweeps=max_sweeps)
    elif method == "lapack":
        vals, vecs = np.linalg.eigh(w_defl)
    else:
        raise ValueError(f"unknown eigen method {method!r}")

    order = np.argsort(-vals, kind="stable")
    vals, vecs = vals[order], vecs[:, order]
    positive = vals > EIGENVALUE_FLOOR
    vals, vecs = vals[positive], vecs[:, positive]

    # per-dimension membership of kept columns, for canonicalising ties
    dim_of = np.repeat(np.arange(d), b.sizes)[keep]
    forms = [(dim_of == t).astype(np.float64) for t in range(d)]
    forms += [zk, np.sum(bk * bk, axis=1)]

    lam_out, phi_out = [], []
    for group in _clusters(vals, DEGENERACY_TOL):
        basis = vecs[:, group.start:group.stop]
        if len(group) > 1:
            basis = _canonical_basis(basis, forms)
        for k in range(basis.shape[1]):
            v = basis[:, k] / np.linalg.norm(basis[:, k])
            lam = float(v @ w_defl @ v)
            phi = math.sqrt(nd * lam) * v / root
            mean = float(np.sum(zk * phi)) / nd
            spread = math.sqrt(max(float(np.sum(zk * (phi - mean) ** 2)) / nd, 0.0))
            if spread < TRIVIAL_STD_TOL:
                continue
            lam_out.append(lam)
            phi_out.append(_fix_sign(phi, zk))

    if keep_trivial:
        lam_out.insert(0, 1.0)
        phi_out.insert(0, np.ones_like(zk))

    coords = np.zeros((len(lam_out), p))
    if phi_out:
        coords[:, keep] = np.vstack(phi_out)
    eigenvalues = np.asarray(lam_out, dtype=np.float64)
    for arr in (coords, eigenvalues, z):
        arr.setflags(write=False)
    return EigenSystem(
        eigenvalues=eigenvalues,
        coordinates=coords,
        weights=z,
        sizes=tuple(b.sizes),
        n=n,
        dropped=dropped,
        sweeps=sweeps,
        trivial=keep_trivial,
    )


def contributions(eig: EigenSystem, z: DisjunctiveTable) -> Contributions:
    """Cr_a(modality) = z_j phi_aj^2 / (n d lambda_a) and its block sums.

    Axes with a zero eigenvalue carry no inertia and are left out.
    """
    if z.p != eig.p or tuple(z.sizes) != tuple(eig.sizes):
        raise ValueError("eigen system and disjunctive table describe different modalities")
    lam = np.asarray(eig.eigenvalues)
    live = lam > 0
    lam = lam[live]
    phi = eig.coordinates[live]
    weights = z.column_sums.astype(np.float64)
    per_mod = weights[None, :] * phi ** 2 / (z.n * z.d * lam[:, None])
    per_dim = np.add.reduceat(per_mod, z.offsets[:-1], axis=1) if len(lam) else (
        np.zeros((0, z.d))
    )
    return Contributions(per_mod, per_dim, lam)


def invariant_residuals(b: BurtTable, eig: EigenSystem) -> dict[str, float]:
    """Worst-case violations of the defining identities of an eigen system.

    ``reconstruction`` is scaled by ``max(1, ||phi||_inf)`` per axis;
    ``trace`` compares the eigenvalue sum with ``(p' - d) / d``.
    """
    bfull = np.asarray(b.entries, dtype=np.float64)
    z = eig.weights.astype(np.float64)
    keep = z > 0
    d, n = eig.d, eig.n
    recon = norm = centre = 0.0
    for lam, phi in zip(eig.eigenvalues, eig.coordinates):
        lhs = (bfull @ phi)[keep] / (d * z[keep])
        err = np.max(np.abs(lhs - lam * phi[keep]))
        recon = max(recon, err / max(1.0, float(np.max(np.abs(phi)))))
        norm = max(norm, abs(float(np.sum(z * phi ** 2)) - n * d * lam) / (n * d))
        if not (eig.trivial and lam == 1.0 and np.allclose(phi[keep], 1.0)):
            centre = max(centre, abs(float(np.sum(z * phi))) / (n * d))
    lam = eig.eigenvalues[1:] if eig.trivial else eig.eigenvalues
    expected = (int(keep.sum()) - d) / d
    return {
        "reconstruction": float(recon),
        "normalization": float(norm),
        "centering": float(centre),
        "trace": abs(float(np.sum(lam)) - expected),
    }


def dump_debug(b: BurtTable, eig: EigenSystem, dest=None, labels: Sequence[str] | None = None):
    """JSON dump of ``B``, ``diag(X)``, eigenvalues and coordinates.

    Returns the text and writes it to ``dest`` (a path) when given.
    """
    doc = {
        "schemaVersion": 1,
        "labels": list(labels) if labels is not None else None,
        "burt": np.asarray(b.entries).tolist(),
        "diagonal": np.asarray(b.diagonal_weights).tolist(),
        "eigenvalues": [float(x) for x in eig.eigenvalues],
        "coordinates": np.asarray(eig.coordinates).tolist(),
        "dropped": list(eig.dropped),
    }
    text = json.dumps(doc, indent=1, sort_keys=True) + "\n"
    if dest is not None:
        with open(dest, "w", encoding="utf-8") as fh:
            fh.write(text)
    return text
