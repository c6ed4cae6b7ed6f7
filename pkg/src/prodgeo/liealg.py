"""Lie algebra data for a left-invariant frame.

Structure constants are stored as ``c[i, j, k]``: the coefficient of the
k-th frame vector in the bracket of frame vectors i and j.  Antisymmetry
in (i, j) is enforced at construction; the Jacobi identity is measured,
not enforced, so callers can report its defect.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import BadDimension, DimensionMismatch, GeometryError, ShapeMismatch
from .tensors import freeze, max_abs

DERIVED_PIVOT_TOL = 1e-9


@dataclass(frozen=True)
class LieFrameAlgebra:
    dim: int
    c: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "c", freeze(self.c))
        if self.dim < 4 or self.dim % 2 != 0:
            raise BadDimension(f"frame dimension must be even and >= 4, got {self.dim}")
        if self.c.shape != (self.dim,) * 3:
            raise ShapeMismatch(f"structure constants have shape {self.c.shape}")
        if max_abs(self.c + np.swapaxes(self.c, 0, 1)) > 1e-12 * max(1.0, max_abs(self.c)):
            raise GeometryError("structure constants are not antisymmetric in (i, j)")

    @classmethod
    def abelian(cls, dim: int) -> "LieFrameAlgebra":
        return cls(dim=dim, c=np.zeros((dim, dim, dim)))

    @classmethod
    def from_brackets(cls, dim: int, entries: dict[tuple[int, int], object]) -> "LieFrameAlgebra":
        """Build from a sparse table ``{(i, j): coefficients of [X_i, X_j]}`` (0-based, i < j)."""
        c = np.zeros((dim, dim, dim))
        for (i, j), coeffs in entries.items():
            if not (0 <= i < dim and 0 <= j < dim) or i == j:
                raise DimensionMismatch(f"bad bracket index pair ({i}, {j}) for dim {dim}")
            vec = np.asarray(coeffs, dtype=float)
            if vec.shape != (dim,):
                raise DimensionMismatch(f"bracket [{i},{j}] has {vec.shape} coefficients")
            c[i, j] = vec
            c[j, i] = -vec
        return cls(dim=dim, c=c)


def bracket(alg: LieFrameAlgebra, u, v) -> np.ndarray:
    """Components of the bracket of two frame-constant vector fields."""
    u = np.asarray(u, dtype=float)
    v = np.asarray(v, dtype=float)
    if u.shape != (alg.dim,) or v.shape != (alg.dim,):
        raise DimensionMismatch(f"vectors must have {alg.dim} components")
    return np.einsum("i,j,ijk->k", u, v, alg.c)


def jacobi_defect(alg: LieFrameAlgebra) -> float:
    """Largest component of the cyclic bracket sum over all basis triples."""
    nested = np.einsum("ijm,mkl->ijkl", alg.c, alg.c)
    cyc = nested + np.einsum("jkil->ijkl", nested) + np.einsum("kijl->ijkl", nested)
    return max_abs(cyc)


def derived_subalgebra(alg: LieFrameAlgebra, tol: float = DERIVED_PIVOT_TOL) -> np.ndarray:
    """Orthonormal basis (rows) for the span of all bracket images."""
    images = alg.c.reshape(alg.dim * alg.dim, alg.dim)
    _, s, vt = np.linalg.svd(images)
    rank = int(np.sum(s > tol))
    return vt[:rank].copy()


def derived_annihilator(alg: LieFrameAlgebra, tol: float = DERIVED_PIVOT_TOL) -> np.ndarray:
    """Orthonormal basis (rows) for the 1-forms vanishing on every bracket."""
    images = alg.c.reshape(alg.dim * alg.dim, alg.dim)
    _, s, vt = np.linalg.svd(images)
    rank = int(np.sum(s > tol))
    return vt[rank:].copy()
