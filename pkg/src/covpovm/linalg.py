"""Dense complex matrix kernel.

Matrices are plain ``numpy.ndarray`` with complex entries.  Operators on a
d-dimensional Hilbert space live in the d*d matrix space equipped with the
Hilbert-Schmidt inner product ``<A, B> = tr(A^dag B)``, conjugate-linear in
the first argument.  Subspaces of that operator space are carried around as
HS-orthonormal bases (:class:`OperatorSubspace`).
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import DomainError, ShapeError

# Relative threshold on singular/eigenvalue spectra when deciding ranks, with
# an absolute floor that declares a matrix zero outright.  Entries of the
# operators handled here are of order 1/d, so 1e-9 cleanly separates genuine
# rank gaps from roundoff up to d ~ 16.
RANK_RTOL = 1e-9
ZERO_ATOL = 1e-12

# Scale-aware comparison threshold for scalars (multipliers, probabilities).
SCALAR_RTOL = 1e-9


def as_matrix(a) -> np.ndarray:
    """Coerce to a 2-d complex array, rejecting non-finite entries."""
    m = np.asarray(a, dtype=complex)
    if m.ndim != 2:
        raise ShapeError(f"expected a matrix, got array of ndim {m.ndim}")
    if not np.all(np.isfinite(m)):
        raise DomainError("matrix has non-finite entries")
    return m


def require_square(a: np.ndarray) -> int:
    if a.shape[0] != a.shape[1]:
        raise ShapeError(f"expected a square matrix, got shape {a.shape}")
    return a.shape[0]


def scalars_close(x: complex, y: complex, rtol: float = SCALAR_RTOL) -> bool:
    """|x - y| <= rtol * max(1, |x|, |y|)."""
    return abs(x - y) <= rtol * max(1.0, abs(x), abs(y))


def hs_inner(a, b) -> complex:
    """Hilbert-Schmidt inner product tr(a^dag b)."""
    a = as_matrix(a)
    b = as_matrix(b)
    if a.shape != b.shape:
        raise ShapeError(f"shape mismatch {a.shape} vs {b.shape}")
    require_square(a)
    return complex(np.sum(np.conj(a) * b))


def hs_norm(a) -> float:
    return float(np.linalg.norm(np.asarray(a)))


def hermitian_eig(a) -> tuple[np.ndarray, np.ndarray]:
    """Eigendecomposition of a Hermitian matrix.

    Returns eigenvalues in descending order and the matching orthonormal
    eigenvectors as columns.  The input is rejected if it deviates from its
    adjoint by more than 1e-9 relative to its norm, and symmetrized before
    the solve once it passes.
    """
    a = as_matrix(a)
    require_square(a)
    defect = np.linalg.norm(a - a.conj().T)
    if defect > SCALAR_RTOL * max(1.0, np.linalg.norm(a)):
        raise DomainError(f"matrix is not Hermitian (defect {defect:.3e})")
    sym = (a + a.conj().T) / 2
    vals, vecs = np.linalg.eigh(sym)
    return vals[::-1], vecs[:, ::-1]


def numerical_rank(a, tol: float = RANK_RTOL) -> int:
    """Count of singular values above tol * (largest singular value).

    Rank 0 exactly when the matrix vanishes within the absolute floor.
    """
    if tol < 0:
        raise DomainError("tolerance must be nonnegative")
    a = np.asarray(a, dtype=complex)
    s = np.linalg.svd(a, compute_uv=False)
    if s.size == 0 or s[0] <= ZERO_ATOL:
        return 0
    return int(np.sum(s > tol * s[0]))


@dataclass(frozen=True)
class OperatorSubspace:
    """Subspace of the d*d operator space, held as an HS-orthonormal basis."""

    dim_h: int
    basis: list = field(default_factory=list)
    tol: float = RANK_RTOL

    def __post_init__(self):
        for b in self.basis:
            if b.shape != (self.dim_h, self.dim_h):
                raise ShapeError(
                    f"basis element of shape {b.shape} in dimension {self.dim_h}"
                )
        gram = np.array([[hs_inner(x, y) for y in self.basis] for x in self.basis])
        if gram.size and np.abs(gram - np.eye(len(self.basis))).max() > 1e-7:
            raise DomainError("basis is not HS-orthonormal")

    @property
    def dim(self) -> int:
        return len(self.basis)

    def coefficients(self, m) -> np.ndarray:
        """HS coordinates of m with respect to the basis."""
        return np.array([hs_inner(b, m) for b in self.basis])

    def project(self, m) -> np.ndarray:
        """Orthogonal projection of m onto the subspace."""
        out = np.zeros((self.dim_h, self.dim_h), dtype=complex)
        for c, b in zip(self.coefficients(m), self.basis):
            out += c * b
        return out

    def contains(self, m, tol: float = 1e-9) -> bool:
        m = as_matrix(m)
        return hs_norm(m - self.project(m)) <= tol * max(1.0, hs_norm(m))


def span_orthonormalize(mats, tol: float = RANK_RTOL) -> OperatorSubspace:
    """HS-orthonormal basis of the span of the given matrices.

    Uses an eigendecomposition of the Gram matrix rather than sequential
    Gram-Schmidt; near-dependent families then shed their null directions in
    one numerically stable step.
    """
    mats = [as_matrix(m) for m in mats]
    if not mats:
        raise DomainError("cannot take the span of an empty family")
    d = require_square(mats[0])
    for m in mats:
        if m.shape != (d, d):
            raise ShapeError("matrices in a span must share one square shape")
    gram = np.array([[hs_inner(x, y) for y in mats] for x in mats])
    vals, vecs = np.linalg.eigh((gram + gram.conj().T) / 2)
    top = vals[-1] if vals.size else 0.0
    if top <= ZERO_ATOL:
        return OperatorSubspace(d, [], tol)
    basis = []
    for k in range(len(mats)):
        if vals[k] > tol * top:
            b = np.zeros((d, d), dtype=complex)
            for i, m in enumerate(mats):
                b += vecs[i, k] * m
            basis.append(b / np.sqrt(vals[k]))
    return OperatorSubspace(d, basis, tol)


def orthogonal_complement(s: OperatorSubspace) -> OperatorSubspace:
    """HS-orthogonal complement, so that dim(s) + dim(result) = d^2."""
    d = s.dim_h
    if s.dim == 0:
        units = []
        for i in range(d):
            for j in range(d):
                e = np.zeros((d, d), dtype=complex)
                e[i, j] = 1.0
                units.append(e)
        return OperatorSubspace(d, units, s.tol)
    rows = np.array([b.reshape(-1).conj() for b in s.basis])
    _, _, vh = np.linalg.svd(rows, full_matrices=True)
    comp = [vh[k].conj().reshape(d, d) for k in range(s.dim, d * d)]
    # vh rows are orthonormal in the plain inner product; conjugation keeps
    # them HS-orthonormal as matrices and orthogonal to every basis element.
    return OperatorSubspace(d, comp, s.tol)
