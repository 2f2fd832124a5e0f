"""Graph shift operators, their spectra, and polynomial graph filters.

A graph shift is any square matrix whose sparsity pattern matches the graph
topology (plus the diagonal).  All spectral machinery here requires the
shift to be *normal*, so that it admits a unitary eigendecomposition
``S = V diag(lam) V^H``.  The eigenvector basis defines the graph Fourier
transform (GFT), and polynomial filters ``H = sum_l h_l S^l`` act diagonally
on it with frequency response ``h_tilde = Psi_L h``, where ``Psi`` is the
Vandermonde matrix of the eigenvalues.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
import scipy.linalg

from .errors import (
    DimensionMismatch,
    EigsNotDistinct,
    InputError,
    InvalidSpec,
    NotNormal,
    NumericalFailure,
)

SHIFT_KINDS = ("adjacency", "laplacian", "covariance", "precision", "custom")

#: imaginary parts below REAL_TOL * (array norm) are dropped when reporting
REAL_TOL = 1e-10


def coerce_real(values, rtol=REAL_TOL):
    """Return a real view of ``values`` when the imaginary part is noise."""
    values = np.asarray(values)
    if not np.iscomplexobj(values):
        return values
    scale = np.linalg.norm(values)
    if np.linalg.norm(values.imag) <= rtol * max(scale, 1e-300):
        return np.ascontiguousarray(values.real)
    return values


def _freeze(arr):
    out = np.array(arr, copy=True)
    out.setflags(write=False)
    return out


@dataclass(frozen=True, eq=False)
class GraphShift:
    """Dense N x N shift matrix tagged with its construction kind.

    The matrix is stored read-only; the sparsity pattern doubles as the
    graph topology for neighborhood queries.
    """

    matrix: np.ndarray
    kind: str = "custom"

    def __post_init__(self):
        m = np.asarray(self.matrix)
        if m.ndim != 2 or m.shape[0] != m.shape[1]:
            raise DimensionMismatch(f"shift must be square, got shape {m.shape}")
        if self.kind not in SHIFT_KINDS:
            raise InvalidSpec(f"unknown shift kind {self.kind!r}")
        if np.iscomplexobj(m) and np.all(m.imag == 0):
            m = m.real
        object.__setattr__(self, "matrix", _freeze(m))

    @property
    def n(self):
        return self.matrix.shape[0]

    def support(self, include_diagonal=False):
        """Boolean structural-nonzero mask, symmetrized over both directions."""
        mask = self.matrix != 0
        mask = mask | mask.T
        if not include_diagonal:
            mask = mask & ~np.eye(self.n, dtype=bool)
        return mask


@dataclass(frozen=True, eq=False)
class SpectralBasis:
    """Unitary eigenvector matrix and eigenvalues of a normal shift."""

    vectors: np.ndarray
    eigenvalues: np.ndarray
    distinct_eigs: bool

    def __post_init__(self):
        object.__setattr__(self, "vectors", _freeze(self.vectors))
        object.__setattr__(self, "eigenvalues", _freeze(self.eigenvalues))

    @property
    def n(self):
        return self.eigenvalues.shape[0]

    @property
    def is_real(self):
        """True when the basis came from a symmetric (real-spectrum) shift."""
        return not (
            np.iscomplexobj(self.vectors) or np.iscomplexobj(self.eigenvalues)
        )


@dataclass(frozen=True, eq=False)
class VandermondeMatrix:
    """Eigenvalue power matrix with entries ``lam_k ** (l-1)``."""

    matrix: np.ndarray
    cols: int
    cond: float = field(default=np.nan)

    def __post_init__(self):
        object.__setattr__(self, "matrix", _freeze(self.matrix))


@dataclass(frozen=True, eq=False)
class GraphFilter:
    """Polynomial filter taps ``h = [h_0, ..., h_{L-1}]``."""

    coeffs: np.ndarray

    def __post_init__(self):
        c = np.atleast_1d(np.asarray(self.coeffs))
        if c.ndim != 1 or c.size == 0:
            raise InvalidSpec("filter coefficients must be a nonempty vector")
        object.__setattr__(self, "coeffs", _freeze(coerce_real(c)))

    def __len__(self):
        return self.coeffs.shape[0]

    @property
    def degree(self):
        return self.coeffs.shape[0] - 1


def normality_residual(shift):
    """Relative commutator norm ``||S S^H - S^H S||_F / ||S||_F^2``."""
    m = shift.matrix
    scale = np.linalg.norm(m) ** 2
    if scale == 0.0:
        return 0.0
    mh = m.conj().T
    return float(np.linalg.norm(m @ mh - mh @ m) / scale)


def decompose(shift, tol=1e-10, tau_dist=None):
    """Unitary eigendecomposition of a normal graph shift.

    Eigenvalues are sorted by (real part, then imaginary part) ascending so
    repeated runs produce identical output.  Hermitian shifts go through the
    symmetric solver and keep a real basis; other normal shifts use a complex
    Schur factorization, whose Q factor is unitary by construction.

    Raises
    ------
    NotNormal
        when ``||S S^H - S^H S||_F > tol * ||S||_F^2``.
    NumericalFailure
        when the eigensolver does not converge or the reconstruction
        ``V diag(lam) V^H`` misses ``S`` by more than ``1e-8 ||S||_F``.
    """
    if tol <= 0:
        raise InputError("tol must be positive")
    m = shift.matrix
    if not np.all(np.isfinite(m)):
        raise InputError("shift entries must be finite")
    fro = np.linalg.norm(m)
    if normality_residual(shift) > tol:
        raise NotNormal(
            f"shift is not normal: commutator residual exceeds {tol:g}"
        )
    hermitian = np.linalg.norm(m - m.conj().T) <= 1e-12 * max(fro, 1e-300)
    try:
        if hermitian:
            lam, v = np.linalg.eigh((m + m.conj().T) / 2.0)
        else:
            t, q = scipy.linalg.schur(m.astype(complex), output="complex")
            lam, v = np.diag(t).copy(), q
    except (np.linalg.LinAlgError, scipy.linalg.LinAlgError) as exc:
        raise NumericalFailure(f"eigendecomposition failed: {exc}") from exc

    order = np.lexsort((np.imag(lam), np.real(lam)))
    lam = lam[order]
    v = v[:, order]

    recon = (v * lam) @ v.conj().T
    if np.linalg.norm(recon - m) > 1e-8 * max(fro, 1e-300):
        raise NumericalFailure("eigendecomposition does not reconstruct the shift")

    scale = np.max(np.abs(lam)) if lam.size else 0.0
    if tau_dist is None:
        tau_dist = 1e-8 * scale
    diffs = np.abs(lam[:, None] - lam[None, :])
    n = lam.shape[0]
    min_gap = np.min(diffs[~np.eye(n, dtype=bool)]) if n > 1 else np.inf
    return SpectralBasis(v, lam, bool(min_gap > tau_dist))


def gft(basis, x):
    """Graph Fourier transform ``V^H x``; columns of 2-D input are signals."""
    x = np.asarray(x)
    if x.shape[0] != basis.n:
        raise DimensionMismatch(
            f"signal length {x.shape[0]} != basis size {basis.n}"
        )
    return basis.vectors.conj().T @ x


def igft(basis, xt):
    """Inverse graph Fourier transform ``V x_tilde``."""
    xt = np.asarray(xt)
    if xt.shape[0] != basis.n:
        raise DimensionMismatch(
            f"spectrum length {xt.shape[0]} != basis size {basis.n}"
        )
    return basis.vectors @ xt


def vandermonde(basis, cols):
    """First ``cols`` columns of the eigenvalue Vandermonde matrix.

    Also reports a 2-norm condition number estimate, since downstream
    solves against this matrix degrade quickly with its conditioning.
    """
    if not 1 <= cols <= basis.n:
        raise DimensionMismatch(
            f"column count {cols} outside [1, {basis.n}]"
        )
    psi = np.vander(basis.eigenvalues, cols, increasing=True)
    cond = float(np.linalg.cond(psi))
    return VandermondeMatrix(psi, cols, cond)


def apply_filter_vertex(shift, filt, x, adjoint=False):
    """Apply ``sum_l h_l S^l`` to ``x`` by iterated shifting.

    Uses L-1 matrix-vector products and never forms matrix powers.  With
    ``adjoint=True`` the polynomial is evaluated in ``S^H`` instead; the
    forward convention is the default everywhere in this package.
    ``x`` may be a vector or an (N, R) matrix of signal columns.
    """
    x = np.asarray(x)
    if x.shape[0] != shift.n:
        raise DimensionMismatch(
            f"signal length {x.shape[0]} != shift size {shift.n}"
        )
    h = filt.coeffs
    if len(h) > shift.n:
        raise DimensionMismatch(
            f"filter length {len(h)} exceeds node count {shift.n}"
        )
    s = shift.matrix.conj().T if adjoint else shift.matrix
    y = h[0] * x
    z = x
    for c in h[1:]:
        z = s @ z
        y = y + c * z
    return coerce_real(y)


def filter_freq_response(basis, filt):
    """Frequency response ``Psi_L h`` of a polynomial filter."""
    h = filt.coeffs
    if len(h) > basis.n:
        raise DimensionMismatch(
            f"filter length {len(h)} exceeds basis size {basis.n}"
        )
    psi = np.vander(basis.eigenvalues, len(h), increasing=True)
    return coerce_real(psi @ h)


def solve_vandermonde(basis, target):
    """Solve ``Psi h = target`` for full-order filter taps.

    Requires all eigenvalues distinct.  Eigenvalues are rescaled to unit
    maximum modulus before solving; the recovered taps are mapped back, so
    the result is identical to the unscaled solve but better conditioned.
    """
    if not basis.distinct_eigs:
        raise EigsNotDistinct("Vandermonde inversion needs distinct eigenvalues")
    target = np.asarray(target)
    if target.shape[0] != basis.n:
        raise DimensionMismatch("target length does not match basis size")
    lam = basis.eigenvalues.astype(complex)
    scale = np.max(np.abs(lam))
    scale = scale if scale > 0 else 1.0
    psi = np.vander(lam / scale, basis.n, increasing=True)
    try:
        h = np.linalg.solve(psi, target.astype(complex))
    except np.linalg.LinAlgError as exc:
        raise NumericalFailure(f"Vandermonde solve failed: {exc}") from exc
    h /= scale ** np.arange(basis.n)
    return coerce_real(h)
