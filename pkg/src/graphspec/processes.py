"""Stationary graph process generation, sample statistics, and diagnostics.

A process is stationary with respect to a normal shift when it is a
filtered white signal, equivalently when its covariance is diagonalized by
the shift's eigenbasis.  The power spectral density (PSD) is the diagonal
of the covariance in that basis: ``p = diag(V^H C V)``,
``C = V diag(p) V^H``.

All statistics use the zero-mean convention (no mean subtraction); use
:func:`project_out_eigenvector` to strip a structured mean beforehand.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import (
    DegreeOverflow,
    DimensionMismatch,
    InputError,
    InvalidExponents,
    NumericalFailure,
)
from .graphs import hop_distances
from .spectral import (
    GraphFilter,
    GraphShift,
    SpectralBasis,
    _freeze,
    apply_filter_vertex,
    coerce_real,
    decompose,
    filter_freq_response,
    gft,
    igft,
    solve_vandermonde,
)

NOISE_KINDS = ("gaussian", "uniform")


@dataclass(frozen=True, eq=False)
class SignalEnsemble:
    """N x R matrix of process realizations (one per column)."""

    data: np.ndarray
    noise_kind: str = "gaussian"
    generator: GraphFilter | None = None

    def __post_init__(self):
        d = np.asarray(self.data)
        if d.ndim != 2 or d.shape[1] < 1:
            raise DimensionMismatch("ensemble must be an N x R matrix with R >= 1")
        if not np.all(np.isfinite(d)):
            raise InputError("ensemble entries must be finite")
        object.__setattr__(self, "data", _freeze(d))

    @property
    def n(self):
        return self.data.shape[0]

    @property
    def r(self):
        return self.data.shape[1]


@dataclass(frozen=True, eq=False)
class CovarianceMatrix:
    """Hermitian positive-semidefinite N x N covariance."""

    matrix: np.ndarray

    def __post_init__(self):
        m = np.asarray(self.matrix)
        if m.ndim != 2 or m.shape[0] != m.shape[1]:
            raise DimensionMismatch("covariance must be square")
        scale = np.linalg.norm(m)
        if np.linalg.norm(m - m.conj().T) > 1e-10 * max(scale, 1e-300):
            raise InputError("covariance is not Hermitian within tolerance")
        object.__setattr__(self, "matrix", _freeze(coerce_real((m + m.conj().T) / 2.0)))

    @property
    def n(self):
        return self.matrix.shape[0]


@dataclass(frozen=True, eq=False)
class PsdEstimate:
    """Nonnegative PSD vector with estimator metadata."""

    values: np.ndarray
    method: dict = field(default_factory=dict)
    meta: dict = field(default_factory=dict)

    def __post_init__(self):
        v = np.asarray(self.values, dtype=float)
        if v.ndim != 1:
            raise DimensionMismatch("PSD must be a vector")
        if np.any(v < 0):
            raise InputError("PSD entries must be nonnegative after clipping")
        object.__setattr__(self, "values", _freeze(v))

    @property
    def n(self):
        return self.values.shape[0]


def clip_spectrum(values, floor_scale):
    """Clip tiny negative spectral values to zero.

    Entries below ``-1e-10 * floor_scale`` indicate genuinely indefinite
    input and raise ``NumericalFailure`` instead of being hidden.
    """
    values = np.asarray(coerce_real(values))
    if np.iscomplexobj(values):
        values = values.real
    floor = -1e-10 * max(float(floor_scale), 1e-300)
    if np.min(values, initial=0.0) < floor:
        raise NumericalFailure(
            f"spectral values fall below the clipping floor {floor:g}"
        )
    return np.maximum(values, 0.0)


def white_noise(n, r, noise_kind, rng):
    """Zero-mean unit-variance white noise matrix, gaussian or uniform."""
    if noise_kind == "gaussian":
        return rng.standard_normal((n, r))
    if noise_kind == "uniform":
        half = np.sqrt(3.0)
        return rng.uniform(-half, half, size=(n, r))
    raise InputError(f"noise kind must be one of {NOISE_KINDS}, got {noise_kind!r}")


def generate_stationary(shift, filt, r, noise_kind="gaussian", seed=None):
    """Filtered-white-noise ensemble: column r is ``H w_r`` with white w_r."""
    if r < 1:
        raise InputError("realization count must be >= 1")
    rng = np.random.default_rng(seed)
    w = white_noise(shift.n, r, noise_kind, rng)
    x = apply_filter_vertex(shift, filt, w)
    return SignalEnsemble(x, noise_kind, generator=filt)


def generate_from_psd(basis, p, r, noise_kind="gaussian", seed=None):
    """Ensemble with exact PSD ``p``, synthesized with the response ``sqrt(p)``."""
    p = np.asarray(p, dtype=float)
    if p.shape[0] != basis.n:
        raise DimensionMismatch("PSD length does not match basis size")
    if np.any(p < 0):
        raise InputError("PSD must be nonnegative")
    if r < 1:
        raise InputError("realization count must be >= 1")
    rng = np.random.default_rng(seed)
    w = white_noise(basis.n, r, noise_kind, rng)
    x = igft(basis, np.sqrt(p)[:, None] * gft(basis, w))
    return SignalEnsemble(coerce_real(x), noise_kind)


def diffusion_filter(shift_or_basis, rates):
    """Polynomial taps of the diffusion cascade ``prod_l (I - rate_l S)``.

    When the expanded degree exceeds N-1 the cascade is reduced through its
    frequency response, which requires distinct eigenvalues; otherwise
    ``DegreeOverflow`` is raised.
    """
    rates = np.atleast_1d(np.asarray(rates))
    poly = np.array([1.0 + 0j])
    for g in rates:
        poly = np.convolve(poly, np.array([1.0, -g], dtype=complex))
    if isinstance(shift_or_basis, SpectralBasis):
        n, basis = shift_or_basis.n, shift_or_basis
    else:
        n, basis = shift_or_basis.n, None
    if len(poly) <= n:
        return GraphFilter(poly)
    if basis is None:
        basis = decompose(shift_or_basis)
    if not basis.distinct_eigs:
        raise DegreeOverflow(
            "diffusion cascade exceeds degree N-1 and eigenvalues repeat"
        )
    response = np.ones(n, dtype=complex)
    for g in rates:
        response *= 1.0 - g * basis.eigenvalues
    return GraphFilter(solve_vandermonde(basis, response))


def sample_covariance(ens):
    """Zero-mean sample covariance ``(1/R) sum_r x_r x_r^H``."""
    x = ens.data
    return CovarianceMatrix(x @ x.conj().T / ens.r)


def true_covariance(basis, filt):
    """Model covariance ``V diag(|h_tilde|^2) V^H`` of a filtered white process."""
    gain = np.abs(filter_freq_response(basis, filt)) ** 2
    return covariance_from_psd(basis, gain)


def covariance_from_psd(basis, p):
    """Covariance ``V diag(p) V^H`` of a stationary process with PSD ``p``."""
    p = np.asarray(p, dtype=float)
    if p.shape[0] != basis.n:
        raise DimensionMismatch("PSD length does not match basis size")
    v = basis.vectors
    c = (v * p) @ v.conj().T
    return CovarianceMatrix((c + c.conj().T) / 2.0)


def psd_from_covariance(basis, cov):
    """PSD ``diag(V^H C V)``; for non-stationary input this is just the diagonal."""
    if cov.n != basis.n:
        raise DimensionMismatch("covariance size does not match basis")
    v = basis.vectors
    d = np.einsum("ji,jk,ki->i", v.conj(), cov.matrix, v)
    values = clip_spectrum(d.real, np.linalg.norm(cov.matrix))
    return PsdEstimate(values, method={"name": "covariance_diagonal"})


def stationarity_metric(basis, cov):
    """Diagonal Frobenius weight of ``V^H C V``; equals 1 iff it is diagonal."""
    if cov.n != basis.n:
        raise DimensionMismatch("covariance size does not match basis")
    v = basis.vectors
    m = v.conj().T @ cov.matrix @ v
    total = np.linalg.norm(m)
    if total == 0.0:
        return 1.0
    return float(np.linalg.norm(np.diag(m)) / total)


def shift_invariance_residual(shift, cov, a, b, c, max_total=None):
    """Relative residual of the shifted-correlation identity.

    For a process stationary in ``S`` the correlation after a total of
    ``a + b`` shift applications does not depend on how they split, i.e.
    ``S^a C S^b = S^{a+c} C S^{b-c}``.  Returns the Frobenius norm of the
    difference normalized by ``||C||_F`` so thresholds are scale free.
    """
    for name, val in (("a", a), ("b", b), ("c", c)):
        if int(val) != val or val < 0:
            raise InvalidExponents(f"{name} must be a nonnegative integer")
    a, b, c = int(a), int(b), int(c)
    if c > b:
        raise InvalidExponents("c must satisfy c <= b")
    if max_total is None:
        max_total = 2 * shift.n
    if a + b > max_total:
        raise InvalidExponents(f"a + b = {a + b} exceeds limit {max_total}")
    if cov.n != shift.n:
        raise DimensionMismatch("covariance size does not match shift")
    s = shift.matrix
    cm = cov.matrix
    norm_c = np.linalg.norm(cm)
    if norm_c == 0.0:
        return 0.0
    lhs = np.linalg.matrix_power(s, a) @ cm @ np.linalg.matrix_power(s, b)
    rhs = np.linalg.matrix_power(s, a + c) @ cm @ np.linalg.matrix_power(s, b - c)
    return float(np.linalg.norm(lhs - rhs) / norm_c)


def locality_support_check(shift, cov, taps, tol=1e-10):
    """Check that correlations vanish beyond ``2 (taps - 1)`` hops.

    A process generated by a filter with ``taps`` coefficients can only
    correlate vertices within that radius.  Returns ``(ok, violations)``
    where violations lists offending ``(i, j, |C_ij|)`` pairs with i < j.
    """
    if taps < 1:
        raise InputError("taps must be >= 1")
    if cov.n != shift.n:
        raise DimensionMismatch("covariance size does not match shift")
    dist = hop_distances(shift).dist
    bound = 2 * (taps - 1)
    mag = np.abs(cov.matrix)
    bad = (dist > bound) & (mag > tol)
    violations = [
        (int(i), int(j), float(mag[i, j])) for i, j in np.argwhere(bad) if i < j
    ]
    return len(violations) == 0, violations


def filtered_psd(basis, filt, p_in):
    """PSD after filtering: elementwise ``|h_tilde|^2 * p_in``."""
    p_in = np.asarray(p_in, dtype=float)
    if p_in.shape[0] != basis.n:
        raise DimensionMismatch("PSD length does not match basis size")
    gain = np.abs(filter_freq_response(basis, filt)) ** 2
    return gain * p_in


def filter_matching_psd(basis, p):
    """Filter whose squared response equals ``p`` (needs distinct eigenvalues)."""
    p = np.asarray(p, dtype=float)
    if np.any(p < 0):
        raise InputError("PSD must be nonnegative")
    return GraphFilter(solve_vandermonde(basis, np.sqrt(p)))


def project_out_eigenvector(ens, basis, k):
    """Remove the projection of every realization onto eigenvector ``k``.

    Structured means of stationary processes are scaled eigenvectors; this
    is the optional preprocessing that restores the zero-mean convention.
    """
    if not 0 <= k < basis.n:
        raise InputError(f"eigenvector index {k} outside [0, {basis.n})")
    vk = basis.vectors[:, k : k + 1]
    x = ens.data - vk @ (vk.conj().T @ ens.data)
    return SignalEnsemble(coerce_real(x), ens.noise_kind, ens.generator)
