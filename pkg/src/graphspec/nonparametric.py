"""Nonparametric PSD estimators and their closed-form moment predictors.

Estimators: the periodogram / correlogram pair (identical by construction),
the windowed average periodogram built from a vertex-domain window bank,
and filter-bank estimators with ideal-bandpass or FIR designs.

Each estimator comes with closed-form bias / (co)variance predictors valid
for Gaussian inputs.  The compact formulas assume a symmetric shift (real
eigenbasis); for other normal shifts a correction term involving
``G = V^T V`` enters the second moments, and the predictors apply it when
handed a complex basis.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
import scipy.linalg

from .errors import (
    DimensionMismatch,
    EmptyBank,
    IllConditioned,
    InputError,
    InvalidSpec,
)
from .graphs import cluster_complete_linkage, hop_distances
from .processes import PsdEstimate, clip_spectrum
from .spectral import _freeze, gft

WINDOW_ENERGY_RTOL = 1e-8
RESPONSE_ENERGY_RTOL = 1e-8


# ---------------------------------------------------------------------------
# periodogram / correlogram


def periodogram(basis, ens):
    """Average squared GFT magnitudes ``(1/R) sum_r |V^H x_r|^2``."""
    xt = gft(basis, ens.data)
    values = np.mean(np.abs(xt) ** 2, axis=1)
    return PsdEstimate(
        clip_spectrum(values, values.max(initial=0.0)),
        method={"name": "periodogram", "r": ens.r},
    )


def correlogram(basis, cov):
    """Diagonal of the doubly transformed covariance ``diag(V^H C V)``.

    Identical to the periodogram when ``cov`` is the sample covariance of
    the same ensemble.
    """
    if cov.n != basis.n:
        raise DimensionMismatch("covariance size does not match basis")
    v = basis.vectors
    d = np.einsum("ji,jk,ki->i", v.conj(), cov.matrix, v).real
    return PsdEstimate(
        clip_spectrum(d, np.linalg.norm(cov.matrix)),
        method={"name": "correlogram"},
    )


@dataclass(frozen=True, eq=False)
class PeriodogramMoments:
    """Closed-form moments of the periodogram for Gaussian input."""

    bias: np.ndarray
    covariance: np.ndarray
    mse: float
    assumptions: dict = field(default_factory=dict)


def predict_periodogram_moments(p, r):
    """Zero bias, covariance ``(2/R) diag(p)^2``, MSE ``(2/R) ||p||^2``.

    The covariance and MSE hold for Gaussian processes on symmetric
    shifts, which is recorded in the output assumptions.
    """
    p = np.asarray(p, dtype=float)
    if np.any(p < 0):
        raise InputError("PSD must be nonnegative")
    if r < 1:
        raise InputError("realization count must be >= 1")
    return PeriodogramMoments(
        bias=np.zeros_like(p),
        covariance=(2.0 / r) * np.diag(p**2),
        mse=float((2.0 / r) * np.sum(p**2)),
        assumptions={"noise": "gaussian", "shift": "symmetric"},
    )


# ---------------------------------------------------------------------------
# windowed average periodogram


@dataclass(frozen=True, eq=False)
class WindowBank:
    """M vertex-domain windows of energy N each (rows of ``windows``)."""

    windows: np.ndarray
    labels: tuple | None = None

    def __post_init__(self):
        w = np.atleast_2d(np.asarray(self.windows, dtype=float))
        if w.shape[0] < 1:
            raise EmptyBank("window bank must contain at least one window")
        n = w.shape[1]
        energies = np.sum(np.abs(w) ** 2, axis=1)
        if np.any(np.abs(energies - n) > WINDOW_ENERGY_RTOL * n):
            raise InvalidSpec("every window must have energy N")
        object.__setattr__(self, "windows", _freeze(w))

    @property
    def m(self):
        return self.windows.shape[0]

    @property
    def n(self):
        return self.windows.shape[1]


def bank_from_blocks(n, blocks):
    """Rectangular windows on a vertex partition, each scaled to energy N."""
    blocks = [sorted(int(i) for i in b) for b in blocks]
    w = np.zeros((len(blocks), n))
    for m, block in enumerate(blocks):
        if len(block) == 0:
            raise InvalidSpec("window blocks must be nonempty")
        w[m, block] = np.sqrt(n / len(block))
    return WindowBank(w, labels=tuple(tuple(b) for b in blocks))


def design_windows(shift, m, strategy="local", seed=None, sizes=None):
    """Build M rectangular windows over a vertex partition.

    ``local`` partitions by complete-linkage clustering of hop distances;
    ``random`` shuffles vertices into blocks (near-equal sizes, or the
    given ``sizes``).
    """
    n = shift.n
    if strategy == "local":
        blocks = cluster_complete_linkage(hop_distances(shift), m)
    elif strategy == "random":
        if sizes is None:
            base, extra = divmod(n, m)
            sizes = [base + (1 if i < extra else 0) for i in range(m)]
        if len(sizes) != m or sum(sizes) != n:
            raise InvalidSpec("sizes must have length m and sum to n")
        perm = np.random.default_rng(seed).permutation(n)
        blocks, start = [], 0
        for s in sizes:
            blocks.append(sorted(int(i) for i in perm[start : start + s]))
            start += s
    else:
        raise InvalidSpec(f"unknown window strategy {strategy!r}")
    return bank_from_blocks(n, blocks)


def window_dual(basis, w):
    """Frequency dual ``V^H diag(w) V`` of a vertex-domain window."""
    w = np.asarray(w)
    if w.shape[0] != basis.n:
        raise DimensionMismatch("window length does not match basis size")
    v = basis.vectors
    return (v.conj().T * w) @ v


@dataclass(frozen=True, eq=False)
class SpectrumMixing:
    """Frequency duals of a window bank and their pairwise mixing matrices."""

    duals: np.ndarray  # (M, N, N)

    def __post_init__(self):
        object.__setattr__(self, "duals", _freeze(self.duals))

    @classmethod
    def from_bank(cls, basis, bank):
        duals = np.stack([window_dual(basis, w) for w in bank.windows])
        return cls(duals)

    def mixing(self, m, mp):
        """Spectrum mixing matrix ``W_m o conj(W_mp)``."""
        return self.duals[m] * self.duals[mp].conj()


def windowed_avg_periodogram(basis, bank, x):
    """Single-realization estimate ``(1/M) sum_m |V^H (w_m o x)|^2``."""
    x = np.asarray(x)
    if x.ndim != 1:
        raise DimensionMismatch("windowed estimator takes a single realization")
    if x.shape[0] != basis.n or bank.n != basis.n:
        raise DimensionMismatch("signal/bank length does not match basis size")
    xt = gft(basis, bank.windows.T * x[:, None])  # N x M windowed spectra
    values = np.mean(np.abs(xt) ** 2, axis=1)
    return PsdEstimate(
        clip_spectrum(values, values.max(initial=0.0)),
        method={"name": "windowed", "m": bank.m},
    )


@dataclass(frozen=True, eq=False)
class WindowMoments:
    """Predicted moments of the windowed average periodogram."""

    mean: np.ndarray
    bias: np.ndarray
    cov_trace: float
    mse: float
    assumptions: dict = field(default_factory=dict)


def predict_window_moments(basis, bank, p):
    """Closed-form mean, bias, covariance trace, and MSE of the estimator.

    Mean is ``(1/M) sum_m (W_m o conj(W_m)) p``.  The covariance trace is
    ``(2/M^2) sum_{m,m'} ||(W_m o conj(W_m')) p||^2`` on symmetric shifts;
    with a complex eigenbasis the Gaussian fourth moment contributes an
    extra summand per pair, computed here through ``G = V^T V``.
    """
    p = np.asarray(p, dtype=float)
    if p.shape[0] != basis.n or bank.n != basis.n:
        raise DimensionMismatch("PSD/bank length does not match basis size")
    mix = SpectrumMixing.from_bank(basis, bank)
    mm = np.abs(mix.duals) ** 2  # W_mm stacks
    mean = mm.mean(axis=0) @ p
    bias = mean - p

    real_basis = not np.iscomplexobj(basis.vectors)
    total = 0.0
    if real_basis:
        for m in range(bank.m):
            for mp in range(bank.m):
                total += 2.0 * np.sum(np.abs(mix.mixing(m, mp) @ p) ** 2)
    else:
        v = basis.vectors
        g = v.T @ v
        dp = np.diag(p.astype(complex))
        for m in range(bank.m):
            wm = mix.duals[m]
            left = wm @ dp @ g.conj()
            left2 = wm.conj() @ g @ dp
            for mp in range(bank.m):
                wmp = mix.duals[mp]
                second = np.abs(mix.mixing(m, mp) @ p) ** 2
                third = np.einsum("ij,ij->i", left, wmp) * np.einsum(
                    "ij,ij->i", left2, wmp.conj()
                )
                total += float(np.sum(second + third.real))
    cov_trace = float(total) / bank.m**2
    mse = float(np.sum(np.abs(bias) ** 2) + cov_trace)
    return WindowMoments(
        mean=mean,
        bias=bias,
        cov_trace=cov_trace,
        mse=mse,
        assumptions={"noise": "gaussian", "shift": "symmetric" if real_basis else "normal"},
    )


def cross_term_matrix(basis, bank, p):
    """Pairwise covariance cross terms ``||(W_m o conj(W_m')) p||^2``.

    Entries vanish for window pairs whose supports are farther apart than
    twice the generating filter degree (see :func:`window_separations`).
    """
    p = np.asarray(p, dtype=float)
    if p.shape[0] != basis.n or bank.n != basis.n:
        raise DimensionMismatch("PSD/bank length does not match basis size")
    mix = SpectrumMixing.from_bank(basis, bank)
    out = np.zeros((bank.m, bank.m))
    for m in range(bank.m):
        for mp in range(bank.m):
            out[m, mp] = np.sum(np.abs(mix.mixing(m, mp) @ p) ** 2)
    return out


def window_separations(shift, bank):
    """Minimum hop distance between the supports of every window pair."""
    if bank.n != shift.n:
        raise DimensionMismatch("bank length does not match shift size")
    dist = hop_distances(shift).dist
    out = np.zeros((bank.m, bank.m))
    supports = [np.flatnonzero(w) for w in bank.windows]
    for m in range(bank.m):
        for mp in range(bank.m):
            out[m, mp] = np.min(dist[np.ix_(supports[m], supports[mp])])
    return out


# ---------------------------------------------------------------------------
# filter banks


@dataclass(frozen=True, eq=False)
class FilterBank:
    """N unit-energy frequency responses, one per frequency (rows)."""

    responses: np.ndarray
    design: str = "custom"
    coeffs: np.ndarray | None = None
    raw_responses: np.ndarray | None = None

    def __post_init__(self):
        q = np.atleast_2d(np.asarray(self.responses))
        if q.shape[0] < 1:
            raise EmptyBank("filter bank must contain at least one filter")
        if q.shape[0] != q.shape[1]:
            raise DimensionMismatch("filter bank needs one filter per frequency")
        energies = np.sum(np.abs(q) ** 2, axis=1)
        if np.any(np.abs(energies - 1.0) > RESPONSE_ENERGY_RTOL):
            raise InvalidSpec("every response must have unit energy")
        object.__setattr__(self, "responses", _freeze(q))
        if self.coeffs is not None:
            object.__setattr__(self, "coeffs", _freeze(self.coeffs))
        if self.raw_responses is not None:
            object.__setattr__(self, "raw_responses", _freeze(self.raw_responses))

    @property
    def n(self):
        return self.responses.shape[0]


def design_ideal_bandpass(basis, b):
    """Bandpass bank: filter k passes frequency k plus its B-1 nearest ones.

    Nearness is ``|lam_k - lam_k'|`` (complex modulus); ties resolve to the
    lower index.  Passband values are ``1/sqrt(B)`` so energy is one.
    """
    n = basis.n
    if not 1 <= b <= n:
        raise InvalidSpec(f"bandwidth {b} outside [1, {n}]")
    lam = basis.eigenvalues
    q = np.zeros((n, n))
    for k in range(n):
        dist = np.abs(lam - lam[k])
        others = np.delete(np.arange(n), k)
        order = others[np.argsort(dist[others], kind="stable")]
        support = np.concatenate(([k], order[: b - 1]))
        q[k, support] = 1.0 / np.sqrt(b)
    return FilterBank(q, design=f"ideal:{b}")


def design_fir_bandpass(basis, taps, cond_limit=1e12):
    """Minimum out-of-band-power FIR bank with ``[q_k]_k = 1`` constraints.

    Each filter minimizes ``||Psi_L q||^2`` subject to a unit response at
    its own frequency; the closed-form solution is evaluated through a QR
    factorization of the Vandermonde matrix built from eigenvalues rescaled
    to unit maximum modulus (the final responses are invariant to that
    rescaling).  Responses are normalized to unit energy afterwards; the
    pre-normalization responses are kept in ``raw_responses``.
    """
    n = basis.n
    if not 1 <= taps <= n:
        raise InvalidSpec(f"FIR length {taps} outside [1, {n}]")
    lam = basis.eigenvalues.astype(complex)
    scale = np.max(np.abs(lam))
    scale = scale if scale > 0 else 1.0
    psi = np.vander(lam / scale, taps, increasing=True)
    r = np.linalg.qr(psi, mode="r")
    cond_r = np.linalg.cond(r)
    if cond_r**2 > cond_limit:
        raise IllConditioned(
            f"Vandermonde Gram condition {cond_r**2:.3g} exceeds {cond_limit:g}"
        )
    responses = np.zeros((n, n), dtype=complex)
    raw = np.zeros((n, n), dtype=complex)
    coeffs = np.zeros((n, taps), dtype=complex)
    rh = r.conj().T
    for k in range(n):
        rhs = psi[k].conj()
        z = scipy.linalg.solve_triangular(
            r, scipy.linalg.solve_triangular(rh, rhs, lower=True), lower=False
        )
        denom = psi[k] @ z
        qk = z / denom
        resp = psi @ qk
        raw[k] = resp
        responses[k] = resp / np.linalg.norm(resp)
        coeffs[k] = qk / scale ** np.arange(taps)
    if not np.iscomplexobj(basis.vectors):
        responses, raw, coeffs = responses.real, raw.real, coeffs.real
    return FilterBank(
        responses, design=f"fir:{taps}", coeffs=coeffs, raw_responses=raw
    )


def filterbank_estimate(basis, fb, x):
    """Output energies ``p_k = ||q_k o x_tilde||^2`` of the bank filters."""
    x = np.asarray(x)
    if x.ndim != 1:
        raise DimensionMismatch("filter-bank estimator takes a single realization")
    if x.shape[0] != basis.n or fb.n != basis.n:
        raise DimensionMismatch("signal/bank size does not match basis")
    xt = gft(basis, x)
    values = (np.abs(fb.responses) ** 2) @ (np.abs(xt) ** 2)
    return PsdEstimate(
        clip_spectrum(values, values.max(initial=0.0)),
        method={"name": "filterbank", "design": fb.design},
    )


@dataclass(frozen=True, eq=False)
class FilterBankMoments:
    """Predicted per-frequency moments of a filter-bank estimate."""

    mean: np.ndarray
    bias: np.ndarray
    variance: np.ndarray
    assumptions: dict = field(default_factory=dict)


def predict_filterbank_moments(fb, p, basis=None):
    """Mean ``(|q_k|^2)^T p`` and Gaussian variance per frequency.

    On symmetric shifts the variance is ``2 ||diag(|q_k|^2) p||^2``.  Pass
    the (complex) basis to add the extra fourth-moment summand required on
    non-symmetric normal shifts.
    """
    p = np.asarray(p, dtype=float)
    if p.shape[0] != fb.n:
        raise DimensionMismatch("PSD length does not match bank size")
    q2 = np.abs(fb.responses) ** 2
    mean = q2 @ p
    bias = mean - p
    base = np.sum((q2 * p) ** 2, axis=1)
    if basis is None or not np.iscomplexobj(basis.vectors):
        variance = 2.0 * base
        shift_kind = "symmetric"
    else:
        v = basis.vectors
        g2 = np.abs(v.T @ v) ** 2
        correction = np.einsum("j,kj,ji,ki->k", p**2, q2, g2, q2)
        variance = base + correction
        shift_kind = "normal"
    return FilterBankMoments(
        mean=mean,
        bias=bias,
        variance=variance,
        assumptions={"noise": "gaussian", "shift": shift_kind},
    )
