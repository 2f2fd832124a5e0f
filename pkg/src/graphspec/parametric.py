"""Parametric PSD models (MA, AR, ARMA) and their fitting schemes.

An MA process is driven by a polynomial filter (PSD ``|Psi_L beta|^2``), an
AR process by a product of single-pole inverses, and an ARMA process by a
ratio of polynomials in the eigenvalues.  Fits come in four flavors:

* nonconvex least squares on the PSD (multi-start first-order descent),
* the symmetric-shift relaxation, linear in the covariance-polynomial
  coefficients ``gamma``,
* the convex nonnegative restriction for PSD shifts, comparing
  ``sqrt(p_hat)`` against ``Psi_L beta`` with ``beta >= 0``,
* lifted / nonnegative linear least squares for ARMA models.

All solvers parameterize internally in eigenvalues rescaled to unit
maximum modulus; coefficients are mapped back, so results match the
unscaled formulation with far better conditioning.
"""
from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np
import scipy.optimize

from .errors import (
    DimensionMismatch,
    InputError,
    NoDescent,
    NotSymmetric,
    NumericalFailure,
    PoleOnGrid,
    RankDeficientWarning,
    ShiftNotPSD,
)
from .processes import CovarianceMatrix, covariance_from_psd
from .spectral import _freeze

EPS_POLE = 1e-8


# ---------------------------------------------------------------------------
# models


@dataclass(frozen=True, eq=False)
class MaModel:
    """Real polynomial-filter taps ``beta``."""

    beta: np.ndarray

    def __post_init__(self):
        b = np.atleast_1d(np.asarray(self.beta, dtype=float))
        if b.ndim != 1 or b.size == 0:
            raise InputError("beta must be a nonempty real vector")
        object.__setattr__(self, "beta", _freeze(b))

    @property
    def order(self):
        return self.beta.shape[0]


@dataclass(frozen=True, eq=False)
class ArModel:
    """Gain ``alpha0`` and diffusion rates of a product-of-poles filter."""

    alpha0: float
    alphas: np.ndarray

    def __post_init__(self):
        a = np.atleast_1d(np.asarray(self.alphas, dtype=float))
        object.__setattr__(self, "alpha0", float(self.alpha0))
        object.__setattr__(self, "alphas", _freeze(a))

    @property
    def order(self):
        return self.alphas.shape[0]


@dataclass(frozen=True, eq=False)
class ArmaModel:
    """Denominator coefficients ``a`` (length M) and numerator ``b`` (length L)."""

    a: np.ndarray
    b: np.ndarray

    def __post_init__(self):
        a = np.atleast_1d(np.asarray(self.a, dtype=float))
        b = np.atleast_1d(np.asarray(self.b, dtype=float))
        if b.size == 0:
            raise InputError("numerator b must be nonempty")
        object.__setattr__(self, "a", _freeze(a))
        object.__setattr__(self, "b", _freeze(b))


@dataclass(frozen=True)
class FitConfig:
    """Knobs shared by the nonconvex fitters."""

    restarts: int = 20
    max_iter: int = 10_000
    tol: float = 1e-8
    seed: int = 0
    grid_points: int = 101
    eps_pole: float = EPS_POLE


# ---------------------------------------------------------------------------
# closed-form PSDs


def _check_len(model_len, n, what):
    if model_len > n:
        raise DimensionMismatch(f"{what} length {model_len} exceeds size {n}")


def ma_psd(basis, model):
    """MA PSD ``|Psi_L beta|^2`` evaluated at the shift eigenvalues."""
    _check_len(model.order, basis.n, "beta")
    h = np.polynomial.polynomial.polyval(basis.eigenvalues, model.beta)
    return np.abs(h) ** 2


def _ar_denominators(lam, alphas, eps_pole):
    factors = 1.0 - np.outer(np.atleast_1d(alphas), lam)
    if factors.size and np.min(np.abs(factors)) < eps_pole:
        raise PoleOnGrid("an AR factor vanishes at a shift eigenvalue")
    return factors


def ar_psd(basis, model, eps_pole=EPS_POLE):
    """AR PSD ``alpha0^2 prod_m |1 - alpha_m lam|^-2``."""
    factors = _ar_denominators(basis.eigenvalues, model.alphas, eps_pole)
    den = np.prod(np.abs(factors) ** 2, axis=0) if factors.size else np.ones(basis.n)
    return model.alpha0**2 / den


def arma_psd(basis, model, eps_pole=EPS_POLE):
    """ARMA PSD ``|B(lam)|^2 / |1 - A(lam)|^2``."""
    lam = basis.eigenvalues
    num = np.abs(np.polynomial.polynomial.polyval(lam, model.b)) ** 2
    a_full = np.concatenate(([0.0], model.a))  # A(lam) has no constant term
    den_root = 1.0 - np.polynomial.polynomial.polyval(lam, a_full)
    if np.min(np.abs(den_root)) < eps_pole:
        raise PoleOnGrid("ARMA denominator vanishes at a shift eigenvalue")
    return num / np.abs(den_root) ** 2


def model_psd(basis, model):
    """Dispatch on model type to its closed-form PSD."""
    if isinstance(model, MaModel):
        return ma_psd(basis, model)
    if isinstance(model, ArModel):
        return ar_psd(basis, model)
    if isinstance(model, ArmaModel):
        return arma_psd(basis, model)
    raise InputError(f"unknown model type {type(model).__name__}")


def model_covariance(basis, model):
    """Covariance ``V diag(p_model) V^H`` of any parametric model."""
    return covariance_from_psd(basis, model_psd(basis, model))


# ---------------------------------------------------------------------------
# fit results


@dataclass(frozen=True, eq=False)
class MaFit:
    model: MaModel
    psd: np.ndarray
    objective: float
    best_restart: int
    n_restarts: int


@dataclass(frozen=True, eq=False)
class MaSymmetricFit:
    gamma: np.ndarray
    psd: np.ndarray
    residual: float
    rank: int


@dataclass(frozen=True, eq=False)
class MaNonnegFit:
    model: MaModel
    psd: np.ndarray
    objective: float
    kkt_residual: float


@dataclass(frozen=True, eq=False)
class ArFit:
    model: ArModel
    psd: np.ndarray
    objective: float


@dataclass(frozen=True, eq=False)
class ArmaRelaxedFit:
    """Lifted spectral coefficients: denominator (leading 1) and numerator."""

    denom_coeffs: np.ndarray
    numer_coeffs: np.ndarray
    psd: np.ndarray
    objective: float
    rank: int


@dataclass(frozen=True, eq=False)
class ArmaNonnegFit:
    model: ArmaModel
    psd: np.ndarray
    objective: float
    kkt_residual: float


# ---------------------------------------------------------------------------
# helpers


def _scaled_powers(basis, cols):
    lam = basis.eigenvalues
    scale = float(np.max(np.abs(lam))) if lam.size else 1.0
    scale = scale if scale > 0 else 1.0
    psi = np.vander(lam / scale, cols, increasing=True)
    return psi, scale


def _require_real_spectrum(basis, what):
    lam = basis.eigenvalues
    if np.iscomplexobj(lam) and np.max(np.abs(lam.imag)) > 1e-10 * max(
        np.max(np.abs(lam)), 1e-300
    ):
        raise NotSymmetric(f"{what} requires a symmetric shift (real eigenvalues)")
    return np.real(lam)


def _require_psd_spectrum(basis, what):
    lam = _require_real_spectrum(basis, what)
    if np.min(lam, initial=0.0) < -1e-10 * max(np.max(np.abs(lam)), 1.0):
        raise ShiftNotPSD(f"{what} requires a positive-semidefinite shift")
    return np.maximum(lam, 0.0)


def _check_psd_input(p_hat, n):
    p_hat = np.asarray(p_hat, dtype=float)
    if p_hat.shape != (n,):
        raise DimensionMismatch("estimated PSD length does not match basis size")
    if np.any(p_hat < 0):
        raise InputError("estimated PSD must be nonnegative")
    return p_hat


def _descend(objective, gradient, x0, max_iter, tol):
    """Gradient descent with backtracking Armijo steps and step growth."""
    x = np.asarray(x0, dtype=float)
    f = objective(x)
    step = 1.0
    for _ in range(max_iter):
        g = gradient(x)
        gnorm2 = float(g @ g)
        if np.sqrt(gnorm2) <= tol * (1.0 + abs(f)):
            break
        t = step
        while True:
            x_new = x - t * g
            f_new = objective(x_new)
            if f_new <= f - 1e-4 * t * gnorm2:
                break
            t *= 0.5
            if t < 1e-20:
                break
        if t < 1e-20:
            break
        if f - f_new <= tol * 1e-4 * (1.0 + abs(f)):
            x, f = x_new, f_new
            break
        x, f = x_new, f_new
        step = t * 2.0
    return x, f


def _lstsq_with_rank_warning(a, b, what):
    sol, _, rank, _ = np.linalg.lstsq(a, b, rcond=None)
    if rank < a.shape[1]:
        warnings.warn(
            f"{what}: design matrix rank {rank} < {a.shape[1]}; "
            "returning the minimum-norm solution",
            RankDeficientWarning,
            stacklevel=3,
        )
    return sol, rank


def _nnls(a, b, what):
    sol, rnorm = scipy.optimize.nnls(a, b, maxiter=max(30 * a.shape[1], 300))
    grad = a.T @ (a @ sol - b)
    scale = max(1.0, float(np.max(np.abs(a.T @ b))) if b.size else 1.0)
    kkt = max(
        float(np.max(np.abs(grad[sol > 0]), initial=0.0)),
        float(np.max(-grad[sol == 0], initial=0.0)),
    )
    if kkt > 1e-8 * scale:
        raise NumericalFailure(f"{what}: NNLS KKT residual {kkt:.3g} too large")
    return sol, rnorm**2, kkt


# ---------------------------------------------------------------------------
# MA fits


def ma_fit_freq(basis, p_hat, order, config=None):
    """Fit ``|Psi_L beta|^2`` to an estimated PSD by multi-start descent.

    Starts from the flat model (best constant PSD) plus ``restarts`` random
    Gaussian initializations; returns the best local minimizer.  Raises
    ``NoDescent`` if nothing reaches the flat-model baseline.
    """
    cfg = config or FitConfig()
    p_hat = _check_psd_input(p_hat, basis.n)
    _check_len(order, basis.n, "beta")
    psi, scale = _scaled_powers(basis, order)
    psi_h = psi.conj().T

    def objective(beta):
        e = p_hat - np.abs(psi @ beta) ** 2
        return float(e @ e)

    def gradient(beta):
        r = psi @ beta
        e = p_hat - np.abs(r) ** 2
        return -4.0 * np.real(psi_h @ (e * r))

    flat = np.zeros(order)
    flat[0] = np.sqrt(np.mean(p_hat))
    baseline = objective(flat)
    rng = np.random.default_rng(cfg.seed)
    starts = [flat] + [
        rng.normal(0.0, np.sqrt(1.0 / order), size=order)
        for _ in range(cfg.restarts)
    ]
    best_beta, best_obj, best_idx = None, np.inf, -1
    for idx, x0 in enumerate(starts):
        beta, obj = _descend(objective, gradient, x0, cfg.max_iter, cfg.tol)
        if obj < best_obj:
            best_beta, best_obj, best_idx = beta, obj, idx
    if best_obj > baseline + 1e-12 * (1.0 + baseline):
        raise NoDescent("no restart reached the flat-model baseline")
    psd = np.abs(psi @ best_beta) ** 2
    beta = best_beta / scale ** np.arange(order)
    return MaFit(
        model=MaModel(beta),
        psd=psd,
        objective=best_obj,
        best_restart=best_idx,
        n_restarts=len(starts),
    )


def ma_fit_symmetric(basis, cov, order):
    """Symmetric-shift relaxation: fit ``C(gamma) = sum_l gamma_l S^l``.

    Solves the linear least squares over the ``2*order - 1`` polynomial
    coefficients; because the Frobenius norm is unitarily invariant this
    reduces to fitting the covariance diagonal in the frequency domain.
    Returns the coefficients, the implied PSD (clipped at zero), and the
    full-matrix residual.
    """
    _require_real_spectrum(basis, "symmetric MA fit")
    if not isinstance(cov, CovarianceMatrix):
        cov = CovarianceMatrix(np.asarray(cov))
    if cov.n != basis.n:
        raise DimensionMismatch("covariance size does not match basis")
    cols = 2 * order - 1
    if cols > basis.n:
        raise DimensionMismatch("2*order - 1 exceeds the basis size")
    v = basis.vectors
    spectral = v.conj().T @ cov.matrix @ v
    diag = np.real(np.diag(spectral))
    off_mass = np.linalg.norm(spectral) ** 2 - np.linalg.norm(np.diag(spectral)) ** 2
    psi, scale = _scaled_powers(basis, cols)
    psi = np.real(psi)
    gamma_scaled, rank = _lstsq_with_rank_warning(psi, diag, "symmetric MA fit")
    fit_diag = psi @ gamma_scaled
    residual = float(np.sqrt(max(off_mass, 0.0) + np.sum((diag - fit_diag) ** 2)))
    gamma = gamma_scaled / scale ** np.arange(cols)
    return MaSymmetricFit(
        gamma=gamma,
        psd=np.maximum(fit_diag, 0.0),
        residual=residual,
        rank=int(rank),
    )


def ma_fit_nonneg(basis, p_hat, order):
    """Convex restriction for PSD shifts: ``min ||sqrt(p_hat) - Psi_L beta||``
    over ``beta >= 0``, solved by active-set nonnegative least squares."""
    _require_psd_spectrum(basis, "nonnegative MA fit")
    p_hat = _check_psd_input(p_hat, basis.n)
    _check_len(order, basis.n, "beta")
    psi, scale = _scaled_powers(basis, order)
    psi = np.real(psi)
    beta_scaled, obj, kkt = _nnls(psi, np.sqrt(p_hat), "nonnegative MA fit")
    beta = beta_scaled / scale ** np.arange(order)
    return MaNonnegFit(
        model=MaModel(beta),
        psd=(psi @ beta_scaled) ** 2,
        objective=obj,
        kkt_residual=kkt,
    )


# ---------------------------------------------------------------------------
# AR fits


def _ar_shape(lam, alphas):
    factors = 1.0 - np.outer(alphas, lam)
    return np.prod(np.abs(factors) ** 2, axis=0) if alphas.size else np.ones(lam.shape)


def _ar_profile_objective(lam, p_hat, alphas):
    shape = 1.0 / _ar_shape(lam, np.atleast_1d(alphas))
    c = max(float(shape @ p_hat) / float(shape @ shape), 0.0)
    e = p_hat - c * shape
    return float(e @ e), np.sqrt(c)


def ar_fit(basis, p_hat, order, config=None):
    """Fit an AR(order) PSD to an estimated PSD.

    Order one uses a grid over the pole-safe interval with the gain solved
    per grid point, followed by a bounded local refinement.  Higher orders
    run the multi-start projected descent used by the MA fitter.
    """
    cfg = config or FitConfig()
    p_hat = _check_psd_input(p_hat, basis.n)
    if order < 1:
        raise InputError("AR order must be >= 1")
    lam = basis.eigenvalues
    lam_max = float(np.max(np.abs(lam)))
    if lam_max == 0.0:
        return ArFit(
            model=ArModel(np.sqrt(np.mean(p_hat)), np.zeros(order)),
            psd=np.full(basis.n, np.mean(p_hat)),
            objective=float(np.sum((p_hat - np.mean(p_hat)) ** 2)),
        )
    a_max = 0.99 / lam_max

    if order == 1:
        grid = np.linspace(-a_max, a_max, cfg.grid_points)
        objs = [_ar_profile_objective(lam, p_hat, a)[0] for a in grid]
        k = int(np.argmin(objs))
        span = grid[1] - grid[0]
        lo = max(-a_max, grid[k] - span)
        hi = min(a_max, grid[k] + span)
        res = scipy.optimize.minimize_scalar(
            lambda a: _ar_profile_objective(lam, p_hat, a)[0],
            bounds=(lo, hi),
            method="bounded",
            options={"xatol": 1e-12 * max(a_max, 1.0)},
        )
        best_a = float(res.x) if res.fun <= objs[k] else float(grid[k])
        obj, alpha0 = _ar_profile_objective(lam, p_hat, best_a)
        model = ArModel(alpha0, np.array([best_a]))
        return ArFit(model=model, psd=ar_psd(basis, model, cfg.eps_pole), objective=obj)

    def objective(theta):
        a0, alphas = theta[0], theta[1:]
        e = p_hat - a0**2 / _ar_shape(lam, alphas)
        return float(e @ e)

    def gradient(theta):
        a0, alphas = theta[0], theta[1:]
        pk = a0**2 / _ar_shape(lam, alphas)
        e = p_hat - pk
        g = np.empty_like(theta)
        g[0] = -2.0 * np.sum(e * (2.0 * pk / a0)) if a0 != 0 else 0.0
        for m, am in enumerate(alphas):
            den = np.abs(1.0 - am * lam) ** 2
            dpk = pk * (2.0 * np.real(lam) - 2.0 * am * np.abs(lam) ** 2) / den
            g[1 + m] = -2.0 * np.sum(e * dpk)
        return g

    def project(theta):
        out = theta.copy()
        out[1:] = np.clip(out[1:], -a_max, a_max)
        return out

    def descend_projected(x0):
        x = project(np.asarray(x0, dtype=float))
        f = objective(x)
        step = 1.0
        for _ in range(cfg.max_iter):
            g = gradient(x)
            gnorm2 = float(g @ g)
            if np.sqrt(gnorm2) <= cfg.tol * (1.0 + abs(f)):
                break
            t = step
            while True:
                x_new = project(x - t * g)
                f_new = objective(x_new)
                if f_new <= f - 1e-4 * t * gnorm2 or t < 1e-20:
                    break
                t *= 0.5
            if t < 1e-20 or f - f_new <= cfg.tol * 1e-4 * (1.0 + abs(f)):
                if f_new < f:
                    x, f = x_new, f_new
                break
            x, f = x_new, f_new
            step = t * 2.0
        return x, f

    flat = np.zeros(order + 1)
    flat[0] = np.sqrt(np.mean(p_hat))
    baseline = objective(flat)
    rng = np.random.default_rng(cfg.seed)
    starts = [flat]
    for _ in range(cfg.restarts):
        theta = rng.normal(0.0, np.sqrt(1.0 / (order + 1)), size=order + 1)
        theta[0] = abs(theta[0]) + np.sqrt(np.mean(p_hat))
        starts.append(theta)
    best, best_obj = None, np.inf
    for x0 in starts:
        theta, obj = descend_projected(x0)
        if obj < best_obj:
            best, best_obj = theta, obj
    if best_obj > baseline + 1e-12 * (1.0 + baseline):
        raise NoDescent("no restart reached the flat-model baseline")
    model = ArModel(abs(best[0]), best[1:])
    return ArFit(model=model, psd=ar_psd(basis, model, cfg.eps_pole), objective=best_obj)


# ---------------------------------------------------------------------------
# ARMA fits


def _floored_ratio(num, den, floor_rel=1e-2):
    """Spectral ratio with out-of-model frequencies zeroed.

    Where the fitted denominator polynomial falls below ``floor_rel`` times
    its peak, the rational model claims a dynamic range the fit cannot
    support and the ratio amplifies the fit residual without bound; the
    implied PSD reports 0 at those frequencies instead.
    """
    num = np.maximum(num, 0.0)
    floor = floor_rel * max(float(np.max(np.abs(den))), 1e-300)
    good = den > floor
    out = np.zeros_like(num)
    np.divide(num, den, out=out, where=good)
    return out


def _constrained_nnls(design, target, psi_a, margin, what):
    """Nonnegative LS with the valid-region constraints ``A(lam_k) <= 1 - margin``.

    The square-root comparison behind the nonnegative ARMA variant only
    models frequencies where the denominator ``1 - A(lam)`` stays positive;
    without the constraint, noisy input routinely places a denominator root
    inside the eigenvalue range and the implied PSD explodes.  The feasible
    set is an intersection of half-spaces, so this stays a convex QP.
    """
    n_b = design.shape[1] - psi_a.shape[1]
    sol, rnorm = scipy.optimize.nnls(design, target, maxiter=max(30 * design.shape[1], 300))
    if psi_a.shape[1] == 0 or np.max(psi_a @ sol[n_b:], initial=0.0) <= 1.0 - margin:
        grad = design.T @ (design @ sol - target)
        scale = max(1.0, float(np.max(np.abs(design.T @ target))))
        kkt = max(
            float(np.max(np.abs(grad[sol > 0]), initial=0.0)),
            float(np.max(-grad[sol == 0], initial=0.0)),
        )
        return sol, rnorm**2, kkt

    import cvxopt

    n_var = design.shape[1]
    gram = design.T @ design + 1e-12 * np.eye(n_var)
    g_mat = np.vstack(
        [-np.eye(n_var), np.hstack([np.zeros((psi_a.shape[0], n_b)), psi_a])]
    )
    h_vec = np.concatenate([np.zeros(n_var), np.full(psi_a.shape[0], 1.0 - margin)])
    cvxopt.solvers.options["show_progress"] = False
    try:
        qp = cvxopt.solvers.qp(
            cvxopt.matrix(gram),
            cvxopt.matrix(-design.T @ target),
            cvxopt.matrix(g_mat),
            cvxopt.matrix(h_vec),
        )
    except ValueError as exc:
        raise NumericalFailure(f"{what}: constrained solve failed ({exc})") from exc
    if qp["status"] not in ("optimal", "unknown"):
        raise NumericalFailure(f"{what}: constrained solve status {qp['status']}")
    sol = np.clip(np.asarray(qp["x"]).ravel(), 0.0, None)
    reach = psi_a @ sol[n_b:]
    if np.max(reach, initial=0.0) > 1.0 - margin:
        sol[n_b:] *= (1.0 - margin) / np.max(reach)
    r = design @ sol - target
    grad = design.T @ r
    kkt = max(
        float(np.max(np.abs(grad[sol > 1e-12]), initial=0.0)),
        float(np.max(-grad[sol <= 1e-12], initial=0.0)),
    )
    return sol, float(r @ r), kkt


def arma_fit_ls(basis, p_hat, m, order, variant="relaxed", stab_margin=0.01):
    """Linear least-squares ARMA fits on an estimated PSD.

    ``relaxed``
        Lifts both sides to free spectral polynomials: minimize
        ``|| d(lam) o p_hat - c(lam) ||`` over the denominator coefficients
        ``d`` (degree 2m, constant pinned to 1) and numerator coefficients
        ``c`` (degree 2(order-1)), jointly linear.  Needs a symmetric shift.
    ``nonneg``
        For PSD shifts, compares ``sqrt(p_hat)`` after moving the
        denominator across: ``min || sqrt(p_hat) - Psi_L b - diag(sqrt(p_hat))
        Psi_(1..m) a ||`` with ``a, b >= 0``, restricted to the region
        ``A(lam_k) <= 1 - stab_margin`` where the comparison is well posed
        (convex; active-set NNLS, or a small QP when the margin binds).

    With ``m = 0`` both variants reduce to the corresponding MA fits.
    Frequencies where a fitted denominator drops below 1% of its peak are
    reported with PSD 0 (the rational model carries no usable level there).
    """
    p_hat = _check_psd_input(p_hat, basis.n)
    if m < 0 or order < 1:
        raise InputError("ARMA orders must satisfy m >= 0, order >= 1")
    if variant == "relaxed":
        _require_real_spectrum(basis, "relaxed ARMA fit")
        cols_num = 2 * order - 1
        cols_den = 2 * m + 1
        if max(cols_num, cols_den) > basis.n:
            raise DimensionMismatch("lifted polynomial degree exceeds basis size")
        psi_num, scale = _scaled_powers(basis, cols_num)
        psi_num = np.real(psi_num)
        psi_den = np.real(np.vander(basis.eigenvalues / scale, cols_den, increasing=True))
        design = np.hstack([p_hat[:, None] * psi_den[:, 1:], -psi_num])
        z, rank = _lstsq_with_rank_warning(design, -p_hat, "relaxed ARMA fit")
        d_scaled = np.concatenate(([1.0], z[: cols_den - 1]))
        c_scaled = z[cols_den - 1 :]
        den = psi_den @ d_scaled
        num = psi_num @ c_scaled
        resid = den * p_hat - num
        powers = scale ** np.arange(max(cols_den, cols_num))
        return ArmaRelaxedFit(
            denom_coeffs=d_scaled / powers[:cols_den],
            numer_coeffs=c_scaled / powers[:cols_num],
            psd=_floored_ratio(num, den),
            objective=float(resid @ resid),
            rank=int(rank),
        )
    if variant == "nonneg":
        lam = _require_psd_spectrum(basis, "nonnegative ARMA fit")
        if max(order, m + 1) > basis.n:
            raise DimensionMismatch("polynomial degree exceeds basis size")
        psi_full, scale = _scaled_powers(basis, max(order, m + 1))
        psi_full = np.real(psi_full)
        root = np.sqrt(p_hat)
        psi_b = psi_full[:, :order]
        psi_a = psi_full[:, 1 : m + 1]
        design = np.hstack([psi_b, root[:, None] * psi_a])
        sol, obj, kkt = _constrained_nnls(
            design, root, psi_a, stab_margin, "nonnegative ARMA fit"
        )
        b = sol[:order] / scale ** np.arange(order)
        a = sol[order:] / scale ** np.arange(1, m + 1)
        num = (psi_b @ sol[:order]) ** 2
        den = (1.0 - psi_a @ sol[order:]) ** 2
        return ArmaNonnegFit(
            model=ArmaModel(a, b),
            psd=_floored_ratio(num, den),
            objective=obj,
            kkt_residual=kkt,
        )
    raise InputError(f"unknown ARMA variant {variant!r}")
