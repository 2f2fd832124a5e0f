"""Tests for MA / AR / ARMA models and their fitting schemes."""
import numpy as np
import pytest

from graphspec import (
    ArmaModel,
    ArModel,
    FitConfig,
    GraphFilter,
    GraphSpec,
    GraphShift,
    MaModel,
    ar_fit,
    ar_psd,
    arma_fit_ls,
    arma_psd,
    decompose,
    filter_freq_response,
    generate_graph,
    generate_stationary,
    ma_fit_freq,
    ma_fit_nonneg,
    ma_fit_symmetric,
    ma_psd,
    model_covariance,
    periodogram,
    psd_from_covariance,
    sample_covariance,
)
from graphspec.errors import NotSymmetric, PoleOnGrid, RankDeficientWarning, ShiftNotPSD
from graphspec.processes import CovarianceMatrix


def symmetric_shift(n, seed, scale=1.0):
    rng = np.random.default_rng(seed)
    a = rng.standard_normal((n, n))
    m = (a + a.T) / 2.0
    return GraphShift(scale * m / np.abs(np.linalg.eigvalsh(m)).max())


def psd_shift(n, seed):
    # normalized Laplacian-style PSD shift with eigenvalues in [0, ~2]
    shift = generate_graph(GraphSpec("erdos_renyi", n, {"p": 0.4}), seed=seed,
                           kind="laplacian")
    lam_max = np.abs(np.linalg.eigvalsh(shift.matrix)).max()
    return GraphShift(2.0 * shift.matrix / lam_max, "laplacian")


def cycle_shift(n):
    return generate_graph(GraphSpec("directed_cycle", n))


class TestMaPsd:
    def test_unit_filter(self):
        basis = decompose(symmetric_shift(5, 0))
        assert np.allclose(ma_psd(basis, MaModel([1.0])), 1.0)

    def test_pure_shift(self):
        basis = decompose(symmetric_shift(5, 1))
        assert np.allclose(
            ma_psd(basis, MaModel([0.0, 1.0])), np.abs(basis.eigenvalues) ** 2
        )

    def test_matches_brute_force(self):
        shift = symmetric_shift(5, 2)
        basis = decompose(shift)
        beta = np.random.default_rng(2).standard_normal(3)
        s = shift.matrix
        hmat = beta[0] * np.eye(5) + beta[1] * s + beta[2] * (s @ s)
        expected = np.diag(basis.vectors.T @ (hmat @ hmat.T) @ basis.vectors)
        assert np.allclose(ma_psd(basis, MaModel(beta)), expected, atol=1e-10)

    def test_sign_ambiguity(self):
        basis = decompose(symmetric_shift(6, 3))
        beta = np.random.default_rng(3).standard_normal(3)
        assert np.array_equal(
            ma_psd(basis, MaModel(beta)), ma_psd(basis, MaModel(-beta))
        )


class TestMaFitFreq:
    def test_zero_residual_instance(self):
        basis = decompose(symmetric_shift(8, 4))
        beta_true = np.array([1.0, -0.6])
        p_hat = ma_psd(basis, MaModel(beta_true))
        fit = ma_fit_freq(basis, p_hat, 2, FitConfig(seed=4))
        assert fit.objective <= 1e-8
        assert np.allclose(fit.psd, p_hat, atol=1e-4)
        assert np.allclose(np.abs(fit.model.beta), np.abs(beta_true), atol=1e-3)

    def test_flat_input_order_one(self):
        basis = decompose(symmetric_shift(6, 5))
        fit = ma_fit_freq(basis, np.full(6, 4.0), 1)
        assert abs(fit.model.beta[0]) == pytest.approx(2.0, abs=1e-6)

    def test_beats_periodogram_on_noisy_data(self):
        shift = symmetric_shift(30, 6, scale=1.0)
        basis = decompose(shift)
        beta_true = np.array([1.0, 0.7, -0.3])
        p_true = ma_psd(basis, MaModel(beta_true))
        filt = GraphFilter(beta_true)
        fit_err, per_err = [], []
        for t in range(6):
            ens = generate_stationary(shift, filt, 100, seed=600 + t)
            p_hat = periodogram(basis, ens).values
            fit = ma_fit_freq(basis, p_hat, 3, FitConfig(seed=t, restarts=10))
            fit_err.append(np.sum((fit.psd - p_true) ** 2) / np.sum(p_true**2))
            per_err.append(np.sum((p_hat - p_true) ** 2) / np.sum(p_true**2))
        assert np.mean(fit_err) < np.mean(per_err)


class TestMaFitSymmetric:
    def test_identity_covariance(self):
        basis = decompose(symmetric_shift(7, 7))
        fit = ma_fit_symmetric(basis, CovarianceMatrix(np.eye(7)), 2)
        assert np.allclose(fit.gamma, [1.0, 0.0, 0.0], atol=1e-8)

    def test_exact_polynomial_covariance(self):
        shift = symmetric_shift(7, 8)
        basis = decompose(shift)
        s2 = shift.matrix @ shift.matrix
        fit = ma_fit_symmetric(basis, CovarianceMatrix(s2), 2)
        assert np.allclose(fit.gamma, [0.0, 0.0, 1.0], atol=1e-8)
        assert fit.residual <= 1e-8

    def test_monte_carlo_recovers_convolved_taps(self):
        # gamma of beta = [1, 0.5] is [beta0^2, 2 beta0 beta1, beta1^2]
        shift = symmetric_shift(10, 9)
        basis = decompose(shift)
        filt = GraphFilter([1.0, 0.5])
        ens = generate_stationary(shift, filt, 10_000, seed=9)
        fit = ma_fit_symmetric(basis, sample_covariance(ens), 2)
        assert np.allclose(fit.gamma, [1.0, 1.0, 0.25], rtol=0.05, atol=0.02)

    def test_relaxation_tightness_on_exact_data(self):
        shift = symmetric_shift(9, 10)
        basis = decompose(shift)
        beta = np.array([0.8, -0.5, 0.3])
        cov = CovarianceMatrix(
            model_covariance(basis, MaModel(beta)).matrix
        )
        fit = ma_fit_symmetric(basis, cov, 3)
        assert fit.residual <= 1e-8
        p_true = ma_psd(basis, MaModel(beta))
        assert np.linalg.norm(fit.psd - p_true) <= 1e-6 * np.linalg.norm(p_true)

    def test_rejects_complex_spectrum(self):
        basis = decompose(cycle_shift(6))
        with pytest.raises(NotSymmetric):
            ma_fit_symmetric(basis, CovarianceMatrix(np.eye(6)), 2)

    def test_repeated_eigs_min_norm_with_warning(self):
        # complete graph: two distinct eigenvalues, three powers dependent
        shift = generate_graph(GraphSpec("erdos_renyi", 5, {"p": 1.0}), seed=0)
        basis = decompose(shift)
        with pytest.warns(RankDeficientWarning):
            fit = ma_fit_symmetric(basis, CovarianceMatrix(np.eye(5)), 2)
        assert np.allclose(fit.psd, 1.0, atol=1e-8)


class TestMaFitNonneg:
    def test_zero_residual_feasible(self):
        basis = decompose(psd_shift(10, 11))
        beta_true = np.array([0.5, 0.8, 0.2])
        p_hat = ma_psd(basis, MaModel(beta_true))
        fit = ma_fit_nonneg(basis, p_hat, 3)
        assert fit.objective <= 1e-8
        assert np.allclose(fit.model.beta, beta_true, atol=1e-6)

    def test_zero_input(self):
        basis = decompose(psd_shift(8, 12))
        fit = ma_fit_nonneg(basis, np.zeros(8), 2)
        assert np.all(fit.model.beta == 0.0)

    def test_requires_psd_shift(self):
        basis = decompose(symmetric_shift(6, 13))  # indefinite
        with pytest.raises(ShiftNotPSD):
            ma_fit_nonneg(basis, np.ones(6), 2)

    def test_diffusion_recovery_small_r(self):
        # diffusion-style shift, nonnegative taps: the taps fitted from
        # R = 50 realizations recover the truth within 5% on average
        lap = generate_graph(
            GraphSpec("erdos_renyi", 34, {"p": 0.3}), seed=14, kind="laplacian"
        )
        lam_max = np.abs(np.linalg.eigvalsh(lap.matrix)).max()
        shift = GraphShift(np.eye(34) - lap.matrix / lam_max)
        basis = decompose(shift)
        beta_true = np.array([0.6, 0.9])
        filt = GraphFilter(beta_true)
        fitted = []
        for t in range(20):
            ens = generate_stationary(shift, filt, 50, seed=1400 + t)
            p_hat = periodogram(basis, ens).values
            fit = ma_fit_nonneg(basis, p_hat, 2)
            fitted.append(fit.model.beta)
            assert np.max(np.abs(fit.model.beta - beta_true) / beta_true) < 0.5
        mean_rel = np.abs(np.mean(fitted, axis=0) - beta_true) / beta_true
        assert np.max(mean_rel) < 0.05


class TestArPsd:
    def test_zero_rate(self):
        basis = decompose(symmetric_shift(6, 15))
        assert np.allclose(ar_psd(basis, ArModel(1.5, [0.0])), 1.5**2)

    def test_order_two_with_zero_second_pole(self):
        basis = decompose(symmetric_shift(6, 16))
        p1 = ar_psd(basis, ArModel(1.0, [0.4]))
        p2 = ar_psd(basis, ArModel(1.0, [0.4, 0.0]))
        assert np.allclose(p1, p2)

    def test_cycle_matches_explicit_inverse(self):
        # C = a0^2 (I - a S)^-1 (I - a S)^-H formed explicitly on the 4-cycle
        shift = cycle_shift(4)
        basis = decompose(shift)
        alpha0, alpha = 1.3, 0.3
        inv = np.linalg.inv(np.eye(4) - alpha * shift.matrix)
        c = alpha0**2 * inv @ inv.conj().T
        expected = np.real(np.diag(basis.vectors.conj().T @ c @ basis.vectors))
        assert np.allclose(ar_psd(basis, ArModel(alpha0, [alpha])), expected, atol=1e-10)

    def test_pole_on_grid(self):
        basis = decompose(GraphShift(np.diag([1.0, 2.0])))
        with pytest.raises(PoleOnGrid):
            ar_psd(basis, ArModel(1.0, [0.5]))


class TestArFit:
    def test_exact_recovery_order_one(self):
        basis = decompose(symmetric_shift(10, 17))
        p_hat = ar_psd(basis, ArModel(1.0, [0.2]))
        fit = ar_fit(basis, p_hat, 1)
        assert fit.model.alphas[0] == pytest.approx(0.2, abs=1e-4)
        assert fit.model.alpha0 == pytest.approx(1.0, abs=1e-4)

    def test_flat_input(self):
        basis = decompose(symmetric_shift(8, 18))
        fit = ar_fit(basis, np.full(8, 9.0), 1)
        assert fit.model.alphas[0] == pytest.approx(0.0, abs=1e-6)
        assert fit.model.alpha0 == pytest.approx(3.0, abs=1e-6)

    def test_order_two_zero_residual(self):
        basis = decompose(symmetric_shift(10, 19))
        p_hat = ar_psd(basis, ArModel(0.8, [0.3, -0.2]))
        fit = ar_fit(basis, p_hat, 2, FitConfig(seed=19))
        assert fit.objective <= 1e-6 * np.sum(p_hat**2)

    def test_beats_periodogram_small_r(self):
        shift = symmetric_shift(25, 20)
        basis = decompose(shift)
        model = ArModel(1.0, [0.35])
        p_true = ar_psd(basis, model)
        fit_err, per_err = [], []
        for t in range(10):
            ens = generate_from_psd_basis(basis, p_true, 10, seed=2000 + t)
            p_hat = periodogram(basis, ens).values
            fit = ar_fit(basis, p_hat, 1)
            fit_err.append(np.sum((fit.psd - p_true) ** 2))
            per_err.append(np.sum((p_hat - p_true) ** 2))
        assert np.mean(fit_err) < np.mean(per_err)


def generate_from_psd_basis(basis, p, r, seed):
    from graphspec import generate_from_psd

    return generate_from_psd(basis, p, r, seed=seed)


class TestArmaPsd:
    def test_pure_gain(self):
        basis = decompose(symmetric_shift(5, 21))
        assert np.allclose(arma_psd(basis, ArmaModel([], [1.0])), 1.0)

    def test_matches_ar_one(self):
        basis = decompose(symmetric_shift(6, 22))
        alpha0, alpha = 1.4, 0.25
        assert np.allclose(
            arma_psd(basis, ArmaModel([alpha], [alpha0])),
            ar_psd(basis, ArModel(alpha0, [alpha])),
        )

    def test_matches_explicit_covariance(self):
        # C = (I-A)^-1 B B^H (I-A)^-H formed explicitly
        shift = symmetric_shift(6, 23)
        basis = decompose(shift)
        a, b = np.array([0.3, 0.1]), np.array([1.0, 0.5])
        s = shift.matrix
        amat = a[0] * s + a[1] * (s @ s)
        bmat = b[0] * np.eye(6) + b[1] * s
        inv = np.linalg.inv(np.eye(6) - amat)
        c = inv @ bmat @ bmat.T @ inv.T
        expected = np.diag(basis.vectors.T @ c @ basis.vectors)
        assert np.allclose(arma_psd(basis, ArmaModel(a, b)), expected, atol=1e-8)


class TestArmaFit:
    def test_m_zero_relaxed_matches_symmetric_ma(self):
        shift = symmetric_shift(9, 24)
        basis = decompose(shift)
        ens = generate_stationary(shift, GraphFilter([1.0, 0.4]), 50, seed=24)
        p_hat = periodogram(basis, ens).values
        arma = arma_fit_ls(basis, p_hat, 0, 2, variant="relaxed")
        ma = ma_fit_symmetric(basis, sample_covariance(ens), 2)
        assert np.allclose(arma.psd, ma.psd, atol=1e-8)

    def test_m_zero_nonneg_matches_nonneg_ma(self):
        basis = decompose(psd_shift(10, 25))
        rng = np.random.default_rng(25)
        p_hat = np.abs(rng.standard_normal(10)) + 0.1
        arma = arma_fit_ls(basis, p_hat, 0, 2, variant="nonneg")
        ma = ma_fit_nonneg(basis, p_hat, 2)
        assert np.allclose(arma.model.b, ma.model.beta, atol=1e-10)
        assert np.allclose(arma.psd, ma.psd, atol=1e-10)

    def test_exact_arma_relaxed_zero_residual(self):
        basis = decompose(symmetric_shift(10, 26))
        model = ArmaModel([0.3], [1.0, 0.4])
        p_hat = arma_psd(basis, model)
        fit = arma_fit_ls(basis, p_hat, 1, 2, variant="relaxed")
        assert fit.objective <= 1e-6
        assert np.linalg.norm(fit.psd - p_hat) <= 1e-5 * np.linalg.norm(p_hat)

    def test_exact_arma_nonneg_recovery(self):
        basis = decompose(psd_shift(12, 27))
        model = ArmaModel([0.2], [0.7, 0.3])
        p_hat = arma_psd(basis, model)
        fit = arma_fit_ls(basis, p_hat, 1, 2, variant="nonneg")
        assert fit.objective <= 1e-8
        assert np.allclose(fit.model.a, model.a, atol=1e-5)
        assert np.allclose(fit.model.b, model.b, atol=1e-5)

    def test_relaxed_requires_symmetric(self):
        basis = decompose(cycle_shift(8))
        with pytest.raises(NotSymmetric):
            arma_fit_ls(basis, np.ones(8), 1, 2, variant="relaxed")

    def test_nonneg_requires_psd(self):
        basis = decompose(symmetric_shift(8, 28))
        with pytest.raises(ShiftNotPSD):
            arma_fit_ls(basis, np.ones(8), 1, 2, variant="nonneg")


class TestModelCovariance:
    def test_ma_identity(self):
        basis = decompose(symmetric_shift(5, 29))
        assert np.allclose(
            model_covariance(basis, MaModel([1.0])).matrix, np.eye(5), atol=1e-10
        )

    def test_ar_zero_rates(self):
        basis = decompose(symmetric_shift(5, 30))
        c = model_covariance(basis, ArModel(2.0, [0.0])).matrix
        assert np.allclose(c, 4.0 * np.eye(5), atol=1e-10)

    @pytest.mark.parametrize(
        "model",
        [
            MaModel([1.0, 0.5, -0.2]),
            ArModel(1.2, [0.3, -0.15]),
            ArmaModel([0.25], [1.0, 0.4]),
        ],
    )
    def test_psd_consistency(self, model):
        basis = decompose(symmetric_shift(8, 31))
        cov = model_covariance(basis, model)
        from graphspec import model_psd

        p_direct = model_psd(basis, model)
        p_via_cov = psd_from_covariance(basis, cov).values
        assert np.linalg.norm(p_direct - p_via_cov) <= 1e-8 * np.linalg.norm(p_direct)

    def test_ar_one_precision_is_two_hop_local(self):
        # inverse covariance support of an AR(1) lies in 2-hop neighborhoods
        shift = generate_graph(GraphSpec("path", 12))
        basis = decompose(shift)
        model = ArModel(1.0, [0.4 / 2.0])
        theta = np.linalg.inv(model_covariance(basis, model).matrix)
        from graphspec import hop_distances

        dist = hop_distances(shift).dist
        assert np.max(np.abs(theta[dist > 2])) <= 1e-8

    def test_sequential_single_poles_compose(self):
        # applying M single-pole filters in sequence gives the order-M model
        shift = symmetric_shift(7, 32)
        basis = decompose(shift)
        alphas = [0.3, -0.2, 0.1]
        acc = np.eye(7)
        for a in alphas:
            acc = np.linalg.inv(np.eye(7) - a * shift.matrix) @ acc
        c_seq = 1.44 * acc @ acc.T
        c_model = model_covariance(basis, ArModel(1.2, alphas)).matrix
        assert np.linalg.norm(c_seq - c_model) <= 1e-8 * np.linalg.norm(c_seq)
