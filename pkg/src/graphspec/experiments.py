"""Benchmark experiment drivers and NMSE reporting.

Each scenario draws a graph and a generating filter/model, runs Monte
Carlo trials of one or more estimators, and reports the empirical
normalized MSE ``||p_hat - p||^2 / ||p||^2`` next to the closed-form
prediction where one exists.  All randomness flows from the single config
seed through a fixed ``SeedSequence`` splitting scheme: graph, generator,
and trial chunks get independent children, and trial results are reduced
in chunk order, so reports are byte-identical for a fixed config no
matter how many worker threads run (``GRAPHSPEC_THREADS``).
"""
from __future__ import annotations

import json
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field

import numpy as np

from .errors import InvalidSpec, PoleOnGrid
from .graphs import GraphSpec, generate_graph, sbm_blocks
from .nonparametric import (
    WindowBank,
    bank_from_blocks,
    design_fir_bandpass,
    design_ideal_bandpass,
    design_windows,
    predict_filterbank_moments,
    predict_periodogram_moments,
    predict_window_moments,
)
from .parametric import ArmaModel, FitConfig, arma_fit_ls, arma_psd, ma_fit_freq, ma_fit_symmetric
from .processes import CovarianceMatrix, white_noise
from .spectral import (
    GraphFilter,
    SpectralBasis,
    apply_filter_vertex,
    decompose,
    filter_freq_response,
    gft,
)

SCENARIOS = (
    "tc1_periodogram",
    "tc1_windows",
    "tc1_filterbank",
    "tc2_ma",
    "tc2_arma",
)

CHUNK = 256


@dataclass(frozen=True)
class ExperimentConfig:
    """One experiment run: scenario, graph, generator, trials, seed."""

    scenario: str
    graph: GraphSpec
    trials: int = 100
    seed: int = 0
    shift_kind: str = "adjacency"
    noise_kind: str = "gaussian"
    r_values: tuple = (10, 100, 1000)
    filter_spec: dict = field(default_factory=dict)
    options: dict = field(default_factory=dict)
    out: str | None = None


@dataclass(frozen=True, eq=False)
class NmseReport:
    """Per-(axis value, method) empirical and theoretical NMSE curves."""

    axis_name: str
    axis: tuple
    methods: tuple
    empirical: dict
    theoretical: dict
    meta: dict = field(default_factory=dict)

    def to_csv(self):
        lines = [f"{self.axis_name},method,empirical_nmse,theoretical_nmse"]
        for i, value in enumerate(self.axis):
            for method in self.methods:
                emp = repr(float(self.empirical[method][i]))
                theo = self.theoretical.get(method)
                theo_s = repr(float(theo[i])) if theo is not None else ""
                lines.append(f"{value},{method},{emp},{theo_s}")
        return "\n".join(lines) + "\n"

    def save(self, base):
        with open(f"{base}.csv", "w") as fh:
            fh.write(self.to_csv())
        with open(f"{base}.json", "w") as fh:
            json.dump(self.meta, fh, indent=2, sort_keys=True, default=str)
            fh.write("\n")


def _max_workers():
    raw = os.environ.get("GRAPHSPEC_THREADS", "1")
    try:
        return max(1, int(raw))
    except ValueError:
        return 1


def _run_trials(worker, trials, seed_seq):
    """Run ``worker(rng, size) -> (size, k) array`` over fixed trial chunks.

    Results are concatenated in chunk order regardless of scheduling.
    """
    chunks = [min(CHUNK, trials - i) for i in range(0, trials, CHUNK)]
    children = seed_seq.spawn(len(chunks))
    results = [None] * len(chunks)
    workers = _max_workers()
    if workers <= 1 or len(chunks) == 1:
        for i, size in enumerate(chunks):
            results[i] = worker(np.random.default_rng(children[i]), size)
    else:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            futures = {
                pool.submit(worker, np.random.default_rng(children[i]), size): i
                for i, size in enumerate(chunks)
            }
            for fut in futures:
                results[futures[fut]] = fut.result()
    return np.concatenate(results, axis=0)


def _generator_filter(cfg, rng):
    spec = dict(cfg.filter_spec)
    if "coeffs" in spec:
        return GraphFilter(np.asarray(spec["coeffs"], dtype=float))
    degree = int(spec.get("degree", 3))
    return GraphFilter(rng.standard_normal(degree + 1))


def _setup(cfg):
    root = np.random.SeedSequence(cfg.seed)
    graph_ss, gen_ss, trial_ss = root.spawn(3)
    shift = generate_graph(cfg.graph, seed=graph_ss, kind=cfg.shift_kind)
    basis = decompose(shift)
    gen_rng = np.random.default_rng(gen_ss)
    return shift, basis, gen_rng, trial_ss


def _nmse_rows(values, p_norm2, p, axis=0):
    return np.sum((values - p) ** 2, axis=axis) / p_norm2


# ---------------------------------------------------------------------------
# scenarios


def _tc1_periodogram(cfg):
    shift, basis, gen_rng, trial_ss = _setup(cfg)
    filt = _generator_filter(cfg, gen_rng)
    p = np.abs(filter_freq_response(basis, filt)) ** 2
    p_norm2 = float(np.sum(p**2))
    empirical = []
    for i, r in enumerate(cfg.r_values):
        def worker(rng, size, r=r):
            w = white_noise(shift.n, size * r, cfg.noise_kind, rng)
            x = apply_filter_vertex(shift, filt, w)
            sq = np.abs(gft(basis, x)) ** 2
            est = sq.reshape(shift.n, size, r).mean(axis=2)
            return _nmse_rows(est, p_norm2, p[:, None])[:, None]

        nmse = _run_trials(worker, cfg.trials, trial_ss.spawn(1)[0])
        empirical.append(float(nmse.mean()))
    theory = tuple(
        predict_periodogram_moments(p, r).mse / p_norm2 for r in cfg.r_values
    )
    return NmseReport(
        axis_name="r",
        axis=tuple(cfg.r_values),
        methods=("periodogram",),
        empirical={"periodogram": tuple(empirical)},
        theoretical={"periodogram": theory},
        meta={
            "config": asdict(cfg),
            "filter": [float(c) for c in filt.coeffs],
            "psd_norm": float(np.linalg.norm(p)),
        },
    )


def _window_banks(cfg, shift, gen_rng, m):
    opts = cfg.options
    if "blocks" in opts:
        local = bank_from_blocks(shift.n, opts["blocks"])
    elif cfg.graph.family == "stochastic_block":
        sizes = cfg.graph.params.get("sizes")
        if sizes is None:
            c = int(cfg.graph.params.get("communities", m))
            sizes = [cfg.graph.n // c] * c
        local = bank_from_blocks(shift.n, sbm_blocks(sizes))
    else:
        local = design_windows(shift, m, strategy="local")
    sizes = [len(b) for b in local.labels]
    random_sizes = sizes if opts.get("match_sizes", True) and len(sizes) == m else None
    rand = design_windows(
        shift, m, strategy="random", seed=gen_rng.integers(2**63), sizes=random_sizes
    )
    return local, rand


def _tc1_windows(cfg):
    shift, basis, gen_rng, trial_ss = _setup(cfg)
    spec = dict(cfg.filter_spec)
    spec.setdefault("degree", 1)  # two taps: localized process
    filt = GraphFilter(
        np.asarray(spec["coeffs"], dtype=float)
        if "coeffs" in spec
        else gen_rng.standard_normal(int(spec["degree"]) + 1)
    )
    p = np.abs(filter_freq_response(basis, filt)) ** 2
    p_norm2 = float(np.sum(p**2))
    m_values = tuple(cfg.options.get("m_values", (10,)))
    methods = tuple(cfg.options.get("strategies", ("local", "random", "periodogram")))

    empirical = {meth: [] for meth in methods}
    theoretical = {meth: [] for meth in methods}
    single = WindowBank(np.ones((1, shift.n)))
    for m in m_values:
        local, rand = _window_banks(cfg, shift, gen_rng, m)
        banks = {"local": local, "random": rand, "periodogram": single}

        def worker(rng, size, banks=banks):
            w = white_noise(shift.n, size, cfg.noise_kind, rng)
            x = apply_filter_vertex(shift, filt, w)
            out = np.empty((size, len(methods)))
            for j, meth in enumerate(methods):
                bank = banks[meth]
                acc = np.zeros((shift.n, size))
                for wv in bank.windows:
                    acc += np.abs(gft(basis, wv[:, None] * x)) ** 2
                est = acc / bank.m
                out[:, j] = _nmse_rows(est, p_norm2, p[:, None])
            return out

        nmse = _run_trials(worker, cfg.trials, trial_ss.spawn(1)[0])
        for j, meth in enumerate(methods):
            empirical[meth].append(float(nmse[:, j].mean()))
            moments = predict_window_moments(basis, banks[meth], p)
            theoretical[meth].append(moments.mse / p_norm2)
    return NmseReport(
        axis_name="m",
        axis=m_values,
        methods=methods,
        empirical={k: tuple(v) for k, v in empirical.items()},
        theoretical={k: tuple(v) for k, v in theoretical.items()},
        meta={"config": asdict(cfg), "filter": [float(c) for c in filt.coeffs]},
    )


def parse_bank_design(tag):
    """Parse a ``ideal:B`` / ``fir:L`` design tag."""
    try:
        name, param = tag.split(":")
        param = int(param)
    except ValueError as exc:
        raise InvalidSpec(f"bad filter bank design {tag!r}") from exc
    if name not in ("ideal", "fir") or param < 1:
        raise InvalidSpec(f"bad filter bank design {tag!r}")
    return name, param


def _tc1_filterbank(cfg):
    shift, basis, gen_rng, trial_ss = _setup(cfg)
    degrees = tuple(cfg.options.get("degrees", (2, 4, 6)))
    designs = tuple(cfg.options.get("designs", ("ideal:3", "fir:5")))
    banks = {}
    for tag in designs:
        name, param = parse_bank_design(tag)
        banks[tag] = (
            design_ideal_bandpass(basis, param)
            if name == "ideal"
            else design_fir_bandpass(basis, param)
        )
    methods = designs + ("periodogram",)
    empirical = {meth: [] for meth in methods}
    theoretical = {meth: [] for meth in methods}
    for degree in degrees:
        filt = GraphFilter(gen_rng.standard_normal(degree + 1))
        p = np.abs(filter_freq_response(basis, filt)) ** 2
        p_norm2 = float(np.sum(p**2))
        gains = {tag: np.abs(banks[tag].responses) ** 2 for tag in designs}

        def worker(rng, size, gains=gains, p=p, p_norm2=p_norm2, filt=filt):
            w = white_noise(shift.n, size, cfg.noise_kind, rng)
            x = apply_filter_vertex(shift, filt, w)
            sq = np.abs(gft(basis, x)) ** 2
            out = np.empty((size, len(methods)))
            for j, tag in enumerate(designs):
                out[:, j] = _nmse_rows(gains[tag] @ sq, p_norm2, p[:, None])
            out[:, len(designs)] = _nmse_rows(sq, p_norm2, p[:, None])
            return out

        nmse = _run_trials(worker, cfg.trials, trial_ss.spawn(1)[0])
        for j, meth in enumerate(methods):
            empirical[meth].append(float(nmse[:, j].mean()))
        for tag in designs:
            moments = predict_filterbank_moments(
                banks[tag], p, basis=None if basis.is_real else basis
            )
            mse = float(np.sum(moments.bias**2) + np.sum(moments.variance))
            theoretical[tag].append(mse / p_norm2)
        theoretical["periodogram"].append(2.0)
    return NmseReport(
        axis_name="degree",
        axis=degrees,
        methods=methods,
        empirical={k: tuple(v) for k, v in empirical.items()},
        theoretical={k: tuple(v) for k, v in theoretical.items()},
        meta={"config": asdict(cfg)},
    )


def _tc2_ma(cfg):
    shift, basis, gen_rng, trial_ss = _setup(cfg)
    degrees = tuple(cfg.options.get("degrees", (2, 3, 4)))
    r = int(cfg.r_values[0])
    mismatch = int(cfg.options.get("mismatch", 0))
    fit_cfg = FitConfig(seed=cfg.seed, restarts=int(cfg.options.get("restarts", 10)))
    methods = ("periodogram", "ma-freq", "ma-symmetric")
    empirical = {meth: [] for meth in methods}
    for degree in degrees:
        taps = degree  # number of coefficients of the generating filter
        filt = GraphFilter(gen_rng.standard_normal(taps))
        p = np.abs(filter_freq_response(basis, filt)) ** 2
        p_norm2 = float(np.sum(p**2))
        order = taps + mismatch

        def worker(rng, size, filt=filt, p=p, p_norm2=p_norm2, order=order):
            out = np.empty((size, len(methods)))
            for t in range(size):
                w = white_noise(shift.n, r, cfg.noise_kind, rng)
                x = apply_filter_vertex(shift, filt, w)
                p_hat = np.mean(np.abs(gft(basis, x)) ** 2, axis=1)
                out[t, 0] = np.sum((p_hat - p) ** 2) / p_norm2
                fit = ma_fit_freq(basis, p_hat, order, fit_cfg)
                out[t, 1] = np.sum((fit.psd - p) ** 2) / p_norm2
                cov = CovarianceMatrix(x @ x.T / r)
                sym = ma_fit_symmetric(basis, cov, order)
                out[t, 2] = np.sum((sym.psd - p) ** 2) / p_norm2
            return out

        nmse = _run_trials(worker, cfg.trials, trial_ss.spawn(1)[0])
        for j, meth in enumerate(methods):
            empirical[meth].append(float(nmse[:, j].mean()))
    theoretical = {
        "periodogram": tuple(2.0 / r for _ in degrees),
        "ma-freq": None,
        "ma-symmetric": None,
    }
    return NmseReport(
        axis_name="degree",
        axis=degrees,
        methods=methods,
        empirical={k: tuple(v) for k, v in empirical.items()},
        theoretical=theoretical,
        meta={"config": asdict(cfg), "r": r, "mismatch": mismatch},
    )


def draw_stable_arma(basis, order, rng, margin=0.7, max_tries=1000, eps_pole=1e-8):
    """Uniform-[0,1] ARMA(order, order) coefficients, redrawn until the
    denominator polynomial stays below ``margin`` on the eigenvalue grid.

    The margin keeps the truth inside the validity region of both
    least-squares fit variants (denominator bounded away from zero); with
    ``margin >= 1`` only the bare pole check applies.
    """
    lam = np.real(basis.eigenvalues)
    powers = np.vander(lam, order + 1, increasing=True)[:, 1:]
    for _ in range(max_tries):
        model = ArmaModel(rng.uniform(0, 1, order), rng.uniform(0, 1, order))
        if margin < 1 and np.max(powers @ model.a) > margin:
            continue
        try:
            arma_psd(basis, model, eps_pole)
            return model
        except PoleOnGrid:
            continue
    raise PoleOnGrid("could not draw a pole-free ARMA model")


def _tc2_arma(cfg):
    shift, basis, gen_rng, trial_ss = _setup(cfg)
    if cfg.options.get("normalize_shift", True):
        # unit spectral radius keeps uniform-[0,1] coefficients in the
        # stable regime the LS fit variants assume
        lam_max = float(np.max(np.abs(basis.eigenvalues)))
        if lam_max > 0:
            basis = SpectralBasis(
                basis.vectors, basis.eigenvalues / lam_max, basis.distinct_eigs
            )
    order = int(cfg.options.get("arma_order", 2))
    gen_margin = float(cfg.options.get("gen_margin", 0.7))
    stab_margin = float(cfg.options.get("stab_margin", 0.25))
    model = draw_stable_arma(basis, order, gen_rng, margin=gen_margin)
    p = arma_psd(basis, model)
    p_norm2 = float(np.sum(p**2))
    root_p = np.sqrt(p)
    methods = ("periodogram", "arma-relaxed", "arma-nonneg")
    empirical = {meth: [] for meth in methods}
    v = basis.vectors
    for r in cfg.r_values:
        def worker(rng, size, r=int(r)):
            out = np.empty((size, len(methods)))
            for t in range(size):
                w = white_noise(shift.n, r, cfg.noise_kind, rng)
                x = v @ (root_p[:, None] * (v.conj().T @ w))
                p_hat = np.mean(np.abs(v.conj().T @ x) ** 2, axis=1)
                out[t, 0] = np.sum((p_hat - p) ** 2) / p_norm2
                rel = arma_fit_ls(basis, p_hat, order, order, variant="relaxed")
                out[t, 1] = np.sum((rel.psd - p) ** 2) / p_norm2
                non = arma_fit_ls(
                    basis, p_hat, order, order, variant="nonneg",
                    stab_margin=stab_margin,
                )
                out[t, 2] = np.sum((non.psd - p) ** 2) / p_norm2
            return out

        nmse = _run_trials(worker, cfg.trials, trial_ss.spawn(1)[0])
        for j, meth in enumerate(methods):
            empirical[meth].append(float(nmse[:, j].mean()))
    return NmseReport(
        axis_name="r",
        axis=tuple(cfg.r_values),
        methods=methods,
        empirical={k: tuple(v) for k, v in empirical.items()},
        theoretical={
            "periodogram": tuple(2.0 / r for r in cfg.r_values),
            "arma-relaxed": None,
            "arma-nonneg": None,
        },
        meta={
            "config": asdict(cfg),
            "model_a": [float(x) for x in model.a],
            "model_b": [float(x) for x in model.b],
        },
    )


_DRIVERS = {
    "tc1_periodogram": _tc1_periodogram,
    "tc1_windows": _tc1_windows,
    "tc1_filterbank": _tc1_filterbank,
    "tc2_ma": _tc2_ma,
    "tc2_arma": _tc2_arma,
}


def run_experiment(cfg):
    """Run one scenario and return (optionally also save) its NMSE report."""
    if cfg.scenario not in _DRIVERS:
        raise InvalidSpec(f"unknown scenario {cfg.scenario!r}")
    if cfg.trials < 1:
        raise InvalidSpec("trial count must be >= 1")
    report = _DRIVERS[cfg.scenario](cfg)
    if cfg.out:
        report.save(cfg.out)
    return report
