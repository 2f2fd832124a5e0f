"""Command-line interface.

Subcommands: gen-graph, gen-process, estimate, fit, experiment, denoise,
diagnose.  Long-form flags only.  Exit codes: 0 success, 2 validation
error, 3 numerical failure.
"""
from __future__ import annotations

import argparse
import sys

import numpy as np

from . import fileio
from .denoise import lowpass_denoise, wiener_denoise
from .errors import GraphspecError, InputError, InvalidSpec, NumericalError
from .experiments import ExperimentConfig, parse_bank_design, run_experiment
from .graphs import GraphSpec, generate_graph
from .nonparametric import (
    design_fir_bandpass,
    design_ideal_bandpass,
    design_windows,
    filterbank_estimate,
    periodogram,
    windowed_avg_periodogram,
)
from .parametric import FitConfig, arma_fit_ls, ar_fit, ma_fit_freq, ma_fit_nonneg, ma_fit_symmetric
from .processes import (
    CovarianceMatrix,
    covariance_from_psd,
    diffusion_filter,
    generate_stationary,
    locality_support_check,
    sample_covariance,
    shift_invariance_residual,
    stationarity_metric,
)
from .spectral import GraphFilter, decompose

FAMILY_ALIASES = {
    "er": "erdos_renyi",
    "erdos_renyi": "erdos_renyi",
    "sbm": "stochastic_block",
    "stochastic_block": "stochastic_block",
    "sw": "small_world",
    "small_world": "small_world",
    "cycle": "directed_cycle",
    "directed_cycle": "directed_cycle",
    "path": "path",
}


def _ints(text):
    return tuple(int(tok) for tok in text.split(",") if tok != "")


def _floats(text):
    return tuple(float(tok) for tok in text.split(",") if tok != "")


def _graph_spec(args):
    family = FAMILY_ALIASES.get(args.family)
    if family is None:
        raise InvalidSpec(f"unknown graph family {args.family!r}")
    params = {}
    if args.p is not None:
        params["p"] = args.p
    if args.q is not None:
        params["q"] = args.q
    if args.communities is not None:
        params["communities"] = args.communities
    if args.sizes is not None:
        params["sizes"] = list(_ints(args.sizes))
    if args.k is not None:
        params["k"] = args.k
    return GraphSpec(family, args.n, params)


def _add_graph_flags(sub, require_n=True, family_default="er"):
    sub.add_argument("--family", default=family_default)
    sub.add_argument("--n", type=int, required=require_n)
    sub.add_argument("--p", type=float)
    sub.add_argument("--q", type=float)
    sub.add_argument("--communities", type=int)
    sub.add_argument("--sizes")
    sub.add_argument("--k", type=int)


def _load_basis(args):
    shift = fileio.load_shift(args.graph, args.shift)
    return shift, decompose(shift)


def _pick_column(data, column):
    if not 0 <= column < data.shape[1]:
        raise InputError(f"--column {column} outside [0, {data.shape[1]})")
    return data[:, column]


# ---------------------------------------------------------------------------
# subcommands


def _cmd_gen_graph(args):
    spec = _graph_spec(args)
    shift = generate_graph(spec, seed=args.seed)
    fileio.save_edge_list(shift, args.out)
    print(f"wrote {args.out}: {spec.family} graph with {spec.n} nodes")
    return 0


def _cmd_gen_process(args):
    shift, _ = _load_basis(args)
    if (args.filter is None) == (args.diffusion is None):
        raise InvalidSpec("give exactly one of --filter or --diffusion")
    if args.filter is not None:
        filt = GraphFilter(np.asarray(_floats(args.filter)))
    else:
        filt = diffusion_filter(shift, np.asarray(_floats(args.diffusion)))
    ens = generate_stationary(shift, filt, args.r, args.noise, args.seed)
    fileio.save_ensemble(ens, args.out, meta={"seed": args.seed, "graph": args.graph})
    print(f"wrote {args.out}: {ens.n} x {ens.r} ensemble")
    return 0


def _cmd_estimate(args):
    shift, basis = _load_basis(args)
    ens, _ = fileio.load_ensemble(args.signals)
    if ens.n != shift.n:
        raise InputError("signal length does not match the graph")
    if args.method == "periodogram":
        est = periodogram(basis, ens)
    elif args.method == "windowed":
        try:
            strategy, m = (args.windows or "local:10").split(":")
            m = int(m)
        except ValueError as exc:
            raise InvalidSpec(f"--windows must look like local:10, got {args.windows!r}") from exc
        bank = design_windows(shift, m, strategy=strategy, seed=args.seed)
        est = windowed_avg_periodogram(basis, bank, _pick_column(ens.data, args.column))
    elif args.method == "filterbank":
        name, param = parse_bank_design(args.fb or "ideal:3")
        fb = (
            design_ideal_bandpass(basis, param)
            if name == "ideal"
            else design_fir_bandpass(basis, param)
        )
        est = filterbank_estimate(basis, fb, _pick_column(ens.data, args.column))
    else:
        raise InvalidSpec(f"unknown method {args.method!r}")
    fileio.save_psd(est, args.out)
    print(f"wrote {args.out}: {args.method} PSD estimate")
    return 0


def _fit_orders(args):
    orders = _ints(args.order)
    if args.model == "arma":
        if len(orders) != 2:
            raise InvalidSpec("--order L,M required for ARMA")
        return orders
    if len(orders) != 1:
        raise InvalidSpec("--order takes a single value here")
    return orders


def _cmd_fit(args):
    _, basis = _load_basis(args)
    if (args.psd is None) == (args.signals is None):
        raise InvalidSpec("give exactly one of --psd or --signals")
    if args.psd is not None:
        p_hat = fileio.load_psd(args.psd).values
        cov = covariance_from_psd(basis, p_hat)
    else:
        ens, _ = fileio.load_ensemble(args.signals)
        est = periodogram(basis, ens)
        p_hat = est.values
        cov = sample_covariance(ens)
    if p_hat.shape[0] != basis.n:
        raise InputError("PSD length does not match the graph")
    cfg = FitConfig(restarts=args.restarts, seed=args.seed)

    if args.model == "ma":
        (order,) = _fit_orders(args)
        if args.variant == "freq":
            fit = ma_fit_freq(basis, p_hat, order, cfg)
            doc = {
                "model": "ma",
                "variant": "freq",
                "coefficients": {"beta": list(fit.model.beta)},
                "objective": fit.objective,
                "diagnostics": {
                    "best_restart": fit.best_restart,
                    "n_restarts": fit.n_restarts,
                },
            }
        elif args.variant == "symmetric":
            fit = ma_fit_symmetric(basis, cov, order)
            doc = {
                "model": "ma",
                "variant": "symmetric",
                "coefficients": {"gamma": list(fit.gamma)},
                "objective": fit.residual**2,
                "diagnostics": {"rank": fit.rank, "residual": fit.residual},
            }
        elif args.variant == "nonneg":
            fit = ma_fit_nonneg(basis, p_hat, order)
            doc = {
                "model": "ma",
                "variant": "nonneg",
                "coefficients": {"beta": list(fit.model.beta)},
                "objective": fit.objective,
                "diagnostics": {"kkt_residual": fit.kkt_residual},
            }
        else:
            raise InvalidSpec(f"unknown MA variant {args.variant!r}")
    elif args.model == "ar":
        (order,) = _fit_orders(args)
        fit = ar_fit(basis, p_hat, order, cfg)
        doc = {
            "model": "ar",
            "variant": "freq",
            "coefficients": {
                "alpha0": fit.model.alpha0,
                "alphas": list(fit.model.alphas),
            },
            "objective": fit.objective,
            "diagnostics": {},
        }
    elif args.model == "arma":
        order_l, order_m = _fit_orders(args)
        if args.variant == "symmetric":
            fit = arma_fit_ls(basis, p_hat, order_m, order_l, variant="relaxed")
            doc = {
                "model": "arma",
                "variant": "relaxed",
                "coefficients": {
                    "denominator": list(fit.denom_coeffs),
                    "numerator": list(fit.numer_coeffs),
                },
                "objective": fit.objective,
                "diagnostics": {"rank": fit.rank},
            }
        elif args.variant == "nonneg":
            fit = arma_fit_ls(basis, p_hat, order_m, order_l, variant="nonneg")
            doc = {
                "model": "arma",
                "variant": "nonneg",
                "coefficients": {"a": list(fit.model.a), "b": list(fit.model.b)},
                "objective": fit.objective,
                "diagnostics": {"kkt_residual": fit.kkt_residual},
            }
        else:
            raise InvalidSpec("ARMA supports --variant symmetric or nonneg")
    else:
        raise InvalidSpec(f"unknown model {args.model!r}")
    doc["psd"] = [float(v) for v in fit.psd]
    fileio.save_model(doc, args.out)
    print(f"wrote {args.out}: {doc['model']} ({doc['variant']}) fit")
    return 0


_SCENARIO_GRAPHS = {
    "tc1_periodogram": ("er", 100, {"p": 0.05}, "adjacency"),
    "tc1_windows": ("sbm", 100, {"communities": 10, "p": 0.9, "q": 0.1}, "laplacian"),
    "tc1_filterbank": ("er", 100, {"p": 0.05}, "adjacency"),
    "tc2_ma": ("er", 100, {"p": 0.2}, "laplacian"),
    "tc2_arma": ("er", 100, {"p": 0.2}, "laplacian"),
}


def _cmd_experiment(args):
    if args.scenario not in _SCENARIO_GRAPHS:
        raise InvalidSpec(f"unknown scenario {args.scenario!r}")
    fam, n, params, shift_kind = _SCENARIO_GRAPHS[args.scenario]
    if args.n is not None:
        n = args.n
    family = FAMILY_ALIASES[args.family] if args.family else FAMILY_ALIASES[fam]
    params = dict(params)
    for key in ("p", "q", "communities", "k"):
        val = getattr(args, key)
        if val is not None:
            params[key] = val
    if args.sizes is not None:
        params["sizes"] = list(_ints(args.sizes))
    options = {}
    if args.degrees is not None:
        options["degrees"] = _ints(args.degrees)
    if args.m is not None:
        options["m_values"] = _ints(args.m)
    if args.designs is not None:
        options["designs"] = tuple(args.designs.split(","))
    if args.strategies is not None:
        options["strategies"] = tuple(args.strategies.split(","))
    if args.arma_order is not None:
        options["arma_order"] = args.arma_order
    if args.mismatch is not None:
        options["mismatch"] = args.mismatch
    if args.restarts is not None:
        options["restarts"] = args.restarts
    filter_spec = {}
    if args.filter is not None:
        filter_spec["coeffs"] = list(_floats(args.filter))
    if args.degree is not None:
        filter_spec["degree"] = args.degree
    cfg = ExperimentConfig(
        scenario=args.scenario,
        graph=GraphSpec(family, n, params),
        trials=args.trials,
        seed=args.seed,
        shift_kind=args.shift or shift_kind,
        noise_kind=args.noise,
        r_values=_ints(args.r) if args.r else (10, 100, 1000),
        filter_spec=filter_spec,
        options=options,
        out=args.out,
    )
    report = run_experiment(cfg)
    print(report.to_csv(), end="")
    if args.out:
        print(f"wrote {args.out}.csv and {args.out}.json")
    return 0


def _cmd_denoise(args):
    _, basis = _load_basis(args)
    p = fileio.load_psd(args.psd).values
    y_data = fileio.load_matrix_csv(args.signal)
    y = _pick_column(y_data, args.column)
    w2 = fileio.load_vector(args.noise_power, n=basis.n)
    if args.method == "wiener":
        out = wiener_denoise(basis, p, w2, y)
    elif args.method == "lowpass":
        out = lowpass_denoise(basis, p, y)
    else:
        raise InvalidSpec(f"unknown denoise method {args.method!r}")
    fileio.save_matrix_csv(np.asarray(out)[:, None], args.out, prefix="y")
    print(f"wrote {args.out}: {args.method}-denoised signal")
    return 0


def _cmd_diagnose(args):
    shift, basis = _load_basis(args)
    if (args.signals is None) == (args.cov is None):
        raise InvalidSpec("give exactly one of --signals or --cov")
    if args.signals is not None:
        ens, _ = fileio.load_ensemble(args.signals)
        cov = sample_covariance(ens)
    else:
        cov = CovarianceMatrix(fileio.load_matrix_csv(args.cov))
    doc = {"theta": stationarity_metric(basis, cov), "residuals": []}
    for triple in (args.triples or "0,1,1;1,1,1;1,2,1;2,2,2").split(";"):
        a, b, c = _ints(triple)
        doc["residuals"].append(
            {
                "a": a,
                "b": b,
                "c": c,
                "value": shift_invariance_residual(shift, cov, a, b, c),
            }
        )
    if args.taps is not None:
        ok, violations = locality_support_check(shift, cov, args.taps, tol=args.tol)
        doc["locality"] = {
            "taps": args.taps,
            "ok": ok,
            "n_violations": len(violations),
        }
    fileio.save_model(doc, args.out)
    print(f"wrote {args.out}: theta = {doc['theta']:.6f}")
    return 0


# ---------------------------------------------------------------------------
# parser


def build_parser():
    parser = argparse.ArgumentParser(
        prog="graphspec",
        description="Stationary graph process generation, diagnostics, and "
        "PSD estimation.",
    )
    subs = parser.add_subparsers(dest="command", required=True)

    g = subs.add_parser("gen-graph", help="draw a random graph, emit edge CSV")
    _add_graph_flags(g)
    g.add_argument("--seed", type=int, default=0)
    g.add_argument("--out", required=True)
    g.set_defaults(func=_cmd_gen_graph)

    g = subs.add_parser("gen-process", help="generate a stationary ensemble")
    g.add_argument("--graph", required=True)
    g.add_argument("--shift", default="adjacency", choices=["adjacency", "laplacian"])
    g.add_argument("--filter", help="comma-separated polynomial taps")
    g.add_argument("--diffusion", help="comma-separated diffusion rates")
    g.add_argument("--r", type=int, default=1)
    g.add_argument("--noise", default="gaussian", choices=["gaussian", "uniform"])
    g.add_argument("--seed", type=int, default=0)
    g.add_argument("--out", required=True)
    g.set_defaults(func=_cmd_gen_process)

    g = subs.add_parser("estimate", help="nonparametric PSD estimation")
    g.add_argument("--method", required=True,
                   choices=["periodogram", "windowed", "filterbank"])
    g.add_argument("--graph", required=True)
    g.add_argument("--shift", default="adjacency", choices=["adjacency", "laplacian"])
    g.add_argument("--signals", required=True)
    g.add_argument("--windows", help="local:M or random:M")
    g.add_argument("--fb", help="ideal:B or fir:L")
    g.add_argument("--column", type=int, default=0,
                   help="realization used by the single-shot estimators")
    g.add_argument("--seed", type=int, default=0)
    g.add_argument("--out", required=True)
    g.set_defaults(func=_cmd_estimate)

    g = subs.add_parser("fit", help="parametric PSD model fitting")
    g.add_argument("--model", required=True, choices=["ma", "ar", "arma"])
    g.add_argument("--order", required=True, help="L, or L,M for ARMA")
    g.add_argument("--variant", default="freq",
                   choices=["freq", "symmetric", "nonneg"])
    g.add_argument("--psd")
    g.add_argument("--signals")
    g.add_argument("--graph", required=True)
    g.add_argument("--shift", default="adjacency", choices=["adjacency", "laplacian"])
    g.add_argument("--restarts", type=int, default=20)
    g.add_argument("--seed", type=int, default=0)
    g.add_argument("--out", required=True)
    g.set_defaults(func=_cmd_fit)

    g = subs.add_parser("experiment", help="run a benchmark scenario")
    g.add_argument("--scenario", required=True)
    _add_graph_flags(g, require_n=False, family_default=None)
    g.add_argument("--shift", choices=["adjacency", "laplacian"])
    g.add_argument("--trials", type=int, default=100)
    g.add_argument("--seed", type=int, default=0)
    g.add_argument("--r", help="comma-separated realization counts")
    g.add_argument("--degrees", help="generator degrees (tc1_filterbank, tc2_ma)")
    g.add_argument("--degree", type=int, help="generator degree (tc1 scenarios)")
    g.add_argument("--filter", help="explicit generator taps")
    g.add_argument("--m", help="window counts (tc1_windows)")
    g.add_argument("--designs", help="filter bank designs (tc1_filterbank)")
    g.add_argument("--strategies", help="window strategies (tc1_windows)")
    g.add_argument("--arma-order", dest="arma_order", type=int)
    g.add_argument("--mismatch", type=int)
    g.add_argument("--restarts", type=int)
    g.add_argument("--noise", default="gaussian", choices=["gaussian", "uniform"])
    g.add_argument("--out")
    g.set_defaults(func=_cmd_experiment)

    g = subs.add_parser("denoise", help="Wiener / lowpass denoising")
    g.add_argument("--graph", required=True)
    g.add_argument("--shift", default="adjacency", choices=["adjacency", "laplacian"])
    g.add_argument("--signal", required=True, help="matrix CSV with the noisy signal")
    g.add_argument("--column", type=int, default=0)
    g.add_argument("--psd", required=True)
    g.add_argument("--noise-power", dest="noise_power", required=True)
    g.add_argument("--method", default="wiener", choices=["wiener", "lowpass"])
    g.add_argument("--out", required=True)
    g.set_defaults(func=_cmd_denoise)

    g = subs.add_parser("diagnose", help="stationarity metric and residuals")
    g.add_argument("--graph", required=True)
    g.add_argument("--shift", default="adjacency", choices=["adjacency", "laplacian"])
    g.add_argument("--signals")
    g.add_argument("--cov", help="dense covariance CSV")
    g.add_argument("--triples", help="semicolon-separated a,b,c triples")
    g.add_argument("--taps", type=int, help="also run the locality support check")
    g.add_argument("--tol", type=float, default=1e-10)
    g.add_argument("--out", required=True)
    g.set_defaults(func=_cmd_diagnose)

    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except NumericalError as exc:
        print(f"graphspec: numerical failure: {exc}", file=sys.stderr)
        return 3
    except InputError as exc:
        print(f"graphspec: {exc}", file=sys.stderr)
        return 2
    except GraphspecError as exc:  # pragma: no cover - safety net
        print(f"graphspec: {exc}", file=sys.stderr)
        return 3
    except (OSError, ValueError) as exc:
        print(f"graphspec: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
