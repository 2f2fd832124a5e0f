"""Periodogram convergence: empirical NMSE against the 2/R law.

Uses the experiment driver so the output is the same plot-ready table the
CLI emits.
"""
from graphspec.experiments import ExperimentConfig, run_experiment
from graphspec.graphs import GraphSpec

cfg = ExperimentConfig(
    scenario="tc1_periodogram",
    graph=GraphSpec("erdos_renyi", 100, {"p": 0.05}),
    trials=200,
    seed=1,
    r_values=(10, 100, 1000),
    filter_spec={"degree": 3},
)
report = run_experiment(cfg)
print("Gaussian noise, degree-3 generator:")
print(report.to_csv())

uniform = run_experiment(
    ExperimentConfig(
        scenario="tc1_periodogram",
        graph=GraphSpec("erdos_renyi", 100, {"p": 0.05}),
        trials=200,
        seed=1,
        r_values=(10, 100, 1000),
        filter_spec={"degree": 3},
        noise_kind="uniform",
    )
)
print("uniform noise (same law):")
print(uniform.to_csv())
