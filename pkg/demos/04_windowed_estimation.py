"""Single-realization PSD estimation with vertex-domain window banks.

On a community-structured graph, windows matching the communities mix the
spectrum less than random windows of the same sizes, and the closed-form
bias/variance predictions track the Monte Carlo error.
"""
import numpy as np

from graphspec import (
    GraphFilter,
    GraphSpec,
    bank_from_blocks,
    decompose,
    design_windows,
    filter_freq_response,
    generate_graph,
    predict_window_moments,
    sbm_blocks,
    windowed_avg_periodogram,
)
from graphspec.processes import white_noise
from graphspec.spectral import apply_filter_vertex

spec = GraphSpec("stochastic_block", 100, {"communities": 10, "p": 0.9, "q": 0.1})
shift = generate_graph(spec, seed=2, kind="laplacian")
basis = decompose(shift)
filt = GraphFilter([1.0, 0.4])
p = np.abs(filter_freq_response(basis, filt)) ** 2
p_norm2 = np.sum(p**2)

banks = {
    "community": bank_from_blocks(100, sbm_blocks([10] * 10)),
    "random": design_windows(shift, 10, strategy="random", seed=2),
}

trials = 1000
x = apply_filter_vertex(shift, filt, white_noise(100, trials, "gaussian",
                                                 np.random.default_rng(0)))
print(f"{'bank':<10} {'NMSE (MC)':>10} {'NMSE (theory)':>14} {'bias share':>11}")
for name, bank in banks.items():
    nmse = np.mean(
        [
            np.sum((windowed_avg_periodogram(basis, bank, x[:, t]).values - p) ** 2)
            / p_norm2
            for t in range(trials)
        ]
    )
    moments = predict_window_moments(basis, bank, p)
    bias_share = np.sum(moments.bias**2) / moments.mse
    print(f"{name:<10} {nmse:>10.3f} {moments.mse / p_norm2:>14.3f} {bias_share:>11.2f}")

print("\nsingle-realization periodogram (no windows) has NMSE 2 by the "
      "variance law; both banks land well below it.")
