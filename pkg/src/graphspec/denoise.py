"""Frequency-domain denoisers for stationary graph signals."""
from __future__ import annotations

import numpy as np

from .errors import DimensionMismatch, InputError
from .spectral import coerce_real, gft, igft


def _check_inputs(basis, p, y):
    p = np.asarray(p, dtype=float)
    y = np.asarray(y)
    if p.shape[0] != basis.n or y.shape[0] != basis.n:
        raise DimensionMismatch("PSD/signal length does not match basis size")
    if np.any(p < 0):
        raise InputError("PSD must be nonnegative")
    return p, y


def wiener_denoise(basis, p, noise_power, y):
    """Per-frequency shrinkage ``p_k / (p_k + w2_k)`` applied in the GFT domain.

    ``noise_power`` is the known noise PSD (scalar broadcast or length-N
    vector).  Frequencies where signal and noise power are both zero get
    gain zero.
    """
    p, y = _check_inputs(basis, p, y)
    w2 = np.broadcast_to(np.asarray(noise_power, dtype=float), (basis.n,))
    if np.any(w2 < 0):
        raise InputError("noise power must be nonnegative")
    total = p + w2
    gain = np.divide(p, total, out=np.zeros(basis.n), where=total > 0)
    return coerce_real(igft(basis, gain * gft(basis, y)))


def lowpass_denoise(basis, p, y, tau_active=None):
    """Keep only the frequencies where the process has power.

    The passband is ``{k : p_k > tau_active}`` with ``tau_active``
    defaulting to ``1e-10 * max(p)``.
    """
    p, y = _check_inputs(basis, p, y)
    if tau_active is None:
        tau_active = 1e-10 * float(np.max(p, initial=0.0))
    gain = (p > tau_active).astype(float)
    return coerce_real(igft(basis, gain * gft(basis, y)))
