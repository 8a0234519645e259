"""Spike-and-exponential relaxation of binary variables.

For ``z = 0`` the relaxed variable ``zeta`` is a point mass at 0; for
``z = 1`` it has density ``beta * exp(beta * zeta) / (exp(beta) - 1)`` on
``(0, 1]``.  All functions accept scalars or arrays and are written with
``expm1``/``log1p`` so inverse and CDF round-trip to ~1e-15.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import InputError


@dataclass(frozen=True)
class RelaxationParams:
    beta: float = 8.0

    def __post_init__(self):
        if not (math.isfinite(self.beta) and self.beta > 0):
            raise InputError("beta must be positive and finite")


def _unit(x, name: str) -> np.ndarray:
    a = np.asarray(x, dtype=np.float64)
    if not np.all(np.isfinite(a)):
        raise InputError(f"{name} must be finite")
    if np.any(a < 0.0) or np.any(a > 1.0):
        raise InputError(f"{name} must lie in [0, 1]")
    return a


def _bits(z) -> np.ndarray:
    a = np.asarray(z)
    if not np.all((a == 0) | (a == 1)):
        raise InputError("z must be 0 or 1")
    return a.astype(bool)


def _out(a):
    return float(a) if np.ndim(a) == 0 else a


def spike_exp_cdf(zeta, z, params: RelaxationParams = RelaxationParams()):
    """CDF of ``zeta`` given ``z``; identically 1 when ``z = 0``."""
    zeta = _unit(zeta, "zeta")
    on = _bits(z)
    b = params.beta
    cdf1 = np.expm1(b * zeta) / math.expm1(b)
    return _out(np.where(on, cdf1, 1.0))


def inverse_cdf_sample(u, z, params: RelaxationParams = RelaxationParams()):
    """``zeta = log(1 + u (e^beta - 1)) / beta`` for ``z = 1``, else 0."""
    u = _unit(u, "u")
    on = _bits(z)
    b = params.beta
    zeta1 = np.log1p(u * math.expm1(b)) / b
    return _out(np.where(on, zeta1, 0.0))


def binarize(q, rho):
    """1 where ``q >= 1 - rho`` (inclusive), else 0."""
    q = _unit(q, "q")
    rho = _unit(rho, "rho")
    out = (q >= 1.0 - rho).astype(np.int8)
    return int(out) if out.ndim == 0 else out


def _fraction(q, rho):
    # (q + rho - 1) / q, the conditional uniform on the upper branch
    return (q + rho - 1.0) / q


def reparam_sample(q, rho, params: RelaxationParams = RelaxationParams()):
    """Relaxed sample driven by the probability ``q`` and noise ``rho``.

    Equals ``inverse_cdf_sample((q + rho - 1) / q, 1)`` when ``q >= 1 - rho``
    and 0 otherwise; ``q = 0`` always falls on the zero branch.
    """
    q = _unit(q, "q")
    rho = _unit(rho, "rho")
    b = params.beta
    upper = (q >= 1.0 - rho) & (q > 0.0)
    safe_q = np.where(upper, q, 1.0)
    frac = np.clip(_fraction(safe_q, np.where(upper, rho, 0.0)), 0.0, 1.0)
    zeta = np.log1p(frac * math.expm1(b)) / b
    return _out(np.where(upper, zeta, 0.0))


def reparam_grad(q, rho, params: RelaxationParams = RelaxationParams()):
    """Derivative of :func:`reparam_sample` with respect to ``q``.

    On the smooth branch ``q > 1 - rho``::

        d zeta / d q = (1 - rho) (e^beta - 1) / (beta q^2 (1 + A (e^beta - 1)))

    with ``A = (q + rho - 1) / q``.
    """
    q = _unit(q, "q")
    rho = _unit(rho, "rho")
    if np.any(q <= 1.0 - rho):
        raise InputError("reparam_grad is defined only for q > 1 - rho")
    b = params.beta
    c = math.expm1(b)
    A = _fraction(q, rho)
    return _out((1.0 - rho) * c / (b * q * q * (1.0 + A * c)))
