"""Imaginary-time correlation functions for one and two harmonic oscillators.

The single-oscillator polarizability, the Matsubara convolution of two
oscillators, its closed form H*f(K), the causal time-domain response
reconstructed from that closed form, and the reversible / friction split.
Reduced units throughout: hbar = k_B = 1, so energies and frequencies
coincide and beta is an inverse energy.
"""

import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np
from scipy.special import zeta

from .errors import ConvergenceError, DomainError, ParameterError, PoleError

__all__ = [
    "OscillatorModel",
    "ThermalState",
    "PairSpectrum",
    "ValueWithError",
    "oscillator_correlation",
    "matsubara_convolution",
    "closed_form_correlation",
    "h_prefactor",
    "pair_spectrum",
    "response_time_domain",
    "reversible_coefficient",
    "friction_strength_sharp",
]

# exp overflows just above this; switch sinh products to log-domain arithmetic
_LOG_DOMAIN_THRESHOLD = 700.0
_LOG_MAX_FLOAT = math.log(np.finfo(float).max)


@dataclass(frozen=True)
class OscillatorModel:
    """Simple harmonic oscillator: static polarizability and eigenenergy."""

    alpha0: float
    energy: float

    def __post_init__(self):
        if not (self.alpha0 > 0 and math.isfinite(self.alpha0)):
            raise DomainError(f"alpha0 must be positive and finite, got {self.alpha0}")
        if not (self.energy > 0 and math.isfinite(self.energy)):
            raise DomainError(f"energy must be positive and finite, got {self.energy}")


@dataclass(frozen=True)
class ThermalState:
    """Inverse temperature beta > 0 (beta = inf is a limit, not a value)."""

    beta: float

    def __post_init__(self):
        if not (self.beta > 0 and math.isfinite(self.beta)):
            raise DomainError(f"beta must be positive and finite, got {self.beta}")


@dataclass(frozen=True)
class PairSpectrum:
    """Two-oscillator correlation parameters: prefactor and sum/difference energies."""

    h: float
    sigma1: float
    sigma2: float

    def __post_init__(self):
        if not self.sigma1 > 0:
            raise DomainError("sigma1 must be positive")
        if self.sigma1 < abs(self.sigma2):
            raise DomainError("sigma1 must dominate |sigma2|")


class ValueWithError(NamedTuple):
    """A numerical value together with an absolute error estimate."""

    value: float
    error: float


def _coth(x):
    # 1/tanh never overflows; for small x it correctly approaches 1/x
    return 1.0 / np.tanh(x)


def _log_sinh(x):
    # log(sinh x) = x + log(1 - exp(-2x)) - log 2, stable for large x
    return x + np.log1p(-np.exp(-2.0 * x)) - math.log(2.0)


def oscillator_correlation(osc, value, axis="matsubara"):
    """Single-oscillator correlation g(K) = alpha * E^2 / (K^2 + E^2).

    Parameters
    ----------
    osc : OscillatorModel
    value : float or ndarray
        Either K itself (``axis="matsubara"``, imaginary-frequency axis) or
        the real frequency omega with K = i*omega (``axis="real-frequency"``).
    axis : {"matsubara", "real-frequency"}

    Returns
    -------
    float or ndarray
        The correlation value; on the real-frequency branch the continuation
        alpha * E^2 / (E^2 - omega^2).

    Raises
    ------
    PoleError
        On the real-frequency branch at omega = +-E.
    """
    value = np.asarray(value, dtype=float)
    e2 = osc.energy**2
    if axis == "matsubara":
        out = osc.alpha0 * e2 / (value**2 + e2)
    elif axis == "real-frequency":
        denom = e2 - value**2
        if np.any(denom == 0.0):
            raise PoleError(
                f"continuation pole at omega = +-{osc.energy}", pole=osc.energy)
        out = osc.alpha0 * e2 / denom
    else:
        raise ParameterError(f"axis must be 'matsubara' or 'real-frequency', got {axis!r}")
    return out if out.ndim else float(out)


def matsubara_convolution(osc1, osc2, th, n, n_max, tol=None):
    """Two-oscillator correlation at K_n by direct Matsubara summation.

    Evaluates (1/beta) * sum over K_0 of g1(K_0) * g2(K_n - K_0) with a
    symmetric truncation at ``n_max`` terms plus an analytic tail estimate.
    The summand decays as K_0**-4, so the added tail is O(n_max**-3) and the
    residual bound returned with the value is another factor K_max**-1
    smaller.  Summation uses numpy's deterministic pairwise order, so the
    result is bit-identical for a fixed ``n_max``.

    This routine is the oracle against which the closed form of
    :func:`closed_form_correlation` is validated and is deliberately
    independent of it.

    Parameters
    ----------
    osc1, osc2 : OscillatorModel
    th : ThermalState
    n : int
        Matsubara index of the external frequency K_n = 2*pi*n/beta.
    n_max : int
        Symmetric truncation, at least 1000 and at least 10*|n|.
    tol : float, optional
        If given, require the residual bound to be below ``tol`` (absolute).

    Returns
    -------
    ValueWithError
        Sum plus tail estimate, and the bound on the remaining error.
    """
    n = int(n)
    n_max = int(n_max)
    if n_max < 1000:
        raise ParameterError(f"n_max must be at least 1000, got {n_max}")
    if n_max < 10 * abs(n):
        raise ParameterError("n_max must be at least 10*|n|")
    beta = th.beta
    k_n = 2.0 * math.pi * n / beta
    k0 = 2.0 * math.pi * np.arange(-n_max, n_max + 1) / beta
    terms = (oscillator_correlation(osc1, k0)
             * oscillator_correlation(osc2, k_n - k0))
    total = float(np.sum(terms)) / beta

    # analytic tail: summand -> A / K0^4 with A = a1 E1^2 a2 E2^2 / beta
    amp = osc1.alpha0 * osc1.energy**2 * osc2.alpha0 * osc2.energy**2 / beta
    tail = 2.0 * amp * (beta / (2.0 * math.pi))**4 * float(zeta(4, n_max + 1))
    k_edge = 2.0 * math.pi * (n_max + 1) / beta
    bound = 2.0 * tail * (6.0 * abs(k_n) / k_edge
                          + (osc1.energy**2 + osc2.energy**2) / k_edge**2)
    if tol is not None and bound > tol:
        raise ConvergenceError(
            f"tail bound {bound:.3e} above requested tolerance {tol:.3e}; "
            "increase n_max", achieved=bound)
    return ValueWithError(total + tail, bound)


def h_prefactor(osc1, osc2, th):
    """Prefactor H = E1 E2 a1 a2 / (4 sinh(beta E1/2) sinh(beta E2/2)).

    Falls back to log-domain arithmetic once beta*(E1+E2)/2 exceeds 700,
    where the sinh factors individually overflow although their ratio with
    the numerator may not.
    """
    a1 = 0.5 * th.beta * osc1.energy
    a2 = 0.5 * th.beta * osc2.energy
    num = osc1.energy * osc2.energy * osc1.alpha0 * osc2.alpha0 / 4.0
    if a1 + a2 <= _LOG_DOMAIN_THRESHOLD:
        return num / (math.sinh(a1) * math.sinh(a2))
    log_h = math.log(num) - _log_sinh(a1) - _log_sinh(a2)
    if log_h > _LOG_MAX_FLOAT:
        raise OverflowError(f"H prefactor overflows: log H = {log_h:.1f}")
    return math.exp(log_h)  # may underflow to 0.0, which is the honest answer


def pair_spectrum(osc1, osc2, th):
    """Bundle H, Sigma1 = E1+E2 and Sigma2 = E1-E2 for an oscillator pair."""
    return PairSpectrum(h=h_prefactor(osc1, osc2, th),
                        sigma1=osc1.energy + osc2.energy,
                        sigma2=osc1.energy - osc2.energy)


def closed_form_correlation(osc1, osc2, th, K):
    """Closed form H*f(K) of the two-oscillator Matsubara correlation.

    f(K) is the sum of Sigma_j * sinh(beta Sigma_j / 2) / (K^2 + Sigma_j^2)
    over Sigma_1 = E1+E2 and Sigma_2 = E1-E2.  The product H*f is evaluated
    through the identity

        H * sinh(beta Sigma_1 / 2) = c * (coth a1 + coth a2),
        H * sinh(beta Sigma_2 / 2) = c * (coth a2 - coth a1),

    with c = E1 E2 a1 a2 / 4 and a_i = beta E_i / 2, which is free of large
    intermediates for any temperature.  The degenerate Sigma_2 = 0 term is
    the continuous limit: 0 for K != 0 and H*beta/2 at K = 0; the sharp
    delta-function resonance is exposed only through
    :func:`friction_strength_sharp`.

    Parameters
    ----------
    osc1, osc2 : OscillatorModel
    th : ThermalState
    K : float
        Imaginary-frequency argument (the function is even in K).

    Returns
    -------
    float
    """
    K = float(K)
    beta = th.beta
    s1 = osc1.energy + osc2.energy
    s2 = osc1.energy - osc2.energy
    a1 = 0.5 * beta * osc1.energy
    a2 = 0.5 * beta * osc2.energy
    c = osc1.energy * osc2.energy * osc1.alpha0 * osc2.alpha0 / 4.0
    coth1 = _coth(a1)
    coth2 = _coth(a2)
    total = c * (coth1 + coth2) * s1 / (K**2 + s1**2)
    if s2 == 0.0:
        if K == 0.0:
            total += h_prefactor(osc1, osc2, th) * beta / 2.0
    else:
        total += c * (coth2 - coth1) * s2 / (K**2 + s2**2)
    if not math.isfinite(total):
        raise OverflowError("closed-form correlation overflowed")
    return total


def response_time_domain(osc1, osc2, th, t):
    """Causal retarded response phi(t) of the oscillator pair.

    phi(t) = theta(t) * H * [sinh(beta Sigma1/2) sin(Sigma1 t)
                             + sinh(beta Sigma2/2) sin(Sigma2 t)]

    is the unique causal function whose damped one-sided transform
    integral_0^inf phi(t) exp(-K t) dt reproduces
    :func:`closed_form_correlation` for every K > 0.  Exactly zero for
    t < 0.  The sinh weights are evaluated through the same coth identity
    as the closed form.

    Parameters
    ----------
    t : float or ndarray
        Time(s); may be negative.

    Returns
    -------
    float or ndarray
    """
    t = np.asarray(t, dtype=float)
    w1, w2, s1, s2 = _time_domain_modes(osc1, osc2, th)
    out = w1 * np.sin(s1 * t)
    if s2 != 0.0:
        out = out + w2 * np.sin(s2 * t)
    out = np.where(t >= 0.0, out, 0.0)
    return out if out.ndim else float(out)


def _time_domain_modes(osc1, osc2, th):
    """Weights H*sinh(beta Sigma_j/2) and frequencies of the two phi modes."""
    s1 = osc1.energy + osc2.energy
    s2 = osc1.energy - osc2.energy
    a1 = 0.5 * th.beta * osc1.energy
    a2 = 0.5 * th.beta * osc2.energy
    c = osc1.energy * osc2.energy * osc1.alpha0 * osc2.alpha0 / 4.0
    return c * (_coth(a1) + _coth(a2)), c * (_coth(a2) - _coth(a1)), s1, s2


def reversible_coefficient(osc1, osc2, th):
    """Secular reversible-force coefficient: the zero-frequency transform.

    integral_0^inf phi(u) du = phi_tilde(0), which equals the closed-form
    correlation at K = 0 by definition of the one-sided transform (for
    E1 = E2 the value includes the beta/2 resonance limit).
    """
    return closed_form_correlation(osc1, osc2, th, 0.0)


def friction_strength_sharp(osc1, osc2, th):
    """Distributional friction strength H * (pi beta / 2) for sharp lines.

    This is the scalar coefficient multiplying delta(omega1 - omega2) in
    the sharp-resonance friction force; it is a distributional strength,
    not a force, and is nonzero off resonance only in the sense that the
    delta factor vanishes there.
    """
    return h_prefactor(osc1, osc2, th) * math.pi * th.beta / 2.0
