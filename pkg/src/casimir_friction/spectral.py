"""General polarizabilities as spectral densities over squared energies.

A polarizability is represented by a nonnegative density alpha(m^2) over
squared oscillator energies.  Supported families: a sharp line (delta
density), a Lorentzian-broadened line (damped-oscillator shape, exactly
normalized to its static weight), finite sums of lines, and tabulated
densities on a user grid.  The finite-temperature overlap strength H0
replaces the sharp-resonance delta function for broadened spectra.
"""

import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional, Tuple

import numpy as np
from scipy.integrate import quad

from .errors import ConvergenceError, DistributionalError, DomainError, ParameterError
from .response import OscillatorModel, ThermalState

__all__ = [
    "SpectralLine",
    "SpectralPolarizability",
    "OverlapStrength",
    "sharp_line",
    "lorentzian_line",
    "line_sum",
    "tabulated",
    "load_tabulated",
    "spectral_density",
    "polarizability_from_spectrum",
    "overlap_strength",
    "verify_measure_identity",
]

_KINDS = ("sharp-line", "lorentzian-line", "line-sum", "tabulated")


@dataclass(frozen=True)
class SpectralLine:
    """One oscillator line: weight (volume), center (energy), width (energy)."""

    weight: float
    center: float
    width: float = 0.0

    def __post_init__(self):
        if not (self.weight >= 0 and math.isfinite(self.weight)):
            raise DomainError(f"line weight must be >= 0, got {self.weight}")
        if not (self.center > 0 and math.isfinite(self.center)):
            raise DomainError(f"line center must be > 0, got {self.center}")
        if not (self.width >= 0 and math.isfinite(self.width)):
            raise DomainError(f"line width must be >= 0, got {self.width}")


@dataclass(frozen=True)
class SpectralPolarizability:
    """Polarizability as a spectral density over squared energies."""

    kind: str
    lines: Tuple[SpectralLine, ...] = ()
    table: Optional[Tuple[np.ndarray, np.ndarray]] = field(default=None, repr=False)

    def __post_init__(self):
        if self.kind not in _KINDS:
            raise DomainError(f"unknown spectral kind {self.kind!r}")
        if self.kind == "tabulated":
            m2, dens = self.table
            m2 = np.asarray(m2, dtype=float)
            dens = np.asarray(dens, dtype=float)
            if m2.ndim != 1 or m2.shape != dens.shape or m2.size < 2:
                raise DomainError("table needs two equal-length 1-d columns")
            if np.any(np.diff(m2) <= 0):
                raise DomainError("table grid must be strictly increasing")
            if m2[0] < 0:
                raise DomainError("table grid must be nonnegative (squared energies)")
            if np.any(dens < 0):
                raise DomainError("tabulated density must be nonnegative (passive medium)")
            object.__setattr__(self, "table", (m2, dens))
        elif not self.lines:
            raise DomainError("line-based model needs at least one line")

    @property
    def is_sharp(self):
        """True when the whole density is a sum of delta functions."""
        return self.table is None and all(ln.width == 0.0 for ln in self.lines)

    @property
    def sharp_lines(self):
        return tuple(ln for ln in self.lines if ln.width == 0.0)

    @property
    def smooth_lines(self):
        return tuple(ln for ln in self.lines if ln.width > 0.0)

    @property
    def static_polarizability(self):
        """Sum rule value: the density integrated over d(m^2)."""
        if self.table is not None:
            m2, dens = self.table
            return float(np.trapezoid(dens, m2))
        return sum(ln.weight for ln in self.lines)


def sharp_line(alpha, energy):
    """Single undamped line with weight ``alpha`` at energy ``energy``."""
    return SpectralPolarizability("sharp-line", (SpectralLine(alpha, energy, 0.0),))


def lorentzian_line(alpha, energy, width):
    """Single damped-oscillator line; ``width`` > 0 is the damping rate."""
    if not width > 0:
        raise DomainError("lorentzian width must be positive; use sharp_line for width 0")
    return SpectralPolarizability("lorentzian-line", (SpectralLine(alpha, energy, width),))


def line_sum(lines):
    """Finite sum of lines; entries are (weight, center, width) or SpectralLine."""
    lines = tuple(ln if isinstance(ln, SpectralLine) else SpectralLine(*ln) for ln in lines)
    return SpectralPolarizability("line-sum", lines)


def tabulated(m2, density):
    """Density sampled on a strictly increasing m^2 grid, linearly interpolated."""
    return SpectralPolarizability("tabulated", (), (np.asarray(m2, float), np.asarray(density, float)))


def from_oscillator(osc: OscillatorModel):
    """Sharp-line model equivalent to a simple harmonic oscillator."""
    return sharp_line(osc.alpha0, osc.energy)


def load_tabulated(path):
    """Read a two-column (m^2, density) text/CSV file; '#' starts a comment.

    Both comma- and whitespace-separated columns are accepted; the first
    column must be strictly increasing.
    """
    rows = []
    for lineno, raw in enumerate(Path(path).read_text().splitlines(), start=1):
        text = raw.split("#", 1)[0].strip()
        if not text:
            continue
        parts = text.replace(",", " ").split()
        if len(parts) != 2:
            raise DomainError(f"{path}:{lineno}: expected two numeric columns, got {raw!r}")
        try:
            rows.append((float(parts[0]), float(parts[1])))
        except ValueError as exc:
            raise DomainError(f"{path}:{lineno}: non-numeric entry in {raw!r}") from exc
    if len(rows) < 2:
        raise DomainError(f"{path}: need at least two table rows")
    data = np.asarray(rows)
    return tabulated(data[:, 0], data[:, 1])


def _lorentzian_density(m, weight, center, width):
    """Damped-oscillator spectral density over m^2, evaluated at m > 0.

    Normalized so its integral d(m^2) over (0, inf) is exactly ``weight``
    for every positive width (residue identity of the damped oscillator).
    """
    e2 = center * center
    return (weight * e2 * width
            / (np.pi * m * ((e2 - m * m)**2 + width * width * m * m)))


def _smooth_density(model, m):
    """Density of the non-sharp part of ``model`` at m (array ok)."""
    m = np.asarray(m, dtype=float)
    if model.table is not None:
        m2_grid, dens = model.table
        return np.interp(m * m, m2_grid, dens, left=0.0, right=0.0)
    out = np.zeros_like(m)
    for ln in model.smooth_lines:
        out += _lorentzian_density(m, ln.weight, ln.center, ln.width)
    return out


def spectral_density(model, m2):
    """Evaluate the spectral density alpha(m^2) pointwise.

    Parameters
    ----------
    model : SpectralPolarizability
    m2 : float or ndarray
        Squared energy, must be positive.

    Returns
    -------
    float or ndarray

    Raises
    ------
    DistributionalError
        If the model contains sharp lines, whose density is a delta
        function; those are only meaningful inside integrals
        (:func:`polarizability_from_spectrum`, :func:`overlap_strength`).
    """
    if model.table is None and model.sharp_lines:
        raise DistributionalError(
            "sharp lines have a delta-function density; pointwise evaluation "
            "is undefined, use the integral APIs")
    m2 = np.asarray(m2, dtype=float)
    if np.any(m2 <= 0):
        raise DomainError("m2 must be positive")
    out = _smooth_density(model, np.sqrt(m2))
    return out if out.ndim else float(out)


def _tail_split(model, beta=None):
    """Finite/infinite split point for quadrature over the model's support."""
    b = 1.0
    if model.table is not None:
        b = max(b, math.sqrt(model.table[0][-1]))
    for ln in model.lines:
        b = max(b, ln.center + 20.0 * ln.width)
    if beta is not None:
        b = max(b, 2.0 / beta)
    return 2.0 * b


def _breakpoints(models, beta, upper):
    """Interior quadrature nodes: line cores and the thermal scale."""
    pts = set()
    for model in models:
        for ln in model.lines:
            for p in (ln.center - 8.0 * ln.width, ln.center, ln.center + 8.0 * ln.width):
                if 0.0 < p < upper:
                    pts.add(p)
    if beta is not None and 0.0 < 2.0 / beta < upper:
        pts.add(2.0 / beta)
    return sorted(pts)


def polarizability_from_spectrum(model, K, tol=1e-10):
    """Polarizability h(K^2) = integral of alpha(m^2) m^2 / (K^2 + m^2) d(m^2).

    Sharp lines contribute their exact closed form
    sum_k alpha_k E_k^2 / (K^2 + E_k^2); broadened lines are integrated by
    adaptive quadrature split at the line cores; tabulated densities use the
    trapezoid rule on their own grid.

    Parameters
    ----------
    model : SpectralPolarizability
    K : float
        Imaginary-frequency argument (real Matsubara axis; even in K).
    tol : float
        Absolute quadrature tolerance for the broadened part.

    Returns
    -------
    float
    """
    K = float(K)
    k2 = K * K
    if model.table is not None:
        m2_grid, dens = model.table
        return float(np.trapezoid(dens * m2_grid / (k2 + m2_grid), m2_grid))
    total = sum(ln.weight * ln.center**2 / (k2 + ln.center**2)
                for ln in model.sharp_lines)
    if model.smooth_lines:
        def integrand(m):
            return _smooth_density(model, m) * m * m / (k2 + m * m) * 2.0 * m

        upper = max(_tail_split(model), abs(K) * 2.0)
        pts = _breakpoints((model,), None, upper)
        v1, e1 = quad(integrand, 0.0, upper, points=pts or None,
                      limit=400, epsabs=tol, epsrel=1e-11, full_output=0)
        v2, e2 = quad(integrand, upper, np.inf, limit=200,
                      epsabs=tol, epsrel=1e-11)
        if e1 + e2 > tol + 1e-8 * abs(v1 + v2):
            raise ConvergenceError(
                f"polarizability quadrature stalled at error {e1 + e2:.3e}",
                achieved=e1 + e2)
        total += v1 + v2
    return float(total)


@dataclass(frozen=True)
class OverlapStrength:
    """Finite-temperature spectral overlap H0 with its quadrature error."""

    h0: float
    quadrature_error: float

    def __post_init__(self):
        if self.h0 < 0:
            raise DomainError("H0 must be nonnegative for passive spectra")


def _invsinh2(x):
    """1/sinh(x)^2 without overflow: 4 e^{-2x} / (1 - e^{-2x})^2."""
    em = np.exp(-2.0 * x)
    return 4.0 * em / np.expm1(-2.0 * x)**2


def overlap_strength(model1, model2, th, tol=1e-10):
    """Overlap strength H0 = (pi beta / 2) * integral of the line overlap.

    The integrand is m^4 alpha_1(m^2) alpha_2(m^2) / sinh^2(beta m / 2) over
    m (= omega in reduced units).  Sharp lines in one model collapse the
    integral analytically against the smooth density of the other; two
    models that both carry sharp weight have a distributional overlap and
    are rejected (use :func:`casimir_friction.response.friction_strength_sharp`).

    The m -> 0 endpoint is integrable: the envelope behaves as m^2 for
    bounded densities and approaches a constant for Lorentzian tails.

    Parameters
    ----------
    model1, model2 : SpectralPolarizability
    th : ThermalState
    tol : float
        Absolute tolerance; acceptance is absolute-plus-relative with a
        1e-8 relative guard.

    Returns
    -------
    OverlapStrength
    """
    if model1.is_sharp and model2.is_sharp:
        raise DistributionalError(
            "overlap of two sharp spectra is a delta distribution; "
            "use friction_strength_sharp")
    sharp1 = () if model1.table is not None else model1.sharp_lines
    sharp2 = () if model2.table is not None else model2.sharp_lines
    if sharp1 and sharp2:
        raise DistributionalError(
            "both spectra carry sharp weight; their mutual overlap is "
            "distributional")

    beta = th.beta
    total = 0.0
    err = 0.0

    smooth1 = model1.table is not None or model1.smooth_lines
    smooth2 = model2.table is not None or model2.smooth_lines
    if smooth1 and smooth2:
        def integrand(m):
            return (m**4 * _smooth_density(model1, m) * _smooth_density(model2, m)
                    * _invsinh2(0.5 * beta * m))

        upper = max(_tail_split(model1, beta), _tail_split(model2, beta))
        pts = _breakpoints((model1, model2), beta, upper)
        v1, e1 = quad(integrand, 0.0, upper, points=pts or None,
                      limit=500, epsabs=tol, epsrel=1e-11, full_output=0)
        v2, e2 = quad(integrand, upper, np.inf, limit=200,
                      epsabs=tol, epsrel=1e-11)
        total += v1 + v2
        err += e1 + e2

    # a sharp line at E collapses d(m^2) to the other density at m = E
    for sharp_part, other in ((sharp1, model2), (sharp2, model1)):
        for ln in sharp_part:
            total += (0.5 * ln.weight * ln.center**3
                      * float(_smooth_density(other, np.asarray(ln.center)))
                      * _invsinh2(0.5 * beta * ln.center))

    h0 = math.pi * beta / 2.0 * total
    err = math.pi * beta / 2.0 * err
    if err > tol + 1e-8 * abs(h0):
        raise ConvergenceError(
            f"overlap quadrature stalled at error {err:.3e} (tol {tol:.3e})",
            achieved=err)
    return OverlapStrength(h0=max(h0, 0.0), quadrature_error=err)


def verify_measure_identity(E, gamma):
    """Numerical check of the squared-energy measure collapse.

    Integrates a pair of normalized narrow bumps w(m^2), defined natively in
    the m^2 measure around E^2, against a mollified delta of width ``gamma``
    in the frequency difference, and divides by the 1-d integral obtained
    from the 4 m^2 d(omega) collapse.  The ratio must approach 1 from below
    as gamma -> 0.

    Parameters
    ----------
    E : float
        Bump center energy.
    gamma : float
        Mollifier width; must satisfy gamma <= 1e-3 * E.

    Returns
    -------
    float
        LHS / RHS ratio; 1 in the gamma -> 0 limit.
    """
    E = float(E)
    gamma = float(gamma)
    if not E > 0:
        raise DomainError("E must be positive")
    if not 0 < gamma <= 1e-3 * E:
        raise ParameterError("gamma must be positive and at most 1e-3 * E")

    u0 = E * E
    sig_u = 0.02 * E * E  # bump std in the m^2 variable (0.01*E in m units)
    norm_u = 1.0 / (sig_u * math.sqrt(2.0 * math.pi))
    norm_g = 1.0 / (gamma * math.sqrt(2.0 * math.pi))

    def bump(u):
        return norm_u * np.exp(-(u - u0)**2 / (2.0 * sig_u**2))

    def mollifier(x):
        return norm_g * np.exp(-x * x / (2.0 * gamma**2))

    lo, hi = u0 - 8.0 * sig_u, u0 + 8.0 * sig_u

    def inner(u1):
        m1 = math.sqrt(u1)
        pts = sorted(p for p in ((m1 - 5.0 * gamma)**2, u1, (m1 + 5.0 * gamma)**2)
                     if lo < p < hi)
        val, _ = quad(lambda u2: bump(u2) * mollifier(m1 - math.sqrt(u2)),
                      lo, hi, points=pts or None, limit=200, epsrel=1e-10)
        return bump(u1) * val

    lhs, _ = quad(inner, lo, hi, limit=200, epsrel=1e-9)
    rhs, _ = quad(lambda m: bump(m * m)**2 * 4.0 * m * m,
                  math.sqrt(lo), math.sqrt(hi), limit=200, epsrel=1e-12)
    return lhs / rhs
