"""Reduction of the pair friction kernel to half-space and slab geometries.

For motion parallel to the surface the pair kernel component G_11 is
integrated over dilute media: over the in-plane coordinates at fixed
height, over a half-space, and between two half-spaces.  Closed forms are
pure power laws; independent adaptive cubature oracles live alongside
them.
"""

import math
from dataclasses import dataclass

import numpy as np
from scipy.integrate import quad

from .errors import DomainError, ParameterError
from .response import ValueWithError
from .tensor_kernel import friction_kernel

__all__ = [
    "HalfSpaceSpec",
    "SlabPairSpec",
    "lateral_integral",
    "halfspace_kernel",
    "slab_kernel",
    "plane_cubature",
    "halfspace_cubature_oracle",
    "slab_quadrature_oracle",
]


@dataclass(frozen=True)
class HalfSpaceSpec:
    """Half-space at distance z0 from the particle, dilute number density."""

    z0: float
    density: float = 1.0

    def __post_init__(self):
        if not (self.z0 > 0 and math.isfinite(self.z0)):
            raise DomainError(f"z0 must be positive, got {self.z0}")
        if not (self.density >= 0 and math.isfinite(self.density)):
            raise DomainError(f"density must be nonnegative, got {self.density}")


@dataclass(frozen=True)
class SlabPairSpec:
    """Two half-spaces with gap d and dilute number densities."""

    d: float
    density1: float = 1.0
    density2: float = 1.0

    def __post_init__(self):
        if not (self.d > 0 and math.isfinite(self.d)):
            raise DomainError(f"gap d must be positive, got {self.d}")
        for name in ("density1", "density2"):
            val = getattr(self, name)
            if not (val >= 0 and math.isfinite(val)):
                raise DomainError(f"{name} must be nonnegative, got {val}")


def lateral_integral(z):
    """In-plane integral of G_11 at height z: 15 pi / (2 z^6)."""
    z = np.asarray(z, dtype=float)
    if np.any(z <= 0):
        raise DomainError("height z must be positive")
    out = 15.0 * np.pi / (2.0 * z**6)
    return out if out.ndim else float(out)


def halfspace_kernel(spec):
    """Particle / half-space kernel G_h = 3 pi rho / (2 z0^5)."""
    return 3.0 * math.pi * spec.density / (2.0 * spec.z0**5)


def slab_kernel(spec):
    """Slab / slab kernel per unit area, G = 3 pi rho1 rho2 / (8 d^4)."""
    return 3.0 * math.pi * spec.density1 * spec.density2 / (8.0 * spec.d**4)


# 64 equispaced angles: the periodic trapezoid rule is spectrally accurate
# for the smooth angular dependence of the kernel components.
_N_THETA = 64
_THETA = (np.arange(_N_THETA) + 0.5) * (2.0 * math.pi / _N_THETA)
_COS_T = np.cos(_THETA)
_SIN_T = np.sin(_THETA)


def _ring_average(component, rho, z):
    """Angular average of a friction-kernel component on a ring of radius rho."""
    pts = np.stack([rho * _COS_T, rho * _SIN_T, np.full(_N_THETA, z)], axis=-1)
    g = friction_kernel(pts)
    return float(np.mean(g[:, component[0], component[1]]))


def plane_cubature(z, component=(0, 0), tol=1e-9):
    """2-d cubature of a kernel component over the plane at height z.

    Independent oracle for :func:`lateral_integral`: the kernel is evaluated
    through the contraction-checked :func:`~casimir_friction.tensor_kernel.friction_kernel`
    and integrated numerically in polar coordinates (spectral angular rule,
    adaptive radial quadrature with the r^-7 tail mapped to infinity).

    Returns
    -------
    ValueWithError
    """
    z = float(z)
    if z <= 0:
        raise DomainError("height z must be positive")

    def radial(rho):
        return 2.0 * math.pi * rho * _ring_average(component, rho, z)

    val, err = quad(radial, 0.0, np.inf, limit=300, epsabs=0.0, epsrel=tol)
    return ValueWithError(val, err)


def halfspace_cubature_oracle(z0, tol=1e-8):
    """Direct 3-d cubature of G_11 over the half-space z >= z0.

    Cylindrical coordinates: spectral angular rule, adaptive radial
    quadrature (integrand falls as rho^-7, handled by the infinite-interval
    transform), adaptive height quadrature of the resulting z^-6 profile.

    Parameters
    ----------
    z0 : float
        Gap distance, > 0.
    tol : float
        Requested relative tolerance, at least 1e-8.

    Returns
    -------
    ValueWithError
        Cubature value (for unit density) and error estimate.
    """
    z0 = float(z0)
    if z0 <= 0:
        raise DomainError("z0 must be positive")
    if tol < 1e-8:
        raise ParameterError("tol must be at least 1e-8")

    def profile(z):
        val, _ = quad(lambda rho: 2.0 * math.pi * rho * _ring_average((0, 0), rho, z),
                      0.0, np.inf, limit=300, epsabs=0.0, epsrel=tol * 0.1)
        return val

    val, err = quad(profile, z0, np.inf, limit=200, epsabs=0.0, epsrel=tol)
    return ValueWithError(val, err)


def slab_quadrature_oracle(d, density1=1.0, density2=1.0, tol=1e-10):
    """Nested-integral oracle for :func:`slab_kernel`.

    Integrates the closed-form half-space kernel over gap distances
    z0 in [d, inf) weighted by the second density.

    Returns
    -------
    ValueWithError
    """
    d = float(d)
    if d <= 0:
        raise DomainError("gap d must be positive")

    def integrand(z0):
        return halfspace_kernel(HalfSpaceSpec(z0=z0, density=density1))

    val, err = quad(integrand, d, np.inf, limit=200, epsabs=0.0, epsrel=tol)
    return ValueWithError(density2 * val, density2 * err)
