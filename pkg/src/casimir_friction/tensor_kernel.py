"""Electrostatic dipole coupling tensors and the pair friction kernel.

All functions are pure and accept either a single separation vector of
shape ``(3,)`` or a batch of shape ``(..., 3)``; outputs gain the
corresponding trailing tensor axes.  Reduced units (hbar = k_B = 1) with
lengths in an arbitrary reference unit.
"""

import numpy as np

from .errors import DomainError, InternalConsistencyError, ParameterError

__all__ = [
    "MIN_SEPARATION",
    "dipole_coupling",
    "coupling_gradient",
    "finite_difference_gradient",
    "friction_kernel",
]

# Below this separation r**-10 overflows and the dipole picture is
# meaningless anyway; reject instead of returning garbage.
MIN_SEPARATION = 1e-9

_EYE3 = np.eye(3)


def _checked(x):
    """Return (x, r) with x shaped (..., 3) and r = |x| validated."""
    x = np.asarray(x, dtype=float)
    if x.shape[-1:] != (3,):
        raise DomainError(f"separation must have 3 components, got shape {x.shape}")
    r = np.linalg.norm(x, axis=-1)
    if not np.all(np.isfinite(r)):
        raise DomainError("separation vector must be finite")
    if np.any(r < MIN_SEPARATION):
        raise DomainError(f"separation magnitude below {MIN_SEPARATION}; the "
                          "coupling tensors are singular at contact")
    return x, r


def dipole_coupling(x):
    """Dipole-dipole coupling tensor psi_ij = -(3 x_i x_j / r^5 - delta_ij / r^3).

    Parameters
    ----------
    x : array_like, shape (..., 3)
        Separation vector(s) between the two particles.

    Returns
    -------
    ndarray, shape (..., 3, 3)
        Symmetric, traceless coupling tensor, units length**-3.
    """
    x, r = _checked(x)
    r = r[..., None, None]
    outer = x[..., :, None] * x[..., None, :]
    return -(3.0 * outer / r**5 - _EYE3 / r**3)


def coupling_gradient(x):
    """Gradient T_lij = d(psi_ij)/dx_l of the dipole coupling.

    Closed form::

        T_lij = 15 x_i x_j x_l / r^7
                - 3 (x_i d_lj + x_j d_il + x_l d_ij) / r^5

    totally symmetric in (l, i, j) and traceless on (i, j).

    Parameters
    ----------
    x : array_like, shape (..., 3)

    Returns
    -------
    ndarray, shape (..., 3, 3, 3)
        Index order (l, i, j), units length**-4.
    """
    x, r = _checked(x)
    r5 = r[..., None, None, None] ** 5
    r7 = r[..., None, None, None] ** 7
    triple = x[..., :, None, None] * x[..., None, :, None] * x[..., None, None, :]
    sym = (x[..., :, None, None] * _EYE3[None, :, :]        # x_l d_ij
           + x[..., None, :, None] * _EYE3[:, None, :]      # x_i d_lj
           + x[..., None, None, :] * _EYE3[:, :, None])     # x_j d_li
    return 15.0 * triple / r7 - 3.0 * sym / r5


def finite_difference_gradient(x, h):
    """Central finite-difference estimate of the coupling gradient.

    Independent O(h**2) oracle for :func:`coupling_gradient`; it differences
    :func:`dipole_coupling` and never touches the closed-form gradient.

    Parameters
    ----------
    x : array_like, shape (..., 3)
    h : float
        Step size; must satisfy 0 < h < r/10 for every vector in the batch.

    Returns
    -------
    ndarray, shape (..., 3, 3, 3)
    """
    x, r = _checked(x)
    h = float(h)
    if not 0.0 < h < np.min(r) / 10.0:
        raise ParameterError(f"step h={h} outside (0, r/10) with min r={np.min(r)}")
    out = np.empty(x.shape[:-1] + (3, 3, 3))
    for l in range(3):
        step = np.zeros(3)
        step[l] = h
        out[..., l, :, :] = (dipole_coupling(x + step) - dipole_coupling(x - step)) / (2.0 * h)
    return out


def friction_kernel(x, check_tol=1e-12):
    """Friction kernel G_lq = T_lij T_qij = 18/r^8 d_lq + 36 x_l x_q / r^10.

    The kernel is evaluated twice on every call: from the closed form and
    by full contraction of :func:`coupling_gradient`.  The two routes must
    agree to ``check_tol`` relative, turning the algebraic reduction into a
    perpetual self-test.

    Parameters
    ----------
    x : array_like, shape (..., 3)
    check_tol : float
        Relative agreement required between the two routes.

    Returns
    -------
    ndarray, shape (..., 3, 3)
        Symmetric positive-semidefinite Gram matrix, units length**-8.
    """
    x, r = _checked(x)
    r8 = r[..., None, None] ** 8
    r10 = r[..., None, None] ** 10
    outer = x[..., :, None] * x[..., None, :]
    closed = 18.0 / r8 * _EYE3 + 36.0 * outer / r10

    t = coupling_gradient(x)
    contracted = np.einsum("...lij,...qij->...lq", t, t)

    scale = np.max(np.abs(closed), axis=(-2, -1), keepdims=True)
    mismatch = np.max(np.abs(closed - contracted) / scale)
    if mismatch > check_tol:
        raise InternalConsistencyError(
            f"closed-form and contracted friction kernels disagree: "
            f"relative mismatch {mismatch:.3e} > {check_tol:.3e}")
    return closed
