"""Interface fluxes: the anti-dissipative (downwind, clamped) flux, WENO5 and upwind.

Every function broadcasts over numpy arrays, so the same code evaluates one
interface or a whole grid line.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import InvariantViolation, StabilityError

WENO_EPS = 1e-10
WENO_LINEAR_WEIGHTS = (0.1, 0.6, 0.3)

# slack on nu*|V| <= 1 before a step is rejected
CFL_TOL = 1e-12


@dataclass(frozen=True)
class FluxBounds:
    """Admissible-flux data at one interface (or arrays of interfaces).

    ``m``/``M`` bracket the two adjacent cells, ``b``/``B`` are the stability
    bounds of the upwind cell, ``script_B`` is ``B`` with the positivity cap
    applied, and the admissible interval is ``[mu, script_M]``.
    """

    m: np.ndarray
    M: np.ndarray
    b: np.ndarray
    B: np.ndarray
    script_B: np.ndarray
    mu: np.ndarray
    script_M: np.ndarray


def admissible_interval(up, back, down, v_out, v_back, nu) -> FluxBounds:
    """Bounds at the outflow interface of an upwind cell, in flow-aligned form.

    Parameters
    ----------
    up, back, down
        Value of the upwind cell, of its other neighbour (behind it along the
        flow) and of the downwind cell.
    v_out
        Speed ``|V|`` through the interface.
    v_back
        Velocity through the upwind cell's other interface, positive when it
        points the same way as the flow at this interface.
    nu
        ``dt / dx``.
    """
    up, back, down, v_out, v_back = np.broadcast_arrays(
        *(np.asarray(a, dtype=float) for a in (up, back, down, v_out, v_back))
    )
    courant = nu * v_out
    if np.any(courant > 1.0 + CFL_TOL):
        raise StabilityError(f"CFL violated: nu*|V| = {np.max(courant):.6g} > 1")

    m = np.minimum(up, down)
    M = np.maximum(up, down)
    m_back = np.minimum(up, back)
    M_back = np.maximum(up, back)

    moving = courant > 0.0
    # divide rather than multiply by 1/courant: a subnormal Courant number must
    # give an infinite (harmless) bound, never 0 * inf
    with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
        c_safe = np.where(moving, courant, 1.0)
        b = (up - M_back) / c_safe + M_back
        B = (up - m_back) / c_safe + m_back
        cap = (m_back * v_back + up / np.where(moving, nu, 1.0)) / np.where(moving, v_out, 1.0)
    script_B = np.where(m_back >= 0.0, np.minimum(B, cap), B)

    # velocities of opposite sign on the two faces of the upwind cell
    mixed = moving & ~(v_back > 0.0)
    b = np.where(mixed, up, b)
    B = np.where(mixed, up, B)
    script_B = np.where(mixed, up, script_B)

    # nothing crosses the face: any value in [m, M] is conservative
    b = np.where(moving, b, m)
    B = np.where(moving, B, M)
    script_B = np.where(moving, script_B, M)

    mu = np.maximum(m, b)
    script_M = np.minimum(M, script_B)
    return FluxBounds(m, M, b, B, script_B, mu, script_M)


def flux_bounds(f_prev, f_curr, f_next, V_left, V_right, nu) -> FluxBounds:
    """Admissible interval at the outflow face of cell ``curr``.

    With ``V_right > 0`` the face is the right one (``m``/``M`` from
    ``curr, next``); with ``V_left < 0`` and ``V_right <= 0`` it is the left one
    (``m``/``M`` from ``prev, curr``). When neither face carries outflow the
    right face is returned with the degenerate interval ``[m, M]``.
    """
    f_prev, f_curr, f_next, V_left, V_right = np.broadcast_arrays(
        *(np.asarray(a, dtype=float) for a in (f_prev, f_curr, f_next, V_left, V_right))
    )
    rightward = V_right > 0.0
    leftward = ~rightward & (V_left < 0.0)
    back = np.where(leftward, f_next, f_prev)
    down = np.where(leftward, f_prev, f_next)
    v_out = np.where(leftward, -V_left, np.maximum(V_right, 0.0))
    v_back = np.where(leftward, -V_right, V_left)
    return admissible_interval(f_curr, back, down, v_out, v_back, nu)


def adm_flux(bounds: FluxBounds, downwind, check: bool = True):
    """Downwind value clamped into ``[mu, script_M]``."""
    mu, top = bounds.mu, bounds.script_M
    if check:
        scale = np.maximum(np.maximum(np.abs(mu), np.abs(top)), 1.0)
        if np.any(mu > top + 8.0 * np.finfo(float).eps * scale):
            raise InvariantViolation("empty admissible flux interval (CFL breached upstream?)")
    return np.minimum(np.maximum(downwind, mu), np.maximum(top, mu))


def weno5_reconstruct(v0, v1, v2, v3, v4, eps: float = WENO_EPS):
    """Jiang-Shu WENO5 value at the right face of the cell holding ``v2``.

    The stencil ``v0..v4`` is ordered along the upwind direction, so passing a
    reversed stencil gives the right-biased reconstruction.
    """
    q0 = (2.0 * v0 - 7.0 * v1 + 11.0 * v2) / 6.0
    q1 = (-v1 + 5.0 * v2 + 2.0 * v3) / 6.0
    q2 = (2.0 * v2 + 5.0 * v3 - v4) / 6.0

    beta0 = 13.0 / 12.0 * (v0 - 2.0 * v1 + v2) ** 2 + 0.25 * (v0 - 4.0 * v1 + 3.0 * v2) ** 2
    beta1 = 13.0 / 12.0 * (v1 - 2.0 * v2 + v3) ** 2 + 0.25 * (v1 - v3) ** 2
    beta2 = 13.0 / 12.0 * (v2 - 2.0 * v3 + v4) ** 2 + 0.25 * (3.0 * v2 - 4.0 * v3 + v4) ** 2

    d0, d1, d2 = WENO_LINEAR_WEIGHTS
    a0 = d0 / (eps + beta0) ** 2
    a1 = d1 / (eps + beta1) ** 2
    a2 = d2 / (eps + beta2) ** 2
    return (a0 * q0 + a1 * q1 + a2 * q2) / (a0 + a1 + a2)


def weno5_flux(stencil, upwind_from_left: bool = True):
    """WENO5 interface value from five consecutive cells ``stencil[..., 0:5]``.

    For ``upwind_from_left`` the face sits between ``stencil[2]`` and
    ``stencil[3]`` and the reconstruction is left-biased; otherwise the face
    sits between ``stencil[1]`` and ``stencil[2]`` and the stencil is mirrored.
    """
    s = np.asarray(stencil, dtype=float)
    if s.shape[-1] != 5:
        raise ValueError("WENO5 needs a five-cell stencil")
    if not upwind_from_left:
        s = s[..., ::-1]
    return weno5_reconstruct(s[..., 0], s[..., 1], s[..., 2], s[..., 3], s[..., 4])


def upwind_flux(f_left, f_right, V):
    V = np.asarray(V, dtype=float)
    return np.where(V > 0.0, f_left, np.where(V < 0.0, f_right, 0.5 * (np.asarray(f_left) + f_right)))
