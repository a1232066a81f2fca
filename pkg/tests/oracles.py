"""Independent scalar re-implementations used as test oracles.

These are deliberately written as plain per-case Python arithmetic, without
sharing code or branch structure with the vectorised package kernels.
"""
import math


def brute_force_bounds(f_prev, f_curr, f_next, V_left, V_right, nu):
    """Seven bound quantities at the outflow face of the middle cell.

    Returns ``(m, M, b, B, script_B, mu, script_M)``; ``B`` is ``None`` where
    only ``b`` and ``script_B`` are prescribed (mixed-sign case). A face with
    no outflow gets the degenerate interval ``[m, M]`` of the right face.
    """
    if V_right > 0.0:
        # right face i+1/2 of cell i = curr
        m = min(f_curr, f_next)
        M = max(f_curr, f_next)
        if V_left > 0.0:
            m_back = min(f_curr, f_prev)
            M_back = max(f_curr, f_prev)
            b = (1.0 / (nu * V_right)) * (f_curr - M_back) + M_back
            B = (1.0 / (nu * V_right)) * (f_curr - m_back) + m_back
            if m_back >= 0.0:
                sB = min(B, m_back * V_left / V_right + f_curr / (nu * V_right))
            else:
                sB = B
        else:
            b = sB = f_curr
            B = None
    elif V_left < 0.0:
        # left face i-1/2 of cell i = curr, flow towards prev
        m = min(f_prev, f_curr)
        M = max(f_prev, f_curr)
        if V_right < 0.0:
            m_back = min(f_curr, f_next)
            M_back = max(f_curr, f_next)
            s = abs(V_left)
            b = (1.0 / (nu * s)) * (f_curr - M_back) + M_back
            B = (1.0 / (nu * s)) * (f_curr - m_back) + m_back
            if m_back >= 0.0:
                sB = min(B, m_back * abs(V_right) / s + f_curr / (nu * s))
            else:
                sB = B
        else:
            b = sB = f_curr
            B = None
    else:
        m = min(f_curr, f_next)
        M = max(f_curr, f_next)
        b, B, sB = m, M, M
    return m, M, b, B, sB, max(m, b), min(M, sB)


def bound_scale(f_prev, f_curr, f_next, V_left, V_right, nu):
    """Magnitude of the largest intermediate term in the bound formulas."""
    fmax = max(abs(f_prev), abs(f_curr), abs(f_next), 1.0)
    vout = max(abs(V_left), abs(V_right))
    vmin = min(abs(v) for v in (V_left, V_right) if v != 0.0) if (V_left or V_right) else 1.0
    r = 1.0 / (nu * vmin) if nu * vmin > 0 else 1.0
    return fmax * (1.0 + r) * (1.0 + vout / vmin)


def ssprk3_shu_osher(u, dt, R):
    """Three-stage SSP Runge-Kutta in its convex-combination form."""
    u1 = u + dt * R(u)
    u2 = 0.75 * u + 0.25 * (u1 + dt * R(u1))
    return u / 3.0 + 2.0 / 3.0 * (u2 + dt * R(u2))


def simpson_reference(g, a, b, n=20001):
    """Fine composite Simpson value of the integral of ``g`` on ``[a, b]``."""
    h = (b - a) / (n - 1)
    total = g(a) + g(b)
    for k in range(1, n - 1):
        total += (4.0 if k % 2 else 2.0) * g(a + k * h)
    return total * h / 3.0


def gaussian_moment_exact(amplitude, rate, center):
    """Exact ``int_R xi * A exp(-rate (xi - center)^2) dxi``."""
    return amplitude * center * math.sqrt(math.pi / rate)
