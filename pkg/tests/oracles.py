"""Reference computations that share no code with the package."""
from fractions import Fraction

import numpy as np


def sign_change_count(coeffs_asc, a, b, n=1_000_000):
    """Sign changes of a polynomial sampled at ``n`` evenly spaced points of [a, b]."""
    x = np.linspace(a, b, n)
    v = np.polyval(np.asarray(coeffs_asc, dtype=float)[::-1], x)
    s = np.sign(v)
    s = s[s != 0]
    return int(np.count_nonzero(s[1:] != s[:-1]))


def exact_incidence(s, i, r, c_s, c_i, c_r):
    s, i, r, c_s, c_i, c_r = map(Fraction, (s, i, r, c_s, c_i, c_r))
    return c_s * c_i / (s * c_s + i * c_i + r * c_r)


def exact_cubic(r0, r_mu, r_phi, kappa, theta):
    """Endemic-cubic coefficients in exact rational arithmetic."""
    R0, m, f, k, t = map(Fraction, (r0, r_mu, r_phi, kappa, theta))
    one = Fraction(1)
    a3 = f * f * R0 - m * f * f * (one - k)
    a2 = f * (R0 * (one - f) + m * (R0 + f) - m * (one - m) * (one - t) - m * (one + m) * (one - k))
    a1 = m * (R0 * (one - f) + f * (one - R0) - (one - m) * (one - t) + m * f - m * (one - k))
    a0 = m * m * (one - R0)
    return a0, a1, a2, a3


def field(p, c):
    def f(_t, y):
        s, i, r = y
        g = c.c_s * c.c_i / (s * c.c_s + i * c.c_i + r * c.c_r)
        inf = p.beta * g * s * i
        return [p.mu - p.mu * s - inf, inf + p.phi * r * i - (p.gamma + p.mu) * i,
                p.gamma * i - p.phi * r * i - p.mu * r]
    return f


def fd_jacobian(p, c, y, h=1e-6):
    f = field(p, c)
    J = np.zeros((3, 3))
    for j in range(3):
        up = np.array(y, dtype=float)
        dn = np.array(y, dtype=float)
        up[j] += h
        dn[j] -= h
        J[:, j] = (np.array(f(0, up)) - np.array(f(0, dn))) / (2 * h)
    return J


def endemic_scan(p, c, n=2_000_001):
    """Endemic i* from sign changes of the per-capita infected growth rate on (0, 1]."""
    i = np.linspace(1e-9, 1.0, n)
    r = p.gamma * i / (p.phi * i + p.mu)
    s = 1.0 - i - r
    ok = s >= 0
    i, r, s = i[ok], r[ok], s[ok]
    g = c.c_s * c.c_i / (s * c.c_s + i * c.c_i + r * c.c_r)
    h = p.beta * g * s + p.phi * r - (p.gamma + p.mu)
    k = np.nonzero(np.sign(h[1:]) != np.sign(h[:-1]))[0]
    return [0.5 * (i[j] + i[j + 1]) for j in k]
