"""Real-analytic Eisenstein series for SL_2(Z) on the upper half plane.

Completed series via its Fourier expansion

  E*(z,s) = lam(2s) y^s + lam(2-2s) y^{1-s}
            + 4 sqrt(y) sum_{n>=1} n^{s-1/2} sigma_{1-2s}(n)
                                   K_{s-1/2}(2 pi n y) cos(2 pi n x)

with lam(w) = pi^{-w/2} Gamma(w/2) zeta(w).  Poles at s = 0, 1 with
residue(s=1) = 1/2 independent of z.  At the center the constant term
degenerates to a log:

  E*(z,1/2) = sqrt(y) (log y + euler - log 4 pi)
              + 4 sqrt(y) sum_{n>=1} d(n) K_0(2 pi n y) cos(2 pi n x).

The unnormalized E = E*/lam(2s) has residue (1/2)/lam(2) = 3/pi at s=1
and vanishes identically at s = 1/2 (scattering -1).
"""

import math

import numpy as np
from mpmath import mp, mpf
from scipy.special import kv

from .precision import PoleError, working_dps
from .special import bessel_k, lam

__all__ = [
    "completed_eisenstein",
    "eisenstein",
    "completed_eisenstein_f64",
    "residue_at_one",
    "CENTER_SNAP",
]

# |s - 1/2| below this evaluates the central limit formula
CENTER_SNAP = 1e-12


def _split_z(z):
    if isinstance(z, tuple):
        x, y = mp.mpf(z[0]), mp.mpf(z[1])
    else:
        z = mp.mpmathify(z)
        x, y = mp.re(z), mp.im(z)
    if not y > 0:
        raise ValueError("upper half plane requires y > 0")
    return x, y


def _divisors(n):
    out = []
    d = 1
    while d * d <= n:
        if n % d == 0:
            out.append(d)
            if d * d != n:
                out.append(n // d)
        d += 1
    return out


def _sigma_power(w, n):
    # sum_{d | n} d^w at working precision (w may be complex)
    return mp.fsum(mp.mpf(d) ** w for d in _divisors(n)) if mp.im(w) == 0 else \
        mp.fsum(mp.exp(w * mp.log(d)) for d in _divisors(n))


def _n_terms_mp(y):
    # exp(-2 pi N y) below the working-digit budget with margin
    return max(8, int(mp.ceil(((mp.dps + 6) * mp.log(10) + 8) / (2 * mp.pi * y))))


def completed_eisenstein(z, s, n_terms=None):
    """E*(z, s) at working precision; z upper half plane, s != 0, 1."""
    x, y = _split_z(z)
    s = mp.mpmathify(s)
    if abs(s) < CENTER_SNAP or abs(s - 1) < CENTER_SNAP:
        raise PoleError("E*(z,s) has poles at s = 0 and s = 1")
    if n_terms is None:
        n_terms = _n_terms_mp(y)
    if abs(s - mpf(1) / 2) <= CENTER_SNAP:
        const = mp.sqrt(y) * (mp.log(y) + mp.euler - mp.log(4 * mp.pi))
        tail = mp.mpf(0)
        for n in range(1, n_terms + 1):
            kval = bessel_k(0, 2 * mp.pi * n * y)
            tail += len(_divisors(n)) * kval * mp.cos(2 * mp.pi * n * x)
        return const + 4 * mp.sqrt(y) * tail
    const = lam(2 * s) * y**s + lam(2 - 2 * s) * y ** (1 - s)
    nu = s - mpf(1) / 2
    tail = mp.mpf(0)
    for n in range(1, n_terms + 1):
        kval = bessel_k(nu, 2 * mp.pi * n * y)
        term = mp.mpf(n) ** nu * _sigma_power(1 - 2 * s, n) * kval * mp.cos(2 * mp.pi * n * x)
        tail += term
    return const + 4 * mp.sqrt(y) * tail


def eisenstein(z, s, n_terms=None):
    """E(z, s) = E*(z, s) / lam(2s); identically zero on the center line."""
    s = mp.mpmathify(s)
    if abs(s - mpf(1) / 2) <= CENTER_SNAP:
        # lam(2s) pole at s=1/2 while E* stays finite
        return mp.mpf(0)
    return completed_eisenstein(z, s, n_terms=n_terms) / lam(2 * s)


def _n_terms_f64(y_min):
    # exp(-45) ~ 3e-20 under the constant term
    return max(8, int(45.0 / (2 * math.pi * y_min)) + 1)


def completed_eisenstein_f64(x, y, s, n_terms=None):
    """Vectorized double-precision E*(z, s) for real s (quadrature grids).

    x, y broadcastable arrays, y > 0.  Constant-term lambdas are computed
    once at working precision and demoted to float.
    """
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    if np.any(y <= 0):
        raise ValueError("upper half plane requires y > 0")
    s = float(s)
    if abs(s) < CENTER_SNAP or abs(s - 1.0) < CENTER_SNAP:
        raise PoleError("E*(z,s) has poles at s = 0 and s = 1")
    y_min = float(np.min(y))
    if n_terms is None:
        n_terms = _n_terms_f64(y_min)
    ns = np.arange(1, n_terms + 1, dtype=float)
    yy = y[..., None]
    xx = x[..., None]
    cosx = np.cos(2 * np.pi * ns * xx)
    if abs(s - 0.5) <= CENTER_SNAP:
        dn = np.array([len(_divisors(n)) for n in range(1, n_terms + 1)], dtype=float)
        kvals = kv(0.0, 2 * np.pi * ns * yy)
        const = np.sqrt(y) * (np.log(y) + float(mp.euler) - math.log(4 * math.pi))
        return const + 4 * np.sqrt(y) * (dn * kvals * cosx).sum(axis=-1)
    with working_dps(30):
        c1 = float(lam(2 * mpf(s)))
        c2 = float(lam(2 - 2 * mpf(s)))
    sig = np.array(
        [sum(d ** (1.0 - 2 * s) for d in _divisors(n)) for n in range(1, n_terms + 1)]
    )
    kvals = kv(s - 0.5, 2 * np.pi * ns * yy)
    const = c1 * y**s + c2 * y ** (1.0 - s)
    return const + 4 * np.sqrt(y) * (ns ** (s - 0.5) * sig * kvals * cosx).sum(axis=-1)


def residue_at_one(z, h=None, completed=False):
    """Residue of E (default) or E* at s = 1 by symmetric Richardson.

    r(h) = h E(z, 1+h); the average of +-h kills the odd Taylor terms and
    one Richardson step removes h^2.  Exact values: 1/2 for E*, 3/pi for E.
    """
    with working_dps(40):
        if h is None:
            h = mpf("1e-3")
        f = completed_eisenstein if completed else eisenstein

        def sym(step):
            up = step * f(z, 1 + step)
            dn = (-step) * f(z, 1 - step)
            return (up + dn) / 2

        r1 = sym(h)
        r2 = sym(h / 2)
        return (4 * r2 - r1) / 3
