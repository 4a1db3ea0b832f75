"""Quadrature engines: double-exponential half-line, tensor boxes, Monte Carlo.

Three schemes behind one entry point, integrate(f, domain, spec):

* "de-halfline": exp-sinh double-exponential rule on (a, inf). Handles
  integrable endpoint behaviour at a and (sub)exponential decay at
  infinity. Levels halve the step; the error estimate is the last
  level-to-level difference.
* "tensor-box": tensor-product Gauss-Legendre on a 1-3 dimensional box,
  doubling the per-axis order each level.
* "mc-box": plain Monte Carlo on a box with a fixed seed; the error
  estimate is the standard error over batches. Deterministic for a fixed
  spec (seed included), which the CLI requires.

Everything runs in the current mpmath context so the same engine serves
40-digit oracle checks and quick double-precision sanity runs. The error
estimates are last-refinement differences, not certified enclosures.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from mpmath import mp

from .precision import NonConvergenceError

SCHEMES = ("de-halfline", "tensor-box", "mc-box")


@dataclass(frozen=True)
class QuadratureSpec:
    scheme: str = "de-halfline"
    max_levels: int = 8
    tolerance: float = 1e-12
    base_points: int = 24
    seed: int = 0

    def __post_init__(self):
        if self.scheme not in SCHEMES:
            raise ValueError("scheme must be one of %r" % (SCHEMES,))
        if self.max_levels < 1:
            raise ValueError("max_levels must be >= 1")
        if not self.tolerance > 0:
            raise ValueError("tolerance must be > 0")


def _de_halfline(f, a, spec):
    # x = a + exp((pi/2) sinh t); the trapezoid rule in t converges
    # geometrically once the step resolves the double-exponential decay.
    pi_half = mp.pi / 2
    # t-range so the transformed abscissas cover [a + 1e-2(dps+8), huge];
    # the doubled budget keeps algebraic endpoint singularities (x^-1/2,
    # log powers) below the tolerance floor at ~15% extra nodes.
    tmax = mp.asinh(2 * (mp.dps + 8) * mp.log(10) / pi_half)
    best = None
    err = None
    for level in range(spec.max_levels):
        h = mp.mpf(1) / (1 << level)
        total = mp.mpf(0)
        n = int(mp.ceil(tmax / h))
        for i in range(-n, n + 1):
            t = i * h
            u = pi_half * mp.sinh(t)
            x = mp.exp(u)
            w = x * pi_half * mp.cosh(t)
            if not (mp.isfinite(x) and mp.isfinite(w)) or w == 0:
                continue
            total += f(a + x) * w
        total *= h
        if best is not None:
            err = abs(total - best)
            best = total
            if err <= spec.tolerance * max(1, abs(best)):
                return best, err
        else:
            best = total
    raise NonConvergenceError(
        "de-halfline did not converge in %d levels" % spec.max_levels,
        best=best,
        last_delta=err,
    )


def gauss_legendre(order):
    """Nodes and weights on [-1, 1].

    numpy supplies the rule in double precision; a quadrature rule with
    double-precision nodes is still a legitimate rule at any working
    precision, it just caps the attainable accuracy near 1e-15, which is
    all the box scheme promises.
    """
    x, w = np.polynomial.legendre.leggauss(int(order))
    return [mp.mpf(v) for v in x], [mp.mpf(v) for v in w]


def _tensor_box(f, box, spec):
    dims = len(box)
    if dims < 1 or dims > 3:
        raise ValueError("tensor-box handles 1 to 3 dimensions")
    best = None
    err = None
    for level in range(spec.max_levels):
        order = spec.base_points * (1 << level)
        nodes, weights = gauss_legendre(order)
        axes = []
        for (lo, hi) in box:
            lo = mp.mpf(lo)
            hi = mp.mpf(hi)
            mid = (hi + lo) / 2
            half = (hi - lo) / 2
            axes.append(([mid + half * t for t in nodes], [half * w for w in weights]))
        total = mp.mpf(0)
        if dims == 1:
            xs, ws = axes[0]
            for x, w in zip(xs, ws):
                total += w * f(x)
        elif dims == 2:
            xs, wx = axes[0]
            ys, wy = axes[1]
            for x, w1 in zip(xs, wx):
                for y, w2 in zip(ys, wy):
                    total += w1 * w2 * f(x, y)
        else:
            xs, wx = axes[0]
            ys, wy = axes[1]
            zs, wz = axes[2]
            for x, w1 in zip(xs, wx):
                for y, w2 in zip(ys, wy):
                    for z, w3 in zip(zs, wz):
                        total += w1 * w2 * w3 * f(x, y, z)
        if best is not None:
            err = abs(total - best)
            best = total
            if err <= spec.tolerance * max(1, abs(best)):
                return best, err
        else:
            best = total
    raise NonConvergenceError(
        "tensor-box did not converge in %d levels" % spec.max_levels,
        best=best,
        last_delta=err,
    )


def _mc_box(f, box, spec):
    rng = np.random.default_rng(spec.seed)
    dims = len(box)
    vol = mp.mpf(1)
    for (lo, hi) in box:
        vol *= mp.mpf(hi) - mp.mpf(lo)
    batch_means = []
    n_per_batch = max(256, spec.base_points)
    for _ in range(max(4, spec.max_levels)):
        pts = rng.random((n_per_batch, dims))
        acc = mp.mpf(0)
        for row in pts:
            args = [mp.mpf(box[d][0]) + mp.mpf(float(row[d])) * (mp.mpf(box[d][1]) - mp.mpf(box[d][0]))
                    for d in range(dims)]
            acc += f(*args)
        batch_means.append(vol * acc / n_per_batch)
    mean = sum(batch_means) / len(batch_means)
    var = sum((b - mean) ** 2 for b in batch_means) / (len(batch_means) - 1)
    err = mp.sqrt(var / len(batch_means))
    return mean, err


def integrate(f, domain, spec: QuadratureSpec):
    """Integrate f over domain per spec; returns (value, err_estimate).

    domain: ("halfline", a) for (a, inf); or a tuple of (lo, hi) pairs for
    box schemes. Raises NonConvergenceError (with .best and .last_delta)
    when the level budget runs out before the tolerance is met.
    """
    if spec.scheme == "de-halfline":
        if not (isinstance(domain, tuple) and domain[0] == "halfline"):
            raise ValueError('de-halfline expects domain ("halfline", a)')
        return _de_halfline(f, mp.mpf(domain[1]), spec)
    box = tuple(domain)
    if spec.scheme == "tensor-box":
        return _tensor_box(f, box, spec)
    return _mc_box(f, box, spec)


def trapezoid_mp(f, lo, hi, h0=0.1, tol=None, max_halvings=10):
    """Plain trapezoid with step halving, in the current mpmath context.

    For analytic integrands on a finite window (already truncated by the
    caller) the trapezoid converges geometrically; this is the workhorse
    behind the imaginary-order Bessel integral and the Eisenstein residue
    limits, where an explicit, simple rule keeps determinism obvious.
    """
    lo = mp.mpf(lo)
    hi = mp.mpf(hi)
    if tol is None:
        tol = mp.mpf(10) ** (-(mp.dps - 4))
    h = mp.mpf(h0)
    prev = None
    for _ in range(max_halvings):
        n = max(2, int(mp.ceil((hi - lo) / h)))
        step = (hi - lo) / n
        total = (f(lo) + f(hi)) / 2
        for i in range(1, n):
            total += f(lo + i * step)
        total *= step
        if prev is not None and abs(total - prev) <= tol * max(1, abs(total)):
            return total
        prev = total
        h /= 2
    raise NonConvergenceError("trapezoid did not converge", best=prev)
