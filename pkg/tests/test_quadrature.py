"""Quadrature layer: spec'd schemes, convergence reporting, determinism."""

import pytest
from mpmath import mp, mpf

from periodmoments.precision import NonConvergenceError, working_dps
from periodmoments.quadrature import (
    SCHEMES,
    QuadratureSpec,
    gauss_legendre,
    integrate,
    trapezoid_mp,
)

# Oracle (closed form, written before the integrator):
#   int_0^inf K_0(2 pi y)^2 y^{1/2} dy/y
#     = (2 pi)^{-1/2} 2^{-5/2} Gamma(1/4)^4 / Gamma(1/2)
# via the Mellin transform of a product of two K-Bessel functions.
MELLIN_K0K0 = "6.87518581802037282749009577981"


def test_spec_validation():
    assert set(SCHEMES) == {"de-halfline", "tensor-box", "mc-box"}
    with pytest.raises(ValueError):
        QuadratureSpec(scheme="simpson")
    with pytest.raises(ValueError):
        QuadratureSpec(scheme="de-halfline", max_levels=0)
    with pytest.raises(ValueError):
        QuadratureSpec(scheme="de-halfline", tolerance=-1.0)


def test_de_halfline_exponential():
    spec = QuadratureSpec(scheme="de-halfline", tolerance=1e-25)
    with working_dps(30):
        v, _ = integrate(lambda y: mp.exp(-y), ("halfline", 0), spec)
        assert abs(v - 1) < mpf("1e-24")


def test_de_halfline_shifted_gamma():
    # int_2^inf e^{-y} (y-2)^3 dy = 6 e^{-2} ... actually Gamma(4) e^{-2}? no:
    # substitute u = y-2: int_0^inf e^{-u-2} u^3 du = 6 e^{-2}.
    spec = QuadratureSpec(scheme="de-halfline", tolerance=1e-25)
    with working_dps(30):
        v, _ = integrate(lambda y: mp.exp(-y) * (y - 2) ** 3, ("halfline", 2), spec)
        assert abs(v - 6 * mp.exp(-2)) < mpf("1e-24")


def test_de_halfline_bessel_mellin_oracle():
    # integrand from mpmath (independent of our K evaluator): this test
    # exercises the DE rule against the closed-form Mellin value
    spec = QuadratureSpec(scheme="de-halfline", tolerance=1e-18, max_levels=9)
    with working_dps(25):
        v, _ = integrate(
            lambda y: mp.besselk(0, 2 * mp.pi * y) ** 2 * y ** mpf("-0.5"),
            ("halfline", 0),
            spec,
        )
        assert abs(v - mpf(MELLIN_K0K0)) < mpf("1e-16")


def test_de_halfline_nonconvergence_carries_best():
    spec = QuadratureSpec(scheme="de-halfline", tolerance=1e-40, max_levels=2)
    with working_dps(20):
        with pytest.raises(NonConvergenceError) as exc:
            integrate(lambda y: mp.exp(-y), ("halfline", 0), spec)
        assert exc.value.best is not None
        assert abs(exc.value.best - 1) < mpf("0.01")


def test_tensor_box_polynomial():
    spec = QuadratureSpec(scheme="tensor-box", tolerance=1e-13, base_points=16)
    with working_dps(30):
        v, _ = integrate(lambda x, y: x * x * y, ((0, 1), (0, 2)), spec)
        assert abs(v - mpf(2) / 3) < mpf("1e-12")


def test_tensor_box_3d():
    spec = QuadratureSpec(scheme="tensor-box", tolerance=1e-12, base_points=12)
    with working_dps(25):
        v, _ = integrate(
            lambda x, y, z: mp.sin(x) * mp.cos(y) * z,
            ((0, mp.pi), (0, mp.pi / 2), (0, 1)),
            spec,
        )
        assert abs(v - 1) < mpf("1e-11")


def test_mc_box_smoke():
    spec = QuadratureSpec(scheme="mc-box", tolerance=5e-3, seed=11, base_points=4096)
    with working_dps(20):
        v, _ = integrate(lambda x, y: x + y, ((0, 1), (0, 1)), spec)
        assert abs(v - 1) < mpf("0.02")


def test_mc_box_seeded_determinism():
    spec = QuadratureSpec(scheme="mc-box", tolerance=5e-3, seed=42, base_points=2048)
    with working_dps(20):
        a, _ = integrate(lambda x, y: x * y, ((0, 1), (0, 1)), spec)
        b, _ = integrate(lambda x, y: x * y, ((0, 1), (0, 1)), spec)
    assert a == b


def test_de_halfline_determinism():
    spec = QuadratureSpec(scheme="de-halfline", tolerance=1e-20)
    with working_dps(30):
        a, _ = integrate(lambda y: mp.exp(-(y**2)), ("halfline", 0), spec)
        b, _ = integrate(lambda y: mp.exp(-(y**2)), ("halfline", 0), spec)
        assert a == b
        assert abs(a - mp.sqrt(mp.pi) / 2) < mpf("1e-19")


def test_gauss_legendre_exactness():
    # order-n GL integrates degree 2n-1 polynomials exactly
    with working_dps(30):
        nodes, weights = gauss_legendre(6)
        acc = mp.zero
        for x, w in zip(nodes, weights):
            acc += w * x**10
        # nodes come from numpy in double precision: ~1e-15 floor
        assert abs(acc - mpf(2) / 11) < mpf("1e-14")


def test_trapezoid_mp_periodic_band():
    # trapezoid is spectrally exact for trig polynomials over a full period
    with working_dps(30):
        v = trapezoid_mp(lambda x: (1 + mp.cos(2 * mp.pi * x)) ** 2, 0, 1, h0=mpf(1) / 64)
        assert abs(v - mpf(3) / 2) < mpf("1e-25")
