"""Special-function layer: archimedean gamma factors and K-Bessel evaluators.

Frozen reference values were produced by an independent oracle script
(mpmath.besselk / closed-form gamma identities) before the library code
under test was written.
"""

import math

import numpy as np
import pytest
from mpmath import mp, mpc, mpf

from periodmoments.precision import PoleError, working_dps
from periodmoments.special import (
    bessel_k,
    bessel_k_ex,
    dirichlet_beta,
    gamma_r,
    k_real_order_f64,
    kit_f64,
    lam,
    log_gamma_r_f64,
    log_k_f64,
    upper_gamma_f64,
    upper_incomplete_gamma,
    zeta,
)

# Oracle: mpmath.besselk(0, 1), 30 digits, computed independently.
K0_AT_1 = "0.421024438240708333335627379213"
# Oracle: Re K_{i/2}(10) via mpmath.besselk(0.5j, 10).
K_HALF_I_AT_10 = "0.00001756910770414134783071906"


def test_gamma_r_value():
    with working_dps(30):
        # gamma_r(1) = pi^{-1/2} Gamma(1/2) = 1
        assert abs(gamma_r(1) - 1) < mpf("1e-28")
        # gamma_r(2) = pi^{-1} Gamma(1) = 1/pi
        assert abs(gamma_r(2) - 1 / mp.pi) < mpf("1e-28")


def test_gamma_r_duplication():
    # gamma_r(s) gamma_r(s+1) = 2 (2 pi)^{-s} Gamma(s), valid off poles.
    rng = np.random.default_rng(7)
    with working_dps(35):
        for _ in range(100):
            s = mpc(rng.uniform(0.1, 3.0), rng.uniform(-10.0, 10.0))
            lhs = gamma_r(s) * gamma_r(s + 1)
            rhs = 2 * (2 * mp.pi) ** (-s) * mp.gamma(s)
            assert abs(lhs - rhs) / abs(rhs) < mpf("1e-30")


def test_gamma_r_pole():
    with pytest.raises(PoleError):
        gamma_r(0)
    with pytest.raises(PoleError):
        gamma_r(-2)


def test_zeta_and_lambda_poles():
    with pytest.raises(PoleError):
        zeta(1)
    with pytest.raises(PoleError):
        lam(0)
    with pytest.raises(PoleError):
        lam(1)
    with working_dps(30):
        # lam(2) = pi/6: gamma_r(2) zeta(2) = (1/pi)(pi^2/6)
        assert abs(lam(2) - mp.pi / 6) < mpf("1e-28")


def test_dirichlet_beta():
    with working_dps(30):
        assert abs(dirichlet_beta(1) - mp.pi / 4) < mpf("1e-27")
        assert abs(dirichlet_beta(2) - mp.catalan) < mpf("1e-27")
        # beta(3) = pi^3/32
        assert abs(dirichlet_beta(3) - mp.pi**3 / 32) < mpf("1e-27")


def test_bessel_k_frozen_values():
    with working_dps(30):
        v = bessel_k(0, 1)
        assert abs(v - mpf(K0_AT_1)) < mpf("1e-28")
        w = bessel_k(mpc(0, "0.5"), 10)
        # frozen literal carries 25 significant digits
        assert abs(w - mpf(K_HALF_I_AT_10)) < mpf("5e-30")


def test_bessel_k_against_mpmath_grid():
    # Independent algorithm cross-check: our cosh-transform quadrature vs
    # mpmath's hypergeometric/asymptotic besselk.
    with working_dps(30):
        for t in (mpf(0), mpf("0.3"), mpf(2), mpf(7)):
            for x in (mpf("0.05"), mpf("0.7"), mpf(3), mpf(25)):
                ours = bessel_k(mpc(0, t), x)
                ref = mp.besselk(mpc(0, t), x).real
                scale = max(abs(ref), mpf("1e-30"))
                assert abs(ours - ref) / scale < mpf("1e-25"), (t, x)


def test_bessel_k_order_symmetry():
    with working_dps(30):
        a = bessel_k(mpc(0, "1.3"), mpf("0.9"))
        b = bessel_k(mpc(0, "-1.3"), mpf("0.9"))
        assert abs(a - b) < mpf("1e-28") * max(1, abs(a))


def test_bessel_k_underflow_flag():
    with working_dps(30):
        v, under = bessel_k_ex(0, 800)
        # K_0(800) ~ 1.6e-349, below the smallest subnormal double.
        assert under is True
        assert v >= 0
        v2, under2 = bessel_k_ex(0, 1)
        assert under2 is False
        assert abs(v2 - mpf(K0_AT_1)) < mpf("1e-28")


def test_bessel_k_domain():
    with pytest.raises(ValueError):
        bessel_k(0, -1)
    with pytest.raises(ValueError):
        bessel_k(0, 0)


def test_upper_incomplete_gamma():
    with working_dps(30):
        # Gamma(1/2, 2) = sqrt(pi) erfc(sqrt(2)); frozen from erfc oracle.
        ref = mpf("0.0806471179603176907886260730213")
        assert abs(upper_incomplete_gamma(mpf("0.5"), 2) - ref) < mpf("1e-28")
        # Gamma(1, x) = e^{-x}
        assert abs(upper_incomplete_gamma(1, mpf("3.7")) - mp.exp(-mpf("3.7"))) < mpf("1e-28")


def test_log_gamma_r_f64():
    # against mpmath at double precision
    for z in (0.8, 2.0, 3.5 + 2.0j, 0.5 - 7.0j):
        ours = log_gamma_r_f64(z)
        ref = complex(mp.log(mp.pi) * (-mp.mpmathify(z) / 2) + mp.loggamma(mp.mpmathify(z) / 2))
        assert abs(ours - ref) < 1e-12 * max(1.0, abs(ref))


def test_k_real_order_f64_and_log():
    ref = float(mpf(K0_AT_1))
    assert abs(k_real_order_f64(0.0, 1.0) - ref) < 1e-14
    assert abs(math.exp(log_k_f64(11.0, 1.3)) - float(mp.besselk(11, mpf("1.3")))) < 1e-11 * float(
        mp.besselk(11, mpf("1.3"))
    )


def test_kit_f64_grid():
    # Vectorized double-precision K_{it}(x) vs mpmath, both x-branches.
    xs = np.array([0.03, 0.4, 1.0, 2.5, 8.0, 30.0])
    for t in (0.0, 0.05, 0.3, 2.0, 7.0):
        ours = kit_f64(t, xs)
        for j, x in enumerate(xs):
            ref = float(mp.besselk(mpc(0, t), mpf(x)).real)
            scale = max(abs(ref), 1e-280)
            assert abs(ours[j] - ref) / scale < 5e-12, (t, x)


def test_upper_gamma_f64_negative_order():
    # Gamma(-3/2, x) via recurrence vs mpmath.
    for x in (0.3, 1.0, 4.0):
        ours = upper_gamma_f64(-1.5, x)
        ref = float(mp.gammainc(mpf("-1.5"), mpf(x)))
        assert abs(ours - ref) / abs(ref) < 1e-11


def test_precision_env_and_context():
    before = mp.dps
    with working_dps(55):
        assert mp.dps == 55
        inner = zeta(2)
        assert abs(inner - mp.pi**2 / 6) < mpf("1e-50")
    assert mp.dps == before
