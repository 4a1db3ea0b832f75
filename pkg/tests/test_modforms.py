"""Exact cusp-form layer: q-expansions, Miller basis, Hecke eigenforms.

Oracles:
  * Delta via the eta-product q prod (1-q^n)^24 computed here with the
    pentagonal number theorem and schoolbook convolution (independent of
    the module's E4/E6/Kronecker route).
  * k=24 T_2 characteristic polynomial frozen from an exact oracle run:
    x^2 - 1080 x - 20468736, eigenvalues 540 +- 12 sqrt(144169).
"""

from fractions import Fraction

import numpy as np
import pytest
from mpmath import mp, mpf

from periodmoments.modforms import (
    DEFAULT_WEIGHTS,
    charpoly,
    cusp_dim,
    delta_qexp,
    e4_qexp,
    e6_qexp,
    eval_cusp_form_f64,
    hecke_eigenforms,
    hecke_matrix,
    miller_basis,
    poly_mul_trunc,
)
from periodmoments.precision import working_dps

TAU = [0, 1, -24, 252, -1472, 4830, -6048, -16744, 84480, -113643, -115920, 534612, -370944]


def eta24_oracle(n_terms):
    # q prod_{n>=1} (1-q^n)^24: pentagonal numbers + schoolbook convolution
    euler = [0] * (n_terms + 1)
    j = 0
    while j * (3 * j - 1) // 2 <= n_terms:
        for jj in (j, -j) if j else (0,):
            e = jj * (3 * jj - 1) // 2
            if e <= n_terms:
                euler[e] += (-1) ** (jj % 2)
        j += 1
    acc = [1] + [0] * n_terms
    for _ in range(24):
        out = [0] * (n_terms + 1)
        for i, c in enumerate(acc):
            if c == 0:
                continue
            for k2, d in enumerate(euler):
                if i + k2 > n_terms:
                    break
                out[i + k2] += c * d
        acc = out
    return [0] + acc[:n_terms]  # shift by q


def test_sigma_series_heads():
    assert e4_qexp(3) == [1, 240, 2160, 6720]
    assert e6_qexp(3) == [1, -504, -16632, -122976]


def test_poly_mul_trunc_signed():
    a = [3, -2, 0, 7]
    b = [-1, 5, 4]
    # direct convolution
    want = [0] * 4
    for i, x in enumerate(a):
        for j, y in enumerate(b):
            if i + j < 4:
                want[i + j] += x * y
    assert poly_mul_trunc(a, b, 3) == want


def test_delta_matches_eta_product():
    n = 40
    assert delta_qexp(n) == eta24_oracle(n)


def test_tau_values():
    assert delta_qexp(12) == TAU


def test_dimensions():
    assert cusp_dim(11) == 0
    assert cusp_dim(2) == 0
    got = {k: cusp_dim(k) for k in DEFAULT_WEIGHTS}
    want = {12: 1, 16: 1, 18: 1, 20: 1, 22: 1, 24: 2, 26: 1, 28: 2, 30: 2,
            32: 2, 34: 2, 36: 3, 38: 2, 40: 3}
    assert got == want
    assert cusp_dim(14) == 0


def test_miller_basis_echelon_and_integral():
    for k in (24, 36):
        d = cusp_dim(k)
        basis = miller_basis(k, 30)
        assert len(basis) == d
        for i, g in enumerate(basis):
            assert g[0] == 0
            for j in range(1, d + 1):
                assert g[j] == (1 if j == i + 1 else 0)
            # Miller basis of level one is integral
            assert all(c.denominator == 1 for c in g)


def test_hecke_matrix_k24_frozen_charpoly():
    cp = charpoly(hecke_matrix(24, 2))
    assert cp == [Fraction(1), Fraction(-1080), Fraction(-20468736)]


def test_charpoly_faddeev_matches_closed_form():
    # random rational 3x3: closed-form path vs Faddeev-LeVerrier on a
    # padded 4x4 block-diagonal (forces the generic branch)
    rng = np.random.default_rng(5)
    m3 = [[Fraction(int(rng.integers(-9, 10)), int(rng.integers(1, 5))) for _ in range(3)]
          for _ in range(3)]
    closed = charpoly(m3)
    m4 = [[m3[r][c] if r < 3 and c < 3 else Fraction(0) for c in range(4)] for r in range(4)]
    m4[3][3] = Fraction(2)
    generic = charpoly(m4)
    # divide generic by (x - 2): synthetic division
    quo = []
    rem = Fraction(0)
    for c in generic:
        rem = rem * 2 + c
        quo.append(rem)
    assert quo[-1] == 0  # x=2 is a root
    assert quo[:-1] == closed


def test_k12_eigenform_is_delta():
    f = hecke_eigenforms(12, horizon=60)[0]
    with working_dps(50):
        for n in range(1, 13):
            assert abs(f.a[n] - TAU[n]) < mpf("1e-40")


def test_k24_eigenvalues_and_multiplicativity():
    forms = hecke_eigenforms(24, horizon=60)
    assert len(forms) == 2
    with working_dps(55):
        root = 12 * mp.sqrt(144169)
        assert abs(forms[0].a[2] - (540 - root)) < mpf("1e-45")
        assert abs(forms[1].a[2] - (540 + root)) < mpf("1e-45")
        for f in forms:
            # a(6) = a(2) a(3); a(4) = a(2)^2 - 2^{k-1}
            assert abs(f.a[6] - f.a[2] * f.a[3]) < mpf("1e-38")
            assert abs(f.a[4] - (f.a[2] ** 2 - 2**23)) < mpf("1e-38")


def test_deligne_bound_numeric():
    for k in (12, 24, 40):
        for f in hecke_eigenforms(k, horizon=60):
            for p in (2, 3, 5, 7, 11, 13):
                assert abs(f.lam[p]) <= 2.0 + 1e-30


def test_eigenforms_sorted_and_distinct():
    forms = hecke_eigenforms(36, horizon=60)
    vals = [f.t2_eigenvalue for f in forms]
    assert all(vals[i] < vals[i + 1] for i in range(len(vals) - 1))
    assert [f.index for f in forms] == [0, 1, 2]


def test_eval_automorphy():
    # f(-1/z) = z^k f(z) exercises coefficients, normalization and the
    # log-space assembly end to end
    z = 0.31 + 0.87j
    w = -1 / z
    for k in (12, 24):
        for f in hecke_eigenforms(k, horizon=400):
            lhs = eval_cusp_form_f64(f, np.array([w.real]), np.array([w.imag]))[0]
            rhs = z**k * eval_cusp_form_f64(f, np.array([z.real]), np.array([z.imag]))[0]
            assert abs(lhs - rhs) < 1e-12 * abs(rhs)


def test_eval_periodicity_and_domain():
    f = hecke_eigenforms(12, horizon=400)[0]
    a = eval_cusp_form_f64(f, np.array([0.2]), np.array([1.1]))[0]
    b = eval_cusp_form_f64(f, np.array([1.2]), np.array([1.1]))[0]
    assert abs(a - b) < 1e-15 * abs(a)
    with pytest.raises(ValueError):
        eval_cusp_form_f64(f, np.array([0.0]), np.array([-1.0]))
    with pytest.raises(ValueError):
        # horizon 400 cannot reach y ~ 1e-3
        eval_cusp_form_f64(f, np.array([0.0]), np.array([1e-3]))


def test_miller_basis_guards():
    with pytest.raises(ValueError):
        miller_basis(24, 5)
    assert miller_basis(14, 30) == []
