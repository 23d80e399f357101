"""Williamson machinery, entropies, Petz conditional entropy, overlaps."""

import math

import numpy as np
import pytest

import bosonic as b
from conftest import random_state, random_symplectic


def test_h_function_values():
    assert b.h_function(0.0) == 0.0
    assert b.h_function(1.0) == pytest.approx(2.0, abs=1e-15)
    assert b.h_function(3.0) == pytest.approx(8.0 - 3.0 * math.log2(3.0), abs=1e-14)


def test_williamson_reconstruction():
    rng = np.random.default_rng(17)
    for modes in (1, 2, 3):
        for _ in range(6):
            st = random_state(rng, modes, max_squeeze=2.0)
            s, d = b.williamson(st.cov)
            om = b.symplectic_form(modes)
            assert np.allclose(s @ om @ s.T, om, atol=1e-9)
            rebuilt = s @ np.diag(np.repeat(d, 2)) @ s.T
            scale = np.linalg.norm(st.cov, 2)
            assert np.max(np.abs(rebuilt - st.cov)) <= 1e-10 * scale
            assert np.all(np.diff(d) <= 1e-12)  # descending
            assert np.all(d >= 1.0 - 1e-9)


def test_symplectic_eigenvalues_match_williamson():
    rng = np.random.default_rng(19)
    st = random_state(rng, 3)
    _, d_w = b.williamson(st.cov)
    d_e = b.symplectic_eigenvalues(st.cov)
    assert np.allclose(d_w, d_e, atol=1e-10)


def test_entropy_known_values():
    assert b.von_neumann_entropy(b.vacuum_state()) == pytest.approx(0.0, abs=1e-12)
    assert b.von_neumann_entropy(b.thermal_state(1.0)) == pytest.approx(2.0, abs=1e-12)
    two = b.tensor([b.thermal_state(1.0), b.thermal_state(3.0)])
    expect = 2.0 + b.h_function(3.0)
    assert b.von_neumann_entropy(two) == pytest.approx(expect, abs=1e-12)
    # TMSV is pure
    assert b.von_neumann_entropy(b.tmsv_state(2.0)) == pytest.approx(0.0, abs=1e-9)


def test_entropy_symplectic_invariance():
    rng = np.random.default_rng(29)
    st = random_state(rng, 2)
    s_val = b.von_neumann_entropy(st)
    for _ in range(5):
        s = random_symplectic(rng, 2)
        moved = b.GaussianState(st.mean, s @ st.cov @ s.T)
        assert abs(b.von_neumann_entropy(moved) - s_val) <= 1e-9


def test_coherent_information_product_and_loss():
    two = b.tensor([b.thermal_state(1.0), b.thermal_state(1.0)])
    assert b.coherent_information(two, [0]) == pytest.approx(-2.0, abs=1e-12)
    # loss channel at lam, N_s: I_c = h(lam Ns) - h((1-lam) Ns)
    lam, ns = 0.75, 5.0
    out = b.stinespring_output(b.PureLoss(lam), b.tmsv_state(ns))
    rho_ab = b.reduce_state(out, [0, 1])
    expect = b.h_function(lam * ns) - b.h_function((1 - lam) * ns)
    assert b.coherent_information(rho_ab, [0]) == pytest.approx(expect, abs=1e-9)


def test_v_sqrt_thermal():
    w = b.v_sqrt(3.0 * np.eye(2))
    assert np.allclose(w, (3.0 + 2.0 * math.sqrt(2.0)) * np.eye(2), atol=1e-12)
    # pure covariance is a fixed point
    tm = b.tmsv_state(1.0)
    assert np.allclose(b.v_sqrt(tm.cov), tm.cov, atol=1e-9)


def test_trace_sqrt_thermal():
    # spectrum 2^-(n+1): sum of square roots is 1 + sqrt(2)
    assert b.trace_sqrt(b.thermal_state(1.0)) == pytest.approx(1.0 + math.sqrt(2.0), abs=1e-12)
    assert b.trace_sqrt(b.vacuum_state()) == pytest.approx(1.0, abs=1e-12)


def test_petz_conditional_entropy_product_state():
    # product state: H(A|B) = 2 log2 Tr sqrt(rho_A)
    prod = b.tensor([b.thermal_state(1.0), b.vacuum_state()])
    got = b.petz_conditional_entropy_half(prod, [0])
    assert got == pytest.approx(2.0 * math.log2(1.0 + math.sqrt(2.0)), abs=1e-10)


def test_petz_conditional_entropy_tmsv_schmidt_oracle():
    # Schmidt form: H_{1/2}(A|B) = 2 log2 sum_n p_n^{3/2} for |psi> with
    # Schmidt weights p_n (here geometric with N=1)
    got = b.petz_conditional_entropy_half(b.tmsv_state(1.0), [0])
    oracle = 2.0 * math.log2(sum(2.0 ** (-1.5 * (n + 1)) for n in range(400)))
    assert got == pytest.approx(oracle, abs=1e-10)
    assert got == pytest.approx(-1.7412062532355603, abs=1e-10)


def test_gaussian_overlap_values():
    t1 = b.thermal_state(1.0)
    assert b.gaussian_overlap(t1, t1) == pytest.approx(1.0 / 3.0, abs=1e-13)
    assert b.gaussian_overlap(t1, b.vacuum_state()) == pytest.approx(0.5, abs=1e-13)
    # displaced vacua: |<a|b>|^2 = exp(-|shift|^2/2) in this normalization
    ca = b.apply_transform(b.vacuum_state(), b.displacement([1.0, 0.5]))
    cb = b.vacuum_state()
    expect = math.exp(-(1.0**2 + 0.5**2) / 2.0)
    assert b.gaussian_overlap(ca, cb) == pytest.approx(expect, abs=1e-13)


def test_gaussian_overlap_symmetry():
    rng = np.random.default_rng(31)
    x = random_state(rng, 2)
    y = random_state(rng, 2)
    assert b.gaussian_overlap(x, y) == pytest.approx(b.gaussian_overlap(y, x), rel=1e-12)


def test_thermal_entropy_variance():
    assert b.thermal_entropy_variance(1.0) == 2.0
    assert b.thermal_entropy_variance(0.0) == 0.0
    n = 2.7
    expect = n * (n + 1) * math.log2(1.0 + 1.0 / n) ** 2
    assert b.thermal_entropy_variance(n) == pytest.approx(expect, rel=1e-14)


def test_entropy_variance_cut_aliases_and_boundaries():
    lam, ns = 0.35, 1.4
    assert b.entropy_variance_pure_loss(lam, ns, "A|E") == b.entropy_variance_pure_loss(lam, ns, "A|B")
    assert b.entropy_variance_pure_loss(lam, ns, "B|E") == b.entropy_variance_pure_loss(lam, ns, "B|A")
    for cut in ("A|E", "B|E"):
        assert b.entropy_variance_pure_loss(1.0, ns, cut) == pytest.approx(
            b.thermal_entropy_variance(ns), rel=1e-12)
    assert b.entropy_variance_pure_loss(0.0, ns, "B|E") == 0.0
    assert b.entropy_variance_pure_loss(0.0, ns, "A|E") == pytest.approx(
        b.thermal_entropy_variance(ns), rel=1e-12)
    with pytest.raises(ValueError):
        b.entropy_variance_pure_loss(lam, ns, "E|A")
