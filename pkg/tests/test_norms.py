"""Unit tests for the local norm family and derived constants."""

import math
import warnings

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from trotterlab.norms import (
    fermion_term_bound,
    ladder_part,
    lambda_ferm_k,
    lambda_k,
    lambda_prime_k,
    local_norm,
    norm_profile,
)
from trotterlab.pauli import FermionHamiltonian, FermionTerm, PauliHamiltonian


def zfield(n):
    return PauliHamiltonian.from_labels(
        n, [("I" * i + "Z" + "I" * (n - i - 1), 1.0) for i in range(n)]
    )


def test_disjoint_unit_terms():
    h = zfield(5)
    assert local_norm(h, 0, 2) == pytest.approx(math.sqrt(5))
    assert local_norm(h, 1, 2) == pytest.approx(1.0)
    assert local_norm(h, 1, 1) == pytest.approx(1.0)
    assert local_norm(h, 0, 1) == pytest.approx(5.0)


def test_single_term_all_values_equal():
    h = PauliHamiltonian.from_labels(2, [("ZZ", 3.0)])
    for c in (0, 1, 2):
        for q in (1, 2):
            assert local_norm(h, c, q) == pytest.approx(3.0)


def test_c_above_locality_warns_and_returns_zero():
    h = PauliHamiltonian.from_labels(2, [("ZI", 1.0)])
    with pytest.warns(RuntimeWarning):
        assert local_norm(h, 2, 2) == 0.0


def test_invalid_arguments():
    h = zfield(2)
    with pytest.raises(ValueError):
        local_norm(h, 0, 3)
    with pytest.raises(ValueError):
        local_norm(h, -1, 2)


def zxyz_like(m):
    """Three blocks of m sites: sum Z_a X_b + sum Y_b Z_c, unit coefficients."""
    n = 3 * m
    pairs = []
    for a in range(m):
        for b in range(m, 2 * m):
            label = ["I"] * n
            label[a], label[b] = "Z", "X"
            pairs.append(("".join(label), 1.0))
    for b in range(m, 2 * m):
        for c in range(2 * m, 3 * m):
            label = ["I"] * n
            label[b], label[c] = "Y", "Z"
            pairs.append(("".join(label), 1.0))
    return PauliHamiltonian.from_labels(n, pairs)


@pytest.mark.parametrize("m", [1, 2, 3])
def test_block_model_norms(m):
    h = zxyz_like(m)
    assert h.gamma == 2 * m * m
    assert local_norm(h, 0, 2) == pytest.approx(m * math.sqrt(2.0))
    # middle sites touch 2m terms (m from each block pairing)
    assert local_norm(h, 1, 2) == pytest.approx(math.sqrt(2.0 * m))
    assert local_norm(h, 1, 1) == pytest.approx(2.0 * m)
    assert local_norm(h, 2, 2) == pytest.approx(1.0)


@given(st.integers(min_value=0, max_value=6), st.data())
@settings(max_examples=60, deadline=None)
def test_monotone_in_c_and_q(seed, data):
    rng = np.random.default_rng(seed)
    n = 6
    pairs = []
    for _ in range(rng.integers(2, 12)):
        weight = int(rng.integers(1, 4))
        sites = rng.choice(n, size=weight, replace=False)
        label = ["I"] * n
        for s in sites:
            label[s] = rng.choice(list("XYZ"))
        pairs.append(("".join(label), float(rng.normal())))
    h = PauliHamiltonian.from_labels(n, pairs)
    k = h.k
    values = {(c, q): local_norm(h, c, q) for c in range(k + 1) for q in (1, 2)}
    for c in range(k + 1):
        assert values[(c, 2)] <= values[(c, 1)] + 1e-12
        if c + 1 <= k:
            for q in (1, 2):
                assert values[(c + 1, q)] <= values[(c, q)] + 1e-12
    # Cauchy-Schwarz: ||.||_1 <= sqrt(Gamma) ||.||_2 at c=0
    assert values[(0, 1)] <= math.sqrt(h.gamma) * values[(0, 2)] + 1e-12


def test_lambda_unit_term():
    h = PauliHamiltonian.from_labels(1, [("Z", 1.0)])
    assert lambda_k(h) == pytest.approx(4.0)
    assert lambda_prime_k(h) == pytest.approx(4.0 * math.sqrt(5.0))


def test_lambda_homogeneous_degree_one():
    h = zxyz_like(2)
    h2 = PauliHamiltonian(h.n, [(t.string, 3.0 * t.coeff) for t in h.terms])
    assert lambda_k(h2) == pytest.approx(3.0 * lambda_k(h), rel=1e-12)
    assert lambda_prime_k(h2) == pytest.approx(3.0 * lambda_prime_k(h), rel=1e-12)


def test_lambda_independent_arithmetic_oracle():
    """Straight-line re-evaluation for a k=2 chain with unit couplings."""
    n = 4
    pairs = []
    for i in range(n - 1):
        for p in "XYZ":
            label = ["I"] * n
            label[i] = label[i + 1] = p
            pairs.append(("".join(label), 1.0))
    h = PauliHamiltonian.from_labels(n, pairs)
    # oracle values by hand: every bond has 3 terms. site 1 and 2 touch 6
    # terms each -> ||H||_(1),2 = sqrt(6); a bond subset {i,i+1} is covered by
    # its 3 terms -> ||H||_(2),2 = sqrt(3); ||H||_(0),2 = sqrt(9) = 3.
    assert local_norm(h, 1, 2) == pytest.approx(math.sqrt(6.0))
    assert local_norm(h, 2, 2) == pytest.approx(math.sqrt(3.0))
    expected_lambda = (2.0 ** 2.0 / 1.0) * (
        2.0 ** 0.5 / 1.0 * math.sqrt(6.0) + 2.0 / 1.0 * math.sqrt(3.0)
    )
    assert lambda_k(h) == pytest.approx(expected_lambda, rel=1e-12)
    expected_lp = 2.0 * (
        2.0 * math.sqrt(20.0) * math.sqrt(6.0 * 9.0)
        + 1.0 * 20.0 * math.sqrt(3.0 * 9.0 / 2.0)
    )
    assert lambda_prime_k(h) == pytest.approx(expected_lp, rel=1e-12)


def hop(i, j, coeff=1.0):
    return [
        FermionTerm(((i, "+"), (j, "-")), coeff),
        FermionTerm(((j, "+"), (i, "-")), coeff),
    ]


def fermi_hop_like(m):
    terms = []
    for a in range(m):
        for b in range(m, 2 * m):
            terms.extend(hop(a, b))
    for b in range(m, 2 * m):
        for c in range(2 * m, 3 * m):
            terms.extend(hop(b, c))
    return FermionHamiltonian(3 * m, terms)


def test_fermion_term_bounds_are_unit_for_hopping():
    f = fermi_hop_like(1)
    for t in f.terms:
        assert fermion_term_bound(t, f.n) == pytest.approx(1.0)


def test_fermion_number_operator_bound():
    t = FermionTerm(((0, "+"), (0, "-")), 2.0)
    assert fermion_term_bound(t, 2) == pytest.approx(2.0)


def test_fermion_occupation_bound_depends_on_eta():
    t = FermionTerm(((0, "z"),), 1.0, eta=0.25)
    assert fermion_term_bound(t, 1) == pytest.approx(0.75)


@pytest.mark.parametrize("m", [1, 2])
def test_fermionic_ladder_zero_two(m):
    f = fermi_hop_like(m)
    assert local_norm(ladder_part(f), 0, 2) == pytest.approx(2.0 * m)


def test_lambda_ferm_occupation_only_equals_lambda():
    f = FermionHamiltonian(
        2, [FermionTerm(((0, "z"),), 1.0), FermionTerm(((1, "z"),), 1.0)]
    )
    assert lambda_ferm_k(f) == pytest.approx(lambda_k(f), rel=1e-12)


def test_lambda_ferm_requires_number_preservation():
    f = FermionHamiltonian(2, [FermionTerm(((0, "+"),), 1.0)])
    with pytest.raises(ValueError):
        lambda_ferm_k(f)


def test_lambda_ferm_hopping_adds_extra_term():
    f = fermi_hop_like(1)
    k = f.k
    assert k == 2
    extra = 2.0 ** 2.0 / math.factorial(1) / math.factorial(2) * 2.0
    assert lambda_ferm_k(f) == pytest.approx(lambda_k(f) + extra, rel=1e-12)


def test_profile_collects_everything():
    prof = norm_profile(zxyz_like(2))
    assert prof.gamma == 8
    assert prof.k == 2
    assert set(prof.norms) == {(c, q) for c in (0, 1, 2) for q in (1, 2)}
    assert prof.lambda_ferm_k is None
    fprof = norm_profile(fermi_hop_like(1))
    assert fprof.ferm_zero_two == pytest.approx(2.0)
    assert fprof.lambda_ferm_k is not None


def test_zero_two_matches_dense_normalized_norm():
    """||H||_(0),2 equals the normalized Frobenius norm for distinct strings."""
    h = zxyz_like(1)
    mats = {"I": np.eye(2), "X": np.array([[0, 1], [1, 0]]),
            "Y": np.array([[0, -1j], [1j, 0]]), "Z": np.diag([1, -1])}
    dense = np.zeros((8, 8), dtype=complex)
    for t in h.terms:
        m = np.array([[1.0]])
        for ch in t.string.label():
            m = np.kron(m, mats[ch])
        dense += t.coeff * m
    normalized_two = np.linalg.norm(dense, "fro") / math.sqrt(8)
    assert local_norm(h, 0, 2) == pytest.approx(normalized_two, rel=1e-12)
