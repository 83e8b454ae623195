"""The local norm family ||H||_{(c),q} and the derived step-constant factors.

For a Hamiltonian H = sum_gamma H_gamma with per-term bounds
b_gamma >= ||H_gamma||, the family is

    ||H||_{(c),2} = sqrt( max_{|S_c| = c} sum_{gamma : S_c subset Supp(H_gamma)} b_gamma^2 ),
    ||H||_{(c),1} =       max_{|S_c| = c} sum_{gamma : S_c subset Supp(H_gamma)} b_gamma,

with c = 0 the global (max-free) sum.  Both are nonincreasing in c and the
2-norm never exceeds the 1-norm.  The derived constants are

    lambda(k)      = (2^{k/2+1}/(k-1)!) * sum_{j=1}^{k} (2^{j/2}/(k-j)!) ||H||_{(j),2},
    lambda'(k)     = 2 * sum_{j=1}^{k} C(k,j) sqrt(20)^j sqrt( ||H||_{(j),1} ||H||_{(0),1} / j! ),
    lambda_ferm(k) = lambda(k) + (2^{k/2+1}/(k-1)!) (1/k!) ||H_ladder||_{(0),2},

where H_ladder keeps only the fermionic terms containing at least one
creation or annihilation factor.  Per-term bounds: |coeff| for Pauli terms
(strings are unitary); for fermionic terms, |coeff| times the product of the
spectral norms of the per-site 2x2 Jordan-Wigner factor products (exact,
since every fermionic monomial maps to a single tensor product).
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field
from itertools import combinations
from typing import Optional, Union

import numpy as np

from .pauli import (
    FermionHamiltonian,
    PauliHamiltonian,
    fermion_term_site_matrices,
)

AnyHamiltonian = Union[PauliHamiltonian, FermionHamiltonian]


@dataclass(frozen=True)
class NormProfile:
    """All local norms and derived constants of one Hamiltonian."""

    gamma: int
    k: int
    norms: dict[tuple[int, int], float]  # (c, q) -> value, q in {1, 2}
    lambda_k: float
    lambda_prime_k: float
    lambda_ferm_k: Optional[float] = None
    ferm_zero_two: Optional[float] = None
    bounds: tuple[float, ...] = field(default=(), repr=False)

    def norm(self, c: int, q: int) -> float:
        return self.norms[(c, q)]


def _term_data(h: AnyHamiltonian) -> list[tuple[tuple[int, ...], float]]:
    """(support, bound) per term."""
    if isinstance(h, PauliHamiltonian):
        return [(t.support(), t.bound) for t in h.terms]
    if isinstance(h, FermionHamiltonian):
        return [(t.support(), fermion_term_bound(t, h.n)) for t in h.terms]
    raise TypeError(f"unsupported Hamiltonian type {type(h).__name__}")


def fermion_term_bound(term, n: int) -> float:
    """b_gamma = |coeff| * prod_s ||M_s|| over the per-site JW factor products.

    Zero terms (repeated same-site ladder factors) have bound 0.
    """
    if term.is_zero:
        return 0.0
    bound = abs(term.coeff)
    mats = fermion_term_site_matrices(term, n)
    for site in term.support():
        bound *= float(np.linalg.norm(mats[site], 2))
    return bound


def local_norm(h: AnyHamiltonian, c: int, q: int) -> float:
    """||H||_{(c),q} by exact enumeration of size-c subsets of term supports.

    Only subsets occurring inside some term support are visited (never all
    C(n, c) subsets).  c greater than the locality k returns 0 with a warning.
    """
    if q not in (1, 2):
        raise ValueError(f"q must be 1 or 2, got {q}")
    if c < 0:
        raise ValueError(f"c must be nonnegative, got {c}")
    data = _term_data(h)
    k = max((len(sup) for sup, _ in data), default=0)
    if c > k:
        warnings.warn(
            f"local norm requested at c={c} above the Hamiltonian locality k={k}; "
            "no term support contains such a subset (returning 0)",
            RuntimeWarning,
            stacklevel=2,
        )
        return 0.0
    if c == 0:
        if q == 2:
            return math.sqrt(sum(b * b for _, b in data))
        return sum(b for _, b in data)
    accum: dict[tuple[int, ...], float] = {}
    for sup, b in data:
        if len(sup) < c:
            continue
        contrib = b * b if q == 2 else b
        for subset in combinations(sup, c):
            accum[subset] = accum.get(subset, 0.0) + contrib
    if not accum:
        return 0.0
    best = max(accum.values())
    return math.sqrt(best) if q == 2 else best


def lambda_k(h: AnyHamiltonian, k: Optional[int] = None) -> float:
    """lambda(k) evaluated from the (c,2) norm family."""
    if k is None:
        k = h.k
    if k < 1:
        raise ValueError("lambda(k) requires locality k >= 1")
    prefactor = 2.0 ** (k / 2.0 + 1.0) / math.factorial(k - 1)
    total = 0.0
    for j in range(1, k + 1):
        total += 2.0 ** (j / 2.0) / math.factorial(k - j) * local_norm(h, j, 2)
    return prefactor * total


def lambda_prime_k(h: AnyHamiltonian, k: Optional[int] = None) -> float:
    """lambda'(k) evaluated from the (c,1) norm family."""
    if k is None:
        k = h.k
    if k < 1:
        raise ValueError("lambda'(k) requires locality k >= 1")
    zero_one = local_norm(h, 0, 1)
    total = 0.0
    for j in range(1, k + 1):
        total += (
            math.comb(k, j)
            * math.sqrt(20.0) ** j
            * math.sqrt(local_norm(h, j, 1) * zero_one / math.factorial(j))
        )
    return 2.0 * total


def ladder_part(f: FermionHamiltonian) -> FermionHamiltonian:
    """The sub-Hamiltonian of terms containing creation/annihilation factors."""
    return FermionHamiltonian(f.n, (t for t in f.terms if t.has_ladder))


def lambda_ferm_k(f: FermionHamiltonian, k: Optional[int] = None) -> float:
    """lambda(k) plus the same-site-collision correction for fermions."""
    if not isinstance(f, FermionHamiltonian):
        raise TypeError("lambda_ferm requires a fermionic Hamiltonian")
    if not f.is_number_preserving:
        raise ValueError(
            "lambda_ferm is defined for particle-number-preserving Hamiltonians"
        )
    if k is None:
        k = f.k
    base = lambda_k(f, k)
    extra = (
        2.0 ** (k / 2.0 + 1.0)
        / math.factorial(k - 1)
        / math.factorial(k)
        * local_norm(ladder_part(f), 0, 2)
    )
    return base + extra


def norm_profile(h: AnyHamiltonian) -> NormProfile:
    """Compute every (c, q) norm for 0 <= c <= k plus the derived constants."""
    k = h.k
    data = _term_data(h)
    norms = {}
    for c in range(0, k + 1):
        for q in (1, 2):
            norms[(c, q)] = local_norm(h, c, q)
    lam = lambda_k(h, k) if k >= 1 else 0.0
    lam_p = lambda_prime_k(h, k) if k >= 1 else 0.0
    lam_f = None
    ferm02 = None
    if isinstance(h, FermionHamiltonian):
        ferm02 = local_norm(ladder_part(h), 0, 2)
        if h.is_number_preserving and k >= 1:
            lam_f = lambda_ferm_k(h, k)
    return NormProfile(
        gamma=h.gamma,
        k=k,
        norms=norms,
        lambda_k=lam,
        lambda_prime_k=lam_p,
        lambda_ferm_k=lam_f,
        ferm_zero_two=ferm02,
        bounds=tuple(b for _, b in data),
    )
