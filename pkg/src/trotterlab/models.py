"""Hamiltonian family generators.

Families
--------
- ``chain_heisenberg(n)``: nearest-neighbour Heisenberg chain with unit
  couplings; per bond the three terms XX, YY, ZZ in that order.
- ``power_law(n, d, alpha)``: all-pair ZZ couplings on a d-dimensional
  lattice with coefficient ``dist(x, y)**-alpha``.
- ``KLocalGaussianModel``: SYK-like ensemble -- one uniformly random
  k-site Pauli string per size-k site subset, with i.i.d. Gaussian
  coefficients of variance ``J**2 (k-1)! / (k n**(k-1))``.
- ``zxyz(m)``: the two-group 2-local model on three blocks of m qubits,
  ``A = sum Z_{s1} X_{s2}`` (blocks 1-2) and ``B = sum Y_{s2} Z_{s3}``
  (blocks 2-3), whose Trotter-error commutators have closed-form norms.
- ``fermi_hop(m)``: the fermionic analog built from hopping monomials
  between the same three blocks.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field

import numpy as np

from .errors import ValidationError
from .pauli import (
    ANNIHILATE,
    CREATE,
    FermionHamiltonian,
    FermionTerm,
    PauliHamiltonian,
)

__all__ = [
    "chain_heisenberg",
    "power_law",
    "lattice_coordinates",
    "pair_distance",
    "KLocalGaussianModel",
    "zxyz",
    "zxyz_groups",
    "fermi_hop",
    "fermi_hop_groups",
]


def _pair_label(n: int, placements: dict[int, str]) -> str:
    chars = ["I"] * n
    for site, letter in placements.items():
        chars[site] = letter
    return "".join(chars)


def chain_heisenberg(n: int) -> PauliHamiltonian:
    """Open Heisenberg chain: sum over bonds of XX + YY + ZZ, unit couplings."""
    if n < 2:
        raise ValidationError("chain requires n >= 2")
    labels = []
    for i in range(n - 1):
        for letter in ("X", "Y", "Z"):
            labels.append((_pair_label(n, {i: letter, i + 1: letter}), 1.0))
    return PauliHamiltonian.from_labels(n, labels)


def lattice_coordinates(n: int, d: int) -> list[tuple[int, ...]]:
    """Coordinates of the n sites of a d-dimensional cubic lattice.

    Requires n to be a perfect d-th power; sites are enumerated in
    row-major order.
    """
    if d < 1:
        raise ValidationError("dimension must be >= 1")
    side = round(n ** (1.0 / d))
    if side**d != n:
        raise ValidationError(f"n={n} is not a d={d} lattice (need n = side**d)")
    return list(itertools.product(range(side), repeat=d))


def pair_distance(a: tuple[int, ...], b: tuple[int, ...]) -> float:
    return math.sqrt(sum((x - y) ** 2 for x, y in zip(a, b)))


def power_law(n: int, d: int, alpha: float) -> PauliHamiltonian:
    """All-pair ZZ interactions with coefficient dist**-alpha on a d-D lattice."""
    if alpha <= 0:
        raise ValidationError("alpha must be positive")
    coords = lattice_coordinates(n, d)
    labels = []
    for i, j in itertools.combinations(range(n), 2):
        coeff = pair_distance(coords[i], coords[j]) ** (-alpha)
        labels.append((_pair_label(n, {i: "Z", j: "Z"}), coeff))
    return PauliHamiltonian.from_labels(n, labels)


@dataclass(frozen=True)
class KLocalGaussianModel:
    """SYK-like k-local Gaussian ensemble.

    One term per size-k subset of sites (``gamma = C(n, k)`` terms); the
    Pauli string on each subset is drawn uniformly from {X,Y,Z}**k using
    the model seed, and each draw of the ensemble assigns i.i.d.
    N(0, sigma**2) coefficients with

        sigma**2 = J**2 (k-1)! / (k n**(k-1)).
    """

    n: int
    k: int
    j_coupling: float = 1.0
    seed: int = 0
    strings: tuple[str, ...] = field(init=False, repr=False)

    def __post_init__(self) -> None:
        if not 1 <= self.k <= self.n:
            raise ValidationError("need 1 <= k <= n")
        if self.j_coupling <= 0:
            raise ValidationError("coupling J must be positive")
        rng = np.random.default_rng(self.seed)
        letters = np.array(["X", "Y", "Z"])
        labels = []
        for subset in itertools.combinations(range(self.n), self.k):
            picks = rng.integers(0, 3, size=self.k)
            labels.append(
                _pair_label(self.n, dict(zip(subset, letters[picks])))
            )
        object.__setattr__(self, "strings", tuple(labels))

    @property
    def gamma(self) -> int:
        return math.comb(self.n, self.k)

    @property
    def sigma(self) -> float:
        var = (
            self.j_coupling**2
            * math.factorial(self.k - 1)
            / (self.k * self.n ** (self.k - 1))
        )
        return math.sqrt(var)

    def bound_hamiltonian(self) -> PauliHamiltonian:
        """Deterministic Hamiltonian carrying the ensemble scale: every
        term has coefficient sigma, so its local norms are the b_gamma
        norms entering the random-Hamiltonian bounds."""
        sigma = self.sigma
        return PauliHamiltonian.from_labels(
            self.n, [(s, sigma) for s in self.strings]
        )

    def sample(self, seed) -> PauliHamiltonian:
        """Draw one Hamiltonian: coefficients i.i.d. N(0, sigma**2)."""
        rng = np.random.default_rng(seed)
        coeffs = rng.standard_normal(len(self.strings)) * self.sigma
        return PauliHamiltonian.from_labels(
            self.n, list(zip(self.strings, coeffs))
        )


def _zxyz_blocks(m: int) -> tuple[range, range, range]:
    if m < 1:
        raise ValidationError("block size m must be >= 1")
    return range(m), range(m, 2 * m), range(2 * m, 3 * m)


def zxyz(m: int) -> PauliHamiltonian:
    """Two-group 2-local model on n = 3m qubits.

    Group A (first m**2 terms): Z_{s1} X_{s2} over blocks 1 x 2; group B
    (last m**2 terms): Y_{s2} Z_{s3} over blocks 2 x 3.  All
    coefficients 1.
    """
    s1, s2, s3 = _zxyz_blocks(m)
    n = 3 * m
    labels = [
        (_pair_label(n, {a: "Z", b: "X"}), 1.0)
        for a in s1
        for b in s2
    ]
    labels += [
        (_pair_label(n, {b: "Y", c: "Z"}), 1.0)
        for b in s2
        for c in s3
    ]
    return PauliHamiltonian.from_labels(n, labels)


def zxyz_groups(m: int) -> tuple[tuple[int, ...], tuple[int, ...]]:
    """Term-index groups (A, B) of ``zxyz(m)`` for two-group schedules."""
    msq = m * m
    return tuple(range(msq)), tuple(range(msq, 2 * msq))


def fermi_hop(m: int) -> FermionHamiltonian:
    """Fermionic hopping analog of ``zxyz`` on n = 3m sites.

    Group A: the Hermitian hopping pair a+_{s1} a_{s2} + a+_{s2} a_{s1}
    over blocks 1 x 2; group B: the same between blocks 2 and 3.
    4 m**2 monomials in total.
    """
    s1, s2, s3 = _zxyz_blocks(m)
    n = 3 * m
    terms = []
    for pairs in ((s1, s2), (s2, s3)):
        left, right = pairs
        for a in left:
            for b in right:
                terms.append(
                    FermionTerm(((a, CREATE), (b, ANNIHILATE)), 1.0)
                )
                terms.append(
                    FermionTerm(((b, CREATE), (a, ANNIHILATE)), 1.0)
                )
    return FermionHamiltonian(n, tuple(terms))


def fermi_hop_groups(m: int) -> tuple[tuple[int, ...], tuple[int, ...]]:
    """Term-index groups (A, B) of ``fermi_hop(m)``."""
    half = 2 * m * m
    return tuple(range(half)), tuple(range(half, 4 * m * m))
