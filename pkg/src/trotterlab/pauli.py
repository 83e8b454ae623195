"""Exact symbolic algebra for n-qubit Pauli operators and fermionic monomials.

Pauli strings are stored in a symplectic bit-pair representation: an n-qubit
string is a pair of bitmasks (x_bits, z_bits) plus an integer ``phase`` giving
a power of i.  The canonical (phase-0) matrix of a string places, at each site
s, the factor I, X, Z, or Y according to the (x, z) bits at s, with site 0 the
leftmost tensor factor.  Formally

    matrix(P) = i**phase * (tensor over sites of the local I/X/Y/Z factors)
              = i**(phase + popcount(x & z)) * X^x Z^z.

Fermionic monomials (products of creation/annihilation/occupation factors) are
mapped to Pauli sums through the Jordan-Wigner encoding

    a_s = -(sigma^-)_s (x) prod_{j>s} Z_j,     sigma^- = (X - iY)/2,

so that a_s^dagger a_s = (I + Z_s)/2, i.e. the occupied single-site state is
the Z = +1 basis vector.  The occupation-shift factor is
O^eta = (1 - eta)|occ><occ| - eta|emp><emp| = ((1 - 2 eta)/2) I + Z/2.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field
from typing import Iterable, Mapping, Optional, Sequence, Union

from .errors import DimensionMismatchError, PartitionError, ValidationError

MERGE_TOL = 1e-14
_HERMITICITY_TOL = 1e-12

_LABELS = "IXZY"  # index = x_bit + 2*z_bit
_LABEL_BITS = {"I": (0, 0), "X": (1, 0), "Z": (0, 1), "Y": (1, 1)}

CREATE = "+"
ANNIHILATE = "-"
OCCUPATION = "z"
_FERMION_KINDS = (CREATE, ANNIHILATE, OCCUPATION)


@dataclass(frozen=True)
class PauliString:
    """An n-qubit Pauli string with an explicit power-of-i phase."""

    n: int
    x_bits: int
    z_bits: int
    phase: int = 0

    def __post_init__(self) -> None:
        if self.n < 0:
            raise ValidationError(f"negative qubit count {self.n}")
        mask = (1 << self.n) - 1
        if self.x_bits & ~mask or self.z_bits & ~mask:
            raise ValidationError("bit vector sets a site beyond the qubit count")
        object.__setattr__(self, "phase", self.phase % 4)

    @classmethod
    def identity(cls, n: int) -> "PauliString":
        return cls(n, 0, 0, 0)

    @classmethod
    def from_label(cls, label: str, phase: int = 0) -> "PauliString":
        x = z = 0
        for site, ch in enumerate(label):
            try:
                xb, zb = _LABEL_BITS[ch]
            except KeyError:
                raise ValidationError(f"invalid Pauli letter {ch!r} in {label!r}") from None
            x |= xb << site
            z |= zb << site
        return cls(len(label), x, z, phase)

    def label(self) -> str:
        return "".join(
            _LABELS[((self.x_bits >> s) & 1) + 2 * ((self.z_bits >> s) & 1)]
            for s in range(self.n)
        )

    def support(self) -> tuple[int, ...]:
        bits = self.x_bits | self.z_bits
        return tuple(s for s in range(self.n) if (bits >> s) & 1)

    @property
    def weight(self) -> int:
        return (self.x_bits | self.z_bits).bit_count()

    @property
    def is_identity(self) -> bool:
        return self.x_bits == 0 and self.z_bits == 0

    def key(self) -> tuple[int, int]:
        """Phase-independent identity of the string."""
        return (self.x_bits, self.z_bits)

    def with_phase(self, phase: int) -> "PauliString":
        return PauliString(self.n, self.x_bits, self.z_bits, phase)


def multiply(p: PauliString, q: PauliString) -> PauliString:
    """Exact group product: matrix(result) == matrix(p) @ matrix(q)."""
    if p.n != q.n:
        raise DimensionMismatchError(f"qubit counts differ: {p.n} vs {q.n}")
    x = p.x_bits ^ q.x_bits
    z = p.z_bits ^ q.z_bits
    phase = (
        p.phase
        + q.phase
        + (p.x_bits & p.z_bits).bit_count()
        + (q.x_bits & q.z_bits).bit_count()
        + 2 * (p.z_bits & q.x_bits).bit_count()
        - (x & z).bit_count()
    ) % 4
    return PauliString(p.n, x, z, phase)


def strings_commute(p: PauliString, q: PauliString) -> bool:
    """True iff the strings commute (symplectic inner product is even)."""
    if p.n != q.n:
        raise DimensionMismatchError(f"qubit counts differ: {p.n} vs {q.n}")
    return ((p.x_bits & q.z_bits).bit_count() + (p.z_bits & q.x_bits).bit_count()) % 2 == 0


@dataclass(frozen=True)
class PauliTerm:
    """A Pauli string with a complex coefficient; phase folded into the coefficient."""

    string: PauliString
    coeff: complex

    def __post_init__(self) -> None:
        if self.string.phase:
            folded = complex(self.coeff) * (1j ** self.string.phase)
            object.__setattr__(self, "string", self.string.with_phase(0))
            object.__setattr__(self, "coeff", folded)
        else:
            object.__setattr__(self, "coeff", complex(self.coeff))

    @property
    def n(self) -> int:
        return self.string.n

    @property
    def bound(self) -> float:
        """The term bound b_gamma = |coeff| (Pauli strings are unitary)."""
        return abs(self.coeff)

    def support(self) -> tuple[int, ...]:
        return self.string.support()

    def scaled(self, factor: complex) -> "PauliTerm":
        return PauliTerm(self.string, self.coeff * factor)


def commutator(p: PauliTerm, q: PauliTerm) -> Optional[PauliTerm]:
    """[p, q], which is either zero (None) or exactly 2 p q for Pauli terms."""
    if p.n != q.n:
        raise DimensionMismatchError(f"qubit counts differ: {p.n} vs {q.n}")
    if strings_commute(p.string, q.string):
        return None
    prod = multiply(p.string, q.string)
    return PauliTerm(prod, 2.0 * p.coeff * q.coeff)


TermLike = Union[PauliTerm, tuple]


class PauliSum:
    """An ordered, merged sum of Pauli terms with complex coefficients.

    Terms are merged on ingest by string identity; the surviving order is the
    first occurrence of each string.  Coefficients with magnitude below
    ``MERGE_TOL`` after merging are dropped.  Instances are immutable.
    """

    __slots__ = ("_n", "_terms")

    def __init__(self, n: int, terms: Iterable[TermLike] = ()):
        merged: dict[tuple[int, int], complex] = {}
        keepers: dict[tuple[int, int], PauliString] = {}
        for item in terms:
            term = self._coerce(n, item)
            if term.n != n:
                raise DimensionMismatchError(
                    f"term on {term.n} qubits in a {n}-qubit sum"
                )
            key = term.string.key()
            if key in merged:
                merged[key] += term.coeff
            else:
                merged[key] = term.coeff
                keepers[key] = term.string
        self._n = n
        self._terms = tuple(
            PauliTerm(keepers[key], c)
            for key, c in merged.items()
            if abs(c) >= MERGE_TOL
        )

    @staticmethod
    def _coerce(n: int, item: TermLike) -> PauliTerm:
        if isinstance(item, PauliTerm):
            return item
        string, coeff = item
        if isinstance(string, str):
            string = PauliString.from_label(string)
        return PauliTerm(string, coeff)

    @property
    def n(self) -> int:
        return self._n

    @property
    def terms(self) -> tuple[PauliTerm, ...]:
        return self._terms

    @property
    def gamma(self) -> int:
        """Number of (merged) terms."""
        return len(self._terms)

    @property
    def k(self) -> int:
        """Maximum support size over terms (0 for the empty sum)."""
        return max((t.string.weight for t in self._terms), default=0)

    @property
    def is_empty(self) -> bool:
        return not self._terms

    def coeff_map(self) -> dict[tuple[int, int], complex]:
        return {t.string.key(): t.coeff for t in self._terms}

    def __add__(self, other: "PauliSum") -> "PauliSum":
        self._check_same_n(other)
        return PauliSum(self._n, (*self._terms, *other._terms))

    def __sub__(self, other: "PauliSum") -> "PauliSum":
        return self + other.scaled(-1.0)

    def scaled(self, factor: complex) -> "PauliSum":
        return PauliSum(self._n, (t.scaled(factor) for t in self._terms))

    def __mul__(self, other):
        if isinstance(other, PauliSum):
            self._check_same_n(other)
            products = (
                PauliTerm(multiply(a.string, b.string), a.coeff * b.coeff)
                for a in self._terms
                for b in other._terms
            )
            return PauliSum(self._n, products)
        return self.scaled(other)

    def __rmul__(self, factor: complex) -> "PauliSum":
        return self.scaled(factor)

    def adjoint(self) -> "PauliSum":
        return PauliSum(
            self._n, (PauliTerm(t.string, t.coeff.conjugate()) for t in self._terms)
        )

    def _check_same_n(self, other: "PauliSum") -> None:
        if self._n != other._n:
            raise DimensionMismatchError(
                f"qubit counts differ: {self._n} vs {other._n}"
            )

    def to_hamiltonian(self) -> "PauliHamiltonian":
        return PauliHamiltonian(self._n, self._terms)

    def __repr__(self) -> str:
        body = " + ".join(f"({t.coeff:g})*{t.string.label() or 'I'}" for t in self._terms[:6])
        more = " + ..." if len(self._terms) > 6 else ""
        return f"PauliSum(n={self._n}, {body or '0'}{more})"


def commutator_sum(a: PauliSum, b: PauliSum) -> PauliSum:
    """[a, b] as an exact symbolic Pauli sum."""
    return a * b - b * a


class PauliHamiltonian(PauliSum):
    """A PauliSum with verified real coefficients (a Hermitian operator).

    Term order gamma = 1..Gamma is the ingestion order (first occurrence after
    merging); it is part of the artifact because product-formula error depends
    on it.
    """

    __slots__ = ()

    def __init__(self, n: int, terms: Iterable[TermLike] = ()):
        super().__init__(n, terms)
        cleaned = []
        for t in self._terms:
            if abs(t.coeff.imag) > _HERMITICITY_TOL * max(1.0, abs(t.coeff.real)):
                raise ValidationError(
                    f"non-Hermitian total: term {t.string.label()} has coefficient "
                    f"{t.coeff} with non-real part"
                )
            cleaned.append(PauliTerm(t.string, complex(t.coeff.real, 0.0)))
        self._terms = tuple(cleaned)

    @classmethod
    def from_labels(cls, n: int, pairs: Iterable[tuple[str, float]]) -> "PauliHamiltonian":
        return cls(n, ((PauliString.from_label(lab), c) for lab, c in pairs))

    def bounds(self) -> tuple[float, ...]:
        """Per-term bounds b_gamma = |coeff|."""
        return tuple(t.bound for t in self._terms)


def adjoint_apply(h_term: PauliTerm, operator: PauliSum) -> PauliSum:
    """The adjoint action i[h_term, operator], merged.

    For a Hermitian term and Hermitian operator the result is Hermitian; call
    ``.to_hamiltonian()`` to re-validate if needed.
    """
    if h_term.n != operator.n:
        raise DimensionMismatchError(
            f"qubit counts differ: {h_term.n} vs {operator.n}"
        )
    out = []
    for t in operator.terms:
        c = commutator(h_term, t)
        if c is not None:
            out.append(c.scaled(1j))
    return PauliSum(operator.n, out)


@dataclass(frozen=True)
class LeadingError:
    """Leading product-formula error: S(tau) - e^{i H tau} = operator * tau**time_power + O(tau**(time_power+1))."""

    operator: PauliSum
    time_power: int


def leading_error(
    hamiltonian: PauliHamiltonian,
    order: int,
    groups: Optional[Sequence[Sequence[int]]] = None,
) -> LeadingError:
    """Leading-order error operator of the order-1 or order-2 step.

    Order 1 (forward sweep, term 1 applied first):
        L = -(1/2) sum_{g' > g} [H_{g'}, H_g],    error = L tau^2 + O(tau^3).

    Order 2 requires ``groups``: a partition of term indices into exactly two
    groups (A, B), with A the inner block and B the outer block of the
    symmetric step e^{i tau B/2} e^{i tau A} e^{i tau B/2}.  Then
        L = -(i/12) ( [A,[A,B]] - (1/2) [B,[B,A]] ),   error = L tau^3 + ...
    This equals the built per-term schedule's leading error whenever the terms
    inside each group commute with one another.
    """
    n = hamiltonian.n
    terms = hamiltonian.terms
    if order == 1:
        acc: list[PauliTerm] = []
        for b in range(len(terms)):
            for a in range(b):
                c = commutator(terms[b], terms[a])
                if c is not None:
                    acc.append(c.scaled(-0.5))
        return LeadingError(PauliSum(n, acc), 2)
    if order == 2:
        if groups is None or len(groups) != 2:
            raise PartitionError(
                "order-2 leading error requires a partition into exactly two groups"
            )
        idx_a, idx_b = (tuple(g) for g in groups)
        seen = sorted(idx_a + idx_b)
        if seen != list(range(len(terms))):
            raise PartitionError(
                "groups must partition the term indices 0..Gamma-1 disjointly"
            )
        a_sum = PauliSum(n, (terms[i] for i in idx_a))
        b_sum = PauliSum(n, (terms[i] for i in idx_b))
        aab = commutator_sum(a_sum, commutator_sum(a_sum, b_sum))
        bba = commutator_sum(b_sum, commutator_sum(b_sum, a_sum))
        op = (aab - bba.scaled(0.5)).scaled(-1j / 12.0)
        return LeadingError(op, 3)
    raise ValidationError(f"leading_error supports orders 1 and 2, got {order}")


# ---------------------------------------------------------------------------
# Fermions
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class FermionTerm:
    """An ordered product of fermionic factors with a real coefficient.

    ``factors`` is a sequence of (site, kind) with kind one of "+" (create),
    "-" (annihilate), "z" (occupation shift O^eta).  On construction, factors
    are stably sorted site-ascending; each transposition of two
    creation/annihilation factors flips the sign of the coefficient
    (occupation factors commute with everything off their own site, and
    same-site factor order is preserved by the stable sort).  A term with two
    creations or two annihilations on one site is the zero operator; it is
    kept with a ``is_zero`` flag and a RuntimeWarning.
    """

    factors: tuple[tuple[int, str], ...]
    coeff: float
    eta: float = 0.5
    is_zero: bool = field(default=False, compare=False)

    def __post_init__(self) -> None:
        factors = tuple((int(s), str(kind)) for s, kind in self.factors)
        for site, kind in factors:
            if kind not in _FERMION_KINDS:
                raise ValidationError(f"invalid fermionic factor kind {kind!r}")
            if site < 0:
                raise ValidationError(f"negative site index {site}")
        # Stable sort by site; sign = parity of inversions among non-"z"
        # factors (distinct sites anticommute; "z" commutes with everything
        # it crosses, since same-site order is never changed).
        ladder_sites = [s for s, kind in factors if kind != OCCUPATION]
        inversions = 0
        for j in range(len(ladder_sites)):
            for i in range(j):
                if ladder_sites[i] > ladder_sites[j]:
                    inversions += 1
        ordered = tuple(sorted(factors, key=lambda f: f[0]))
        sign = -1.0 if inversions % 2 else 1.0
        object.__setattr__(self, "factors", ordered)
        object.__setattr__(self, "coeff", float(self.coeff) * sign)
        # Zero detection: >= 2 creations or >= 2 annihilations on one site.
        per_site: dict[tuple[int, str], int] = {}
        zero = False
        for site, kind in ordered:
            if kind == OCCUPATION:
                continue
            per_site[(site, kind)] = per_site.get((site, kind), 0) + 1
            if per_site[(site, kind)] > 1:
                zero = True
        if zero:
            warnings.warn(
                "fermionic term with a repeated creation/annihilation on one "
                "site is the zero operator",
                RuntimeWarning,
                stacklevel=2,
            )
        object.__setattr__(self, "is_zero", zero)

    @property
    def is_number_preserving(self) -> bool:
        creates = sum(1 for _, kind in self.factors if kind == CREATE)
        annihilates = sum(1 for _, kind in self.factors if kind == ANNIHILATE)
        return creates == annihilates

    def support(self) -> tuple[int, ...]:
        return tuple(sorted({s for s, _ in self.factors}))

    @property
    def has_ladder(self) -> bool:
        """True iff the term contains any creation/annihilation factor."""
        return any(kind != OCCUPATION for _, kind in self.factors)

    def adjoint(self) -> "FermionTerm":
        flipped = []
        for site, kind in reversed(self.factors):
            if kind == CREATE:
                flipped.append((site, ANNIHILATE))
            elif kind == ANNIHILATE:
                flipped.append((site, CREATE))
            else:
                flipped.append((site, kind))
        return FermionTerm(tuple(flipped), self.coeff, self.eta)


class FermionHamiltonian:
    """An ordered sequence of fermionic terms on n sites."""

    __slots__ = ("_n", "_terms")

    def __init__(self, n: int, terms: Iterable[FermionTerm] = ()):
        terms = tuple(terms)
        for t in terms:
            if t.factors and max(s for s, _ in t.factors) >= n:
                raise DimensionMismatchError(
                    f"term touches site beyond the {n}-site system"
                )
        self._n = n
        self._terms = terms

    @property
    def n(self) -> int:
        return self._n

    @property
    def terms(self) -> tuple[FermionTerm, ...]:
        return self._terms

    @property
    def gamma(self) -> int:
        return len(self._terms)

    @property
    def k(self) -> int:
        return max((len(t.support()) for t in self._terms), default=0)

    @property
    def is_number_preserving(self) -> bool:
        return all(t.is_number_preserving for t in self._terms)

    def to_pauli(self) -> PauliHamiltonian:
        """Jordan-Wigner image as a validated Hermitian Pauli Hamiltonian."""
        return jordan_wigner(self).to_hamiltonian()


def _jw_factor(n: int, site: int, kind: str, eta: float) -> PauliSum:
    """Jordan-Wigner image of a single fermionic factor as a 2-term Pauli sum."""
    if site >= n:
        raise DimensionMismatchError(f"site {site} outside {n}-site system")
    string_z = 0
    for j in range(site + 1, n):
        string_z |= 1 << j
    if kind == OCCUPATION:
        ident = PauliString.identity(n)
        z_here = PauliString(n, 0, 1 << site)
        return PauliSum(n, [(ident, (1.0 - 2.0 * eta) / 2.0), (z_here, 0.5)])
    x_str = PauliString(n, 1 << site, string_z)
    y_str = PauliString(n, 1 << site, string_z | (1 << site))
    if kind == CREATE:
        # a^dagger = -((X + iY)/2) (x) Z-string
        return PauliSum(n, [(x_str, -0.5), (y_str, -0.5j)])
    # a = -((X - iY)/2) (x) Z-string
    return PauliSum(n, [(x_str, -0.5), (y_str, 0.5j)])


def jordan_wigner(
    obj: Union[FermionTerm, FermionHamiltonian], n: Optional[int] = None
) -> PauliSum:
    """Exact Jordan-Wigner Pauli expansion of a fermionic term or Hamiltonian.

    For a single FermionTerm the site count ``n`` must be supplied.  The
    result has complex coefficients in general; Hermitian inputs (terms paired
    with their adjoints) yield real coefficients, recoverable via
    ``.to_hamiltonian()``.
    """
    if isinstance(obj, FermionHamiltonian):
        total = PauliSum(obj.n)
        for term in obj.terms:
            total = total + jordan_wigner(term, obj.n)
        return total
    if n is None:
        raise ValidationError("jordan_wigner of a single term requires the site count n")
    if obj.is_zero:
        return PauliSum(n)
    acc = PauliSum(n, [(PauliString.identity(n), obj.coeff)])
    for site, kind in obj.factors:
        acc = acc * _jw_factor(n, site, kind, obj.eta)
    return acc


def fermion_term_site_matrices(term: FermionTerm, n: int):
    """Per-site 2x2 matrices whose tensor product (up to the tracked phase)
    equals the Jordan-Wigner image of the term divided by its coefficient.

    Every fermionic monomial maps to a single tensor product of per-site 2x2
    factors (each factor of the monomial contributes its own site matrix and
    Z factors on higher sites), so the spectral norm of the image is the
    product of the 2x2 spectral norms.  Only sites in the term's support can
    carry a non-unitary factor; all others are powers of Z.
    """
    import numpy as np

    sig_x = np.array([[0.0, 1.0], [1.0, 0.0]], dtype=complex)
    sig_y = np.array([[0.0, -1.0j], [1.0j, 0.0]], dtype=complex)
    sig_z = np.array([[1.0, 0.0], [0.0, -1.0]], dtype=complex)
    eye = np.eye(2, dtype=complex)
    lower = (sig_x - 1j * sig_y) / 2.0  # |empty><occupied|
    raise_ = (sig_x + 1j * sig_y) / 2.0

    site_mats = {s: eye.copy() for s in range(n)}

    def apply(site_mat_target: int, mat) -> None:
        site_mats[site_mat_target] = site_mats[site_mat_target] @ mat

    for site, kind in term.factors:
        if kind == OCCUPATION:
            local = ((1.0 - 2.0 * term.eta) / 2.0) * eye + 0.5 * sig_z
            apply(site, local)
        else:
            local = raise_ if kind == CREATE else lower
            apply(site, -local)
            for j in range(site + 1, n):
                apply(j, sig_z)
    return site_mats


# ---------------------------------------------------------------------------
# JSON interchange
# ---------------------------------------------------------------------------


def pauli_to_json(h: PauliSum) -> dict:
    """{"n": int, "terms": [{"pauli": "<I/X/Y/Z label>", "coeff": float}]}.

    Only real-coefficient sums are serializable (the interchange format
    describes Hamiltonians).
    """
    terms = []
    for t in h.terms:
        if abs(t.coeff.imag) > _HERMITICITY_TOL * max(1.0, abs(t.coeff.real)):
            raise ValidationError("cannot serialize a sum with non-real coefficients")
        terms.append({"pauli": t.string.label(), "coeff": t.coeff.real})
    return {"n": h.n, "terms": terms}


def pauli_from_json(data: Mapping) -> PauliHamiltonian:
    try:
        n = int(data["n"])
        pairs = [(str(t["pauli"]), float(t["coeff"])) for t in data["terms"]]
    except (KeyError, TypeError, ValueError) as exc:
        raise ValidationError(f"malformed Hamiltonian JSON: {exc}") from exc
    for label, _ in pairs:
        if len(label) != n:
            raise ValidationError(
                f"pauli label {label!r} has length {len(label)}, expected n={n}"
            )
    return PauliHamiltonian.from_labels(n, pairs)


def fermion_to_json(f: FermionHamiltonian) -> dict:
    """{"n": int, "eta": float, "terms": [{"ops": [["+",s]...], "coeff": c}]}.

    Site indices are 0-based.  All terms must share one eta.
    """
    etas = {t.eta for t in f.terms}
    if len(etas) > 1:
        raise ValidationError("terms with differing eta cannot share one JSON document")
    eta = etas.pop() if etas else 0.5
    return {
        "n": f.n,
        "eta": eta,
        "terms": [
            {"ops": [[kind, site] for site, kind in t.factors], "coeff": t.coeff}
            for t in f.terms
        ],
    }


def fermion_from_json(data: Mapping) -> FermionHamiltonian:
    try:
        n = int(data["n"])
        eta = float(data.get("eta", 0.5))
        terms = [
            FermionTerm(
                tuple((int(site), str(kind)) for kind, site in t["ops"]),
                float(t["coeff"]),
                eta,
            )
            for t in data["terms"]
        ]
    except (KeyError, TypeError, ValueError) as exc:
        raise ValidationError(f"malformed fermionic JSON: {exc}") from exc
    return FermionHamiltonian(n, terms)
