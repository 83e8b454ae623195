"""Exact dense-matrix engine: evolution, schedules, and matrix norms.

Site 0 is the leftmost Kronecker factor, so for example the two-site operator
Z1 Z2 becomes diag(1, -1, -1, 1).  All norms are computed from singular
values; the normalized Schatten p-norm divides by ||I||_p = dim^{1/p}.

Occupation convention (shared with the Jordan-Wigner map in ``pauli``): a
site is *occupied* when it is in the Z = +1 basis vector, i.e. when its index
bit is 0.  The particle sector P_m is the span of computational basis states
with exactly m occupied sites, and the matching product background state
rho_zeta places probability zeta on the occupied state of each site.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import reduce
from typing import Iterable, Optional, Sequence, Union

import numpy as np
import scipy.linalg

from .errors import ResourceCapError, ValidationError
from .pauli import PauliHamiltonian, PauliString, PauliSum, PauliTerm
from .suzuki import Schedule, build_schedule

DEFAULT_CAP_N = 12

_SITE_MATS = {
    "I": np.eye(2, dtype=complex),
    "X": np.array([[0.0, 1.0], [1.0, 0.0]], dtype=complex),
    "Y": np.array([[0.0, -1.0j], [1.0j, 0.0]], dtype=complex),
    "Z": np.array([[1.0, 0.0], [0.0, -1.0]], dtype=complex),
}

MatrixLike = Union[np.ndarray, PauliSum, PauliTerm, PauliString]


def check_cap(n: int, cap_n: int = DEFAULT_CAP_N) -> None:
    if n > cap_n:
        need = (2**n) ** 2 * 16
        raise ResourceCapError(
            f"dense matrix on n={n} qubits needs {need / 2**20:.0f} MiB "
            f"(cap is n={cap_n}; raise cap_n to override)"
        )


def string_matrix(string: PauliString) -> np.ndarray:
    mats = [_SITE_MATS[ch] for ch in string.label()]
    out = reduce(np.kron, mats, np.array([[1.0 + 0.0j]]))
    if string.phase:
        out = (1j**string.phase) * out
    return out


def to_matrix(obj: MatrixLike, cap_n: int = DEFAULT_CAP_N) -> np.ndarray:
    """Dense matrix of a Pauli string/term/sum (or pass through an ndarray)."""
    if isinstance(obj, np.ndarray):
        return np.asarray(obj, dtype=complex)
    if isinstance(obj, PauliString):
        check_cap(obj.n, cap_n)
        return string_matrix(obj)
    if isinstance(obj, PauliTerm):
        check_cap(obj.n, cap_n)
        return obj.coeff * string_matrix(obj.string)
    if isinstance(obj, PauliSum):
        check_cap(obj.n, cap_n)
        dim = 2**obj.n
        out = np.zeros((dim, dim), dtype=complex)
        for t in obj.terms:
            out += t.coeff * string_matrix(t.string)
        return out
    raise TypeError(f"cannot build a matrix from {type(obj).__name__}")


def sites_of(matrix: np.ndarray) -> int:
    dim = matrix.shape[0]
    n = dim.bit_length() - 1
    if matrix.ndim != 2 or matrix.shape[0] != matrix.shape[1] or 2**n != dim:
        raise ValidationError(f"matrix shape {matrix.shape} is not 2^n x 2^n")
    return n


def is_hermitian(a: np.ndarray, tol: float = 1e-10) -> bool:
    return bool(np.allclose(a, a.conj().T, atol=tol))


def is_unitary(a: np.ndarray, tol: float = 1e-10) -> bool:
    eye = np.eye(a.shape[0])
    return bool(np.allclose(a @ a.conj().T, eye, atol=tol))


def evolve(h: MatrixLike, t: float, cap_n: int = DEFAULT_CAP_N) -> np.ndarray:
    """e^{i H t} through a Hermitian eigendecomposition (unitary to 1e-10)."""
    m = to_matrix(h, cap_n)
    if not isinstance(h, (PauliHamiltonian,)) and not is_hermitian(m):
        raise ValidationError("evolve requires a Hermitian operator")
    w, v = np.linalg.eigh(m)
    return (v * np.exp(1j * t * w)) @ v.conj().T


def apply_schedule(
    h: PauliHamiltonian, schedule: Schedule, cap_n: int = DEFAULT_CAP_N
) -> np.ndarray:
    """The ordered product of per-step exponentials; steps[0] applied first.

    Each step exponentiates one term exactly:
    e^{i a c P} = cos(a c) I + i sin(a c) P for a unit Pauli string P with real
    coefficient c and step coefficient a (which already carries tau).
    """
    check_cap(h.n, cap_n)
    terms = h.terms
    dim = 2**h.n
    cache: dict[int, np.ndarray] = {}
    eye = np.eye(dim, dtype=complex)
    out = eye.copy()
    for idx, coeff in schedule.steps:
        if not 0 <= idx < len(terms):
            raise ValidationError(
                f"schedule refers to term {idx} of a {len(terms)}-term Hamiltonian"
            )
        if idx not in cache:
            cache[idx] = string_matrix(terms[idx].string)
        angle = coeff * terms[idx].coeff.real
        step = math.cos(angle) * eye + 1j * math.sin(angle) * cache[idx]
        out = step @ out
    return out


def unitary_power(u: np.ndarray, r: int) -> np.ndarray:
    """u^r for unitary u via a Schur decomposition (exact up to roundoff).

    Eigenvalues are renormalized onto the unit circle before powering, so the
    result stays unitary for very large r.
    """
    if r < 0:
        raise ValidationError("unitary_power expects a nonnegative power")
    if r == 0:
        return np.eye(u.shape[0], dtype=complex)
    if r == 1:
        return u.copy()
    if r <= 4096:
        # Binary powering: ~log2(r) products, unitarity drift O(r eps).
        return np.linalg.matrix_power(u, r)
    t, q = scipy.linalg.schur(u, output="complex")
    lam = np.diag(t)
    powered = np.exp(1j * r * np.angle(lam))
    return (q * powered) @ q.conj().T


def trotter_error_op(
    h: PauliHamiltonian,
    t: float,
    r: int,
    order: int,
    cap_n: int = DEFAULT_CAP_N,
) -> np.ndarray:
    """The exact error operator e^{iHt} - S_order(t/r)^r."""
    if r < 1:
        raise ValidationError("need at least one segment (r >= 1)")
    exact = evolve(h, t, cap_n)
    segment = apply_schedule(h, build_schedule(h.gamma, order, t / r), cap_n)
    return exact - unitary_power(segment, r)


# ---------------------------------------------------------------------------
# Norms
# ---------------------------------------------------------------------------


def schatten_norm(
    a: MatrixLike, p: float, normalized: bool = False, hermitian: bool = False
) -> float:
    """(sum_i sigma_i^p)^{1/p}; p = inf gives the largest singular value.

    ``normalized`` divides by ||I||_p = dim^{1/p} (no-op at p = inf).
    """
    if p < 1:
        raise ValueError(f"Schatten norms require p >= 1, got {p}")
    m = to_matrix(a)
    if hermitian:
        sv = np.abs(np.linalg.eigvalsh(m))
    else:
        sv = scipy.linalg.svdvals(m)
    top = float(sv.max(initial=0.0))
    if top == 0.0:
        return 0.0
    if math.isinf(p):
        return top
    val = top * float(np.sum((sv / top) ** p)) ** (1.0 / p)
    if normalized:
        val /= m.shape[0] ** (1.0 / p)
    return val


@dataclass(frozen=True)
class WeightedNormSpec:
    """rho-weighted norm parameters: ||O||_{p,rho,s} = ||rho^{(1-s)/p} O rho^{s/p}||_p.

    ``weights[i]`` is the probability the product state rho places on the
    occupied (index bit 0) basis vector of site i.
    """

    weights: tuple[float, ...]
    s: float
    p: float

    def __post_init__(self) -> None:
        if not 0.0 <= self.s <= 1.0:
            raise ValidationError(f"s must lie in [0, 1], got {self.s}")
        if self.p < 2:
            raise ValidationError(f"weighted norms are defined here for p >= 2, got {self.p}")
        for w in self.weights:
            if not 0.0 <= w <= 1.0:
                raise ValidationError(f"site weight {w} outside [0, 1]")
        object.__setattr__(self, "weights", tuple(float(w) for w in self.weights))


def product_state_diagonal(weights: Sequence[float]) -> np.ndarray:
    """Diagonal of the product state: site i contributes (w_i, 1 - w_i)."""
    diag = np.array([1.0])
    for w in weights:
        diag = np.kron(diag, np.array([w, 1.0 - w]))
    return diag


def _pseudo_power(diag: np.ndarray, exponent: float) -> np.ndarray:
    """Entrywise power with the 0^x := 0 convention (and d^0 = 1 exactly)."""
    if exponent == 0.0:
        return np.ones_like(diag)
    out = np.zeros_like(diag)
    positive = diag > 0
    out[positive] = diag[positive] ** exponent
    return out


def weighted_norm_diagonal(
    a: MatrixLike, diag: np.ndarray, p: float, s: float
) -> float:
    """||rho^{(1-s)/p} A rho^{s/p}||_p for an arbitrary nonnegative diagonal rho."""
    m = to_matrix(a)
    diag = np.asarray(diag, dtype=float)
    if diag.shape != (m.shape[0],):
        raise ValidationError("diagonal length does not match the matrix dimension")
    if np.any(diag < 0):
        raise ValidationError("weighted norms need a nonnegative diagonal")
    left = _pseudo_power(diag, (1.0 - s) / p)
    right = _pseudo_power(diag, s / p)
    sandwiched = (left[:, None] * m) * right[None, :]
    return schatten_norm(sandwiched, p)


def weighted_norm(a: MatrixLike, spec: WeightedNormSpec) -> float:
    """Schatten p-norm of rho^{(1-s)/p} A rho^{s/p} for a product diagonal rho."""
    m = to_matrix(a)
    n = sites_of(m)
    if len(spec.weights) != n:
        raise ValidationError(
            f"{len(spec.weights)} site weights for an n={n} operator"
        )
    diag = product_state_diagonal(spec.weights)
    return weighted_norm_diagonal(m, diag, spec.p, spec.s)


@dataclass(frozen=True)
class ParticleSector:
    """The m-particle subspace of n sites (occupied = index bit 0)."""

    n: int
    m: int

    def __post_init__(self) -> None:
        if not 0 <= self.m <= self.n:
            raise ValidationError(f"particle count {self.m} outside 0..{self.n}")

    @property
    def rank(self) -> int:
        return math.comb(self.n, self.m)

    @property
    def b(self) -> float:
        """b(n, m) = (m/n)^m (1-m/n)^{n-m} C(n, m); conversion to rho_{m/n}."""
        zeta = self.m / self.n
        return zeta**self.m * (1.0 - zeta) ** (self.n - self.m) * self.rank

    def mask(self) -> np.ndarray:
        """Boolean diagonal of the projector P_m."""
        idx = np.arange(2**self.n)
        occupied = self.n - np.array([int(i).bit_count() for i in idx])
        return occupied == self.m


@dataclass(frozen=True)
class SectorNormResult:
    value: float
    weighted_bound: float
    b: float
    rank: int


def sector_norm(a: MatrixLike, m: int, p: float) -> SectorNormResult:
    """C(n,m)^{-1/p} ||A P_m||_p, plus the rho_{m/n}-weighted upper bound.

    On the sector, the normalized projector equals rho_{m/n} / b(n, m)
    exactly, so ||A Pbar^{1/p}||_p <= ||A rho_{m/n}^{1/p}||_p * b^{-1/p}; the
    second field reports that right-hand side.
    """
    mat = to_matrix(a)
    n = sites_of(mat)
    sector = ParticleSector(n, m)
    mask = sector.mask()
    projected = mat * mask[None, :]
    value = schatten_norm(projected, p) * sector.rank ** (-1.0 / p)
    zeta = m / n
    spec = WeightedNormSpec(weights=(zeta,) * n, s=1.0, p=p)
    weighted = weighted_norm(mat, spec)
    bound = weighted * sector.b ** (-1.0 / p)
    return SectorNormResult(value=value, weighted_bound=bound, b=sector.b, rank=sector.rank)


# ---------------------------------------------------------------------------
# Subset components
# ---------------------------------------------------------------------------


def _conditional_expectation(tensor: np.ndarray, site: int, n: int) -> np.ndarray:
    """E_s[F] = I_s (x) normalized-partial-trace_s F, in tensor layout."""
    row, col = site, n + site
    traced = (np.take(np.take(tensor, 0, axis=col), 0, axis=row)
              + np.take(np.take(tensor, 1, axis=col), 1, axis=row)) / 2.0
    # traced has 2(n-1) axes; rebuild with an identity at `site`
    out = np.zeros(tensor.shape, dtype=tensor.dtype)
    idx0 = [slice(None)] * (2 * n)
    idx1 = [slice(None)] * (2 * n)
    idx0[row], idx0[col] = 0, 0
    idx1[row], idx1[col] = 1, 1
    out[tuple(idx0)] = traced
    out[tuple(idx1)] = traced
    return out


def subset_component(
    f: MatrixLike, subset: Iterable[int], n: Optional[int] = None
) -> np.ndarray:
    """The component F_S = prod_{s in S}(id - E_s) prod_{s not in S} E_s [F].

    The components over all subsets sum back to F; a Pauli term contributes
    exactly to the subset equal to its support.
    """
    m = to_matrix(f)
    if n is None:
        n = sites_of(m)
    subset = frozenset(subset)
    if subset and (min(subset) < 0 or max(subset) >= n):
        raise ValidationError(f"subset {sorted(subset)} outside 0..{n - 1}")
    tensor = m.reshape((2,) * (2 * n))
    for s in range(n):
        cond = _conditional_expectation(tensor, s, n)
        tensor = (tensor - cond) if s in subset else cond
    return tensor.reshape(2**n, 2**n)


# ---------------------------------------------------------------------------
# States and per-state errors
# ---------------------------------------------------------------------------


def state_error(e: np.ndarray, psi: np.ndarray) -> float:
    """Euclidean norm of E |psi> for a normalized state."""
    nrm = float(np.linalg.norm(psi))
    if abs(nrm - 1.0) > 1e-10:
        raise ValidationError(f"state is not normalized (|psi| = {nrm})")
    return float(np.linalg.norm(e @ psi))


def trace_distance_pure(u: np.ndarray, v: np.ndarray, psi: np.ndarray) -> float:
    """(1/2)||U psi psi U^+ - V psi psi V^+||_1 = sqrt(1 - |<U psi, V psi>|^2)."""
    a = u @ psi
    b = v @ psi
    overlap = abs(complex(np.vdot(a, b))) / (np.linalg.norm(a) * np.linalg.norm(b))
    return math.sqrt(max(0.0, 1.0 - overlap * overlap))


def basis_indices(n: int, size: int, rng: np.random.Generator) -> np.ndarray:
    """Uniform computational-basis 1-design: indices drawn with replacement."""
    return rng.integers(0, 2**n, size=size)


def haar_states(n: int, size: int, rng: np.random.Generator) -> np.ndarray:
    """Haar-random pure states as normalized complex Gaussian rows."""
    z = rng.normal(size=(size, 2**n)) + 1j * rng.normal(size=(size, 2**n))
    return z / np.linalg.norm(z, axis=1, keepdims=True)


def errors_for_basis(e: np.ndarray, indices: np.ndarray) -> np.ndarray:
    """l2 errors of basis states = column norms of E at the sampled indices."""
    cols = np.linalg.norm(e, axis=0)
    return cols[indices]


def errors_for_states(e: np.ndarray, states: np.ndarray) -> np.ndarray:
    return np.linalg.norm(states @ e.T, axis=1)
