"""Generalized Mazur maps between Orlicz spaces.

The map applies t -> psi^-1(phi(t)) to moduli while preserving phases.  The
scalar difference inequality, the norm sandwich with composite growth-class
exponents, and the three-case Hoelder certificates quantify its continuity;
conjugating a weighted-composition isometry through the maps to and from the
quadratic space yields the sequence-space isometry homomorphism.
"""

from __future__ import annotations

import functools
from dataclasses import dataclass

from .errors import DomainError, UnsupportedVariantError
from .spaces import SparseVector, StepFunction
from .young import KClassIndices, Power, YoungFunction, k_class_indices

#: Boundary slack when comparing grid-certified indices against 1.
_BOUNDARY_TOL = 1e-9


def sign(z: complex) -> complex:
    """z/|z| for z != 0, and 0 at 0 (keeps sparsity and continuity)."""
    if z == 0:
        return 0j
    return z / abs(z)


def mazur_map(phi: YoungFunction, psi: YoungFunction, f):
    """psi^-1(phi(|f|)) * sign(f), applied entrywise / per interval."""
    if not (phi.is_n_function and psi.is_n_function):
        raise UnsupportedVariantError("Mazur map needs invertible N-functions")

    def transform(z: complex) -> complex:
        if z == 0:
            return 0j
        return psi.inverse(phi(abs(z))) * sign(z)

    if isinstance(f, SparseVector):
        return SparseVector({k: transform(v) for k, v in f.entries.items()})
    if isinstance(f, StepFunction):
        return StepFunction(f.breakpoints, [transform(v) for v in f.values])
    raise DomainError(f"expected SparseVector or StepFunction, got {type(f).__name__}")


@dataclass
class ScalarBoundResult:
    lhs: float
    rhs: float
    ok: bool


def scalar_bound(indices: KClassIndices, varphi, a: complex, b: complex,
                 tol: float = 1e-9) -> ScalarBoundResult:
    """The scalar difference inequality for a monotone map in class K(alpha, beta).

    beta <= 1 branch:  |phi(|a|)sgn a - phi(|b|)sgn b|
                         <= phi(|a-b|) + 4 (|a-b|/(|a|+|b|)) phi(|a|+|b|)
    beta >= 1 branch:  ... <= (2 beta + 4)(|a-b|/(|a|+|b|)) phi(|a|+|b|).
    """
    if a == 0 or b == 0:
        raise DomainError("scalar bound requires non-zero arguments")
    lhs = abs(varphi(abs(a)) * sign(a) - varphi(abs(b)) * sign(b))
    ratio = abs(a - b) / (abs(a) + abs(b))
    big = varphi(abs(a) + abs(b))
    if indices.beta <= 1.0:
        rhs = varphi(abs(a - b)) + 4.0 * ratio * big
    else:
        rhs = (2.0 * indices.beta + 4.0) * ratio * big
    return ScalarBoundResult(lhs, rhs, lhs <= rhs + tol)


@functools.lru_cache(maxsize=256)
def composite_indices(phi: YoungFunction, psi: YoungFunction) -> tuple:
    """(alpha, beta) = (p_phi/q_psi, q_phi/p_psi): the class of psi^-1 o phi."""
    ip = k_class_indices(phi)
    iq = k_class_indices(psi)
    return ip.alpha / iq.beta, ip.beta / iq.alpha


@dataclass
class SandwichResult:
    lower: float
    value: float
    upper: float
    ok: bool


def sandwich_check(phi: YoungFunction, psi: YoungFunction, f,
                   tol: float = 1e-9) -> SandwichResult:
    """min/max of ||f||^alpha, ||f||^beta against the image gauge norm."""
    from .spaces import gauge_norm

    alpha, beta = composite_indices(phi, psi)
    nf = gauge_norm(phi, f)
    if nf == 0.0:
        return SandwichResult(0.0, 0.0, 0.0, True)
    value = gauge_norm(psi, mazur_map(phi, psi, f))
    lo = min(nf ** alpha, nf ** beta)
    hi = max(nf ** alpha, nf ** beta)
    return SandwichResult(lo, value, hi, lo - tol <= value <= hi + tol)


CASE1 = "case1"
CASE2 = "case2"
CASE3 = "case3"


@dataclass
class HolderCertificate:
    """Case selection and explicit constant: the image-difference gauge norm is
    bounded by constant * ||f - h||^exponent on the shell 1/2 <= ||f|| <= 3/2."""

    case: str
    exponent: float
    constant: float
    alpha: float
    beta: float

    def bound(self, dist: float) -> float:
        return self.constant * dist ** self.exponent

    def to_json(self) -> dict:
        return {
            "case": self.case,
            "exponent": self.exponent,
            "constant": self.constant,
            "alpha": self.alpha,
            "beta": self.beta,
        }


def holder_certificate(phi: YoungFunction, psi: YoungFunction) -> HolderCertificate:
    """Select the case by the position of 1 in [alpha, beta].

    Boundaries prefer the strongest conclusion: alpha >= 1 takes the Lipschitz
    case, beta <= 1 with alpha < 1 the alpha-Hoelder case, and only
    strictly-straddling pairs the mixed case.
    """
    alpha, beta = composite_indices(phi, psi)
    if alpha >= 1.0 - _BOUNDARY_TOL:
        return HolderCertificate(CASE2, 1.0, 3.0 ** beta * (2.0 * beta + 4.0),
                                 alpha, beta)
    if beta <= 1.0 + _BOUNDARY_TOL:
        return HolderCertificate(CASE1, alpha, 1.0 / 8.0, alpha, beta)
    return HolderCertificate(
        CASE3, alpha, 3.0 ** (beta - alpha + 1.0) * (2.0 * beta + 4.0), alpha, beta)


class WeightedComposition:
    """Uf(x) = h(x) f(T(x)) with T a bijection of a finite index window of N
    (identity outside) and unimodular weights h (1 outside the window)."""

    __slots__ = ("permutation", "weights")

    def __init__(self, permutation=None, weights=None):
        perm = {int(k): int(v) for k, v in (permutation or {}).items() if int(k) != int(v)}
        if set(perm) != set(perm.values()):
            raise DomainError("permutation must be a bijection of its window")
        wts = {}
        for k, v in (weights or {}).items():
            z = complex(v)
            if abs(abs(z) - 1.0) > 1e-12:
                raise DomainError(f"weight at {k} has modulus {abs(z)!r}, need 1")
            if z != 1:
                wts[int(k)] = z
        self.permutation = perm
        self.weights = wts

    def target(self, x: int) -> int:
        return self.permutation.get(x, x)

    def weight(self, x: int) -> complex:
        return self.weights.get(x, 1.0 + 0j)

    def __eq__(self, other):
        return (isinstance(other, WeightedComposition)
                and self.permutation == other.permutation
                and self.weights == other.weights)

    def __repr__(self):
        return f"WeightedComposition({self.permutation!r}, {self.weights!r})"


def apply_weighted_composition(u: WeightedComposition, f: SparseVector) -> SparseVector:
    inv = {v: k for k, v in u.permutation.items()}
    out = {}
    for y, val in f.entries.items():
        x = inv.get(y, y)
        out[x] = u.weight(x) * val
    return SparseVector(out)


def compose(u1: WeightedComposition, u2: WeightedComposition) -> WeightedComposition:
    """U1 o U2: T = T2 o T1 and h(x) = h1(x) * h2(T1(x))."""
    window = set(u1.permutation) | set(u2.permutation) | set(u1.weights) | set(u2.weights)
    perm = {x: u2.target(u1.target(x)) for x in window}
    wts = {x: u1.weight(x) * u2.weight(u1.target(x)) for x in window}
    return WeightedComposition(perm, wts)


def conjugate_isometry(phi: YoungFunction, u: WeightedComposition,
                       f: SparseVector) -> SparseVector:
    """Conjugate U through the Mazur maps to and from the quadratic space.

    Computed by actually composing the three maps; the closed form
    sign(h) * f o T serves as the independent oracle."""
    lifted = mazur_map(Power(2.0), phi, f)
    moved = apply_weighted_composition(u, lifted)
    return mazur_map(phi, Power(2.0), moved)


def conjugate_isometry_closed_form(u: WeightedComposition,
                                   f: SparseVector) -> SparseVector:
    inv = {v: k for k, v in u.permutation.items()}
    out = {}
    for y, val in f.entries.items():
        x = inv.get(y, y)
        out[x] = sign(u.weight(x)) * val
    return SparseVector(out)
