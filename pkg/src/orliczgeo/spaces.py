"""Finite-precision elements of Orlicz sequence and function spaces.

Sequence-space elements are finitely supported sparse vectors indexed by
naturals or free-group words; function-space elements are step functions on
[0, 1].  Integrals against a Young function are exact finite weighted sums, so
the gauge (Luxemburg) norm reduces to a monotone scalar bisection and the
Orlicz norm to a one-dimensional Amemiya minimization.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import (
    DegenerateInputError,
    DomainError,
    ParseError,
    PreconditionError,
    UnsupportedVariantError,
)
from .young import (
    BISECT_MAX_ITER,
    BISECT_RTOL,
    FUNCTION_REGIME,
    SEQUENCE_REGIME,
    IndicatorBand,
    Linear,
    YoungFunction,
    check_delta2,
)


class SparseVector:
    """Finitely supported map index -> complex scalar; zero entries dropped.

    Indices are ints (Omega = N) or free-group words as strings.  Treat
    instances as immutable.
    """

    __slots__ = ("entries",)

    def __init__(self, entries=None, field: str = "complex"):
        data = {}
        for k, v in (entries or {}).items():
            z = complex(v)
            if z != 0:
                if field == "real" and z.imag != 0.0:
                    raise DomainError(f"real-field vector has complex entry at {k!r}")
                data[k] = z
        self.entries = data

    def moduli(self) -> np.ndarray:
        return np.abs(np.fromiter(self.entries.values(), dtype=complex,
                                  count=len(self.entries)))

    def support(self):
        return set(self.entries)

    def get(self, k):
        return self.entries.get(k, 0j)

    def __len__(self):
        return len(self.entries)

    def __eq__(self, other):
        return isinstance(other, SparseVector) and self.entries == other.entries

    def __add__(self, other):
        out = dict(self.entries)
        for k, v in other.entries.items():
            out[k] = out.get(k, 0j) + v
        return SparseVector(out)

    def __sub__(self, other):
        out = dict(self.entries)
        for k, v in other.entries.items():
            out[k] = out.get(k, 0j) - v
        return SparseVector(out)

    def __mul__(self, scalar):
        return SparseVector({k: v * scalar for k, v in self.entries.items()})

    __rmul__ = __mul__

    def __repr__(self):
        return f"SparseVector({self.entries!r})"


class StepFunction:
    """Step function on [0, 1]: complex value per interval of a finite partition."""

    __slots__ = ("breakpoints", "values")

    def __init__(self, breakpoints, values, field: str = "complex"):
        b = np.asarray(breakpoints, dtype=float)
        v = np.asarray(values, dtype=complex)
        if b.ndim != 1 or b.size < 2 or b[0] != 0.0 or b[-1] != 1.0:
            raise DomainError("breakpoints must run from 0 to 1")
        if np.any(np.diff(b) <= 0):
            raise DomainError("breakpoints must be strictly increasing")
        if v.shape != (b.size - 1,):
            raise DomainError("need one value per partition interval")
        if field == "real" and np.any(v.imag != 0.0):
            raise DomainError("real-field step function has complex values")
        self.breakpoints = b
        self.values = v

    def lengths(self) -> np.ndarray:
        return np.diff(self.breakpoints)

    def moduli(self) -> np.ndarray:
        return np.abs(self.values)

    def __repr__(self):
        return f"StepFunction({self.breakpoints.tolist()}, {self.values.tolist()})"


class CocycleVector:
    """Finitely supported map word -> SparseVector (nested sequence-space element)."""

    __slots__ = ("entries",)

    def __init__(self, entries=None):
        data = {}
        for k, v in (entries or {}).items():
            if not isinstance(v, SparseVector):
                v = SparseVector(v)
            if len(v):
                data[k] = v
        self.entries = data

    def __len__(self):
        return len(self.entries)

    def __eq__(self, other):
        return isinstance(other, CocycleVector) and self.entries == other.entries

    def __add__(self, other):
        out = dict(self.entries)
        for k, v in other.entries.items():
            out[k] = (out[k] + v) if k in out else v
        return CocycleVector(out)

    def __sub__(self, other):
        out = dict(self.entries)
        for k, v in other.entries.items():
            out[k] = (out[k] - v) if k in out else (-1) * v
        return CocycleVector(out)

    def __mul__(self, scalar):
        return CocycleVector({k: v * scalar for k, v in self.entries.items()})

    __rmul__ = __mul__


def _moduli_weights(f):
    if isinstance(f, SparseVector):
        return f.moduli(), np.ones(len(f))
    if isinstance(f, StepFunction):
        return f.moduli(), f.lengths()
    raise DomainError(f"expected SparseVector or StepFunction, got {type(f).__name__}")


def gauge_norm_weighted(phi: YoungFunction, moduli, weights,
                        rtol: float = BISECT_RTOL) -> float:
    """inf{b > 0 : sum_i w_i * phi(m_i / b) <= 1} by monotone bisection.

    The returned b is the upper end of the final bracket, so the modular at b
    is <= 1 and at b*(1 - 1e-10) it exceeds 1 whenever phi is strictly
    increasing.
    """
    m = np.asarray(moduli, dtype=float)
    w = np.asarray(weights, dtype=float)
    keep = m > 0
    m, w = m[keep], w[keep]
    if m.size == 0:
        return 0.0
    if isinstance(phi, IndicatorBand):
        return float(m.max())

    def modular(b: float) -> float:
        with np.errstate(over="ignore", invalid="ignore"):
            vals = phi.eval_array(m / b)
        return float(np.sum(w * vals))

    hi = float(m.max())
    for _ in range(1100):
        if modular(hi) <= 1.0:
            break
        hi *= 2.0
        if hi > 1e300:
            raise DomainError("gauge norm overflow")
    lo = 0.5 * hi
    for _ in range(1100):
        if modular(lo) > 1.0:
            break
        hi = lo
        lo *= 0.5
        if lo < 1e-300:
            return 0.0
    for _ in range(BISECT_MAX_ITER):
        if hi - lo <= rtol * hi:
            break
        mid = 0.5 * (lo + hi)
        if modular(mid) <= 1.0:
            hi = mid
        else:
            lo = mid
    return hi


def gauge_norm(phi: YoungFunction, f) -> float:
    """Luxemburg gauge norm of a sparse vector or step function."""
    m, w = _moduli_weights(f)
    return gauge_norm_weighted(phi, m, w)


_GOLDEN = (math.sqrt(5.0) - 1.0) / 2.0


def orlicz_norm(phi: YoungFunction, f, k_lo: float = 1e-8, k_hi: float = 1e8,
                iters: int = 140) -> float:
    """Orlicz (dual) norm via the Amemiya expression
    inf_{k>0} (1 + sum w * phi(k*m)) / k, minimized by golden section in log k."""
    if isinstance(phi, IndicatorBand):
        raise UnsupportedVariantError("Orlicz norm is not supported for IndicatorBand")
    m, w = _moduli_weights(f)
    keep = m > 0
    m, w = m[keep], w[keep]
    if m.size == 0:
        return 0.0

    def amemiya(u: float) -> float:
        k = math.exp(u)
        with np.errstate(over="ignore"):
            total = float(np.sum(w * phi.eval_array(k * m)))
        return (1.0 + total) / k

    lo, hi = math.log(k_lo), math.log(k_hi)
    best = min(amemiya(lo), amemiya(hi))
    x1 = hi - _GOLDEN * (hi - lo)
    x2 = lo + _GOLDEN * (hi - lo)
    f1, f2 = amemiya(x1), amemiya(x2)
    best = min(best, f1, f2)
    for _ in range(iters):
        if f1 <= f2:
            hi, x2, f2 = x2, x1, f1
            x1 = hi - _GOLDEN * (hi - lo)
            f1 = amemiya(x1)
        else:
            lo, x1, f1 = x1, x2, f2
            x2 = lo + _GOLDEN * (hi - lo)
            f2 = amemiya(x2)
        best = min(best, f1, f2)
    return best


def orlicz_norm_dual_bruteforce(phi: YoungFunction, f, grid: int = 120,
                                refine_rounds: int = 90) -> float:
    """The defining dual supremum sup{sum w |f| psi : sum w phi*(psi) <= 1},
    brute-forced on supports of size <= 3.

    Directions on the positive simplex are scanned on a grid, the constraint
    radius along each ray is solved by vectorized bisection, and the best
    direction is polished by pattern search.  Independent oracle for
    ``orlicz_norm``; do not use beyond desk scale.
    """
    conj = phi.conjugate()
    m, w = _moduli_weights(f)
    keep = m > 0
    m, w = m[keep], w[keep]
    n = m.size
    if n == 0:
        return 0.0
    if n > 3:
        raise DomainError("brute-force dual supremum is limited to supports <= 3")

    def ray_values(dirs: np.ndarray) -> np.ndarray:
        # Solve sum_i w_i phi*(r * u_i) = 1 for each direction row u.
        r_hi = np.ones(dirs.shape[0])
        for _ in range(200):
            tot = np.sum(w * conj.eval_array(r_hi[:, None] * dirs), axis=1)
            grow = tot < 1.0
            if not grow.any():
                break
            r_hi[grow] *= 2.0
        r_lo = np.zeros_like(r_hi)
        for _ in range(120):
            mid = 0.5 * (r_lo + r_hi)
            tot = np.sum(w * conj.eval_array(mid[:, None] * dirs), axis=1)
            below = tot <= 1.0
            r_lo = np.where(below, mid, r_lo)
            r_hi = np.where(below, r_hi, mid)
        return r_lo * np.sum(w * m * dirs, axis=1)

    if n == 1:
        dirs = np.array([[1.0]])
    elif n == 2:
        t = np.linspace(0.0, 1.0, grid + 1)
        dirs = np.column_stack([t, 1.0 - t])
    else:
        pts = []
        for i in range(grid + 1):
            for j in range(grid + 1 - i):
                pts.append((i / grid, j / grid, (grid - i - j) / grid))
        dirs = np.array(pts)
    vals = ray_values(dirs)
    best_dir = dirs[int(np.argmax(vals))].copy()
    best_val = float(np.max(vals))

    step = 0.25
    for _ in range(refine_rounds):
        cands = []
        for i in range(n):
            for sgn in (+1.0, -1.0):
                d = best_dir.copy()
                d[i] = max(0.0, d[i] + sgn * step)
                s = d.sum()
                if s > 0:
                    cands.append(d / s)
        cands = np.array(cands)
        vals = ray_values(cands)
        j = int(np.argmax(vals))
        if vals[j] > best_val:
            best_val = float(vals[j])
            best_dir = cands[j]
        else:
            step *= 0.6
    return best_val


def _regime_of(f) -> str:
    return SEQUENCE_REGIME if isinstance(f, SparseVector) else FUNCTION_REGIME


def normalization_residual(phi: YoungFunction, f) -> float:
    """Modular at the gauge norm minus one; near zero certifies the doubling
    normalization identity."""
    m, w = _moduli_weights(f)
    if not np.any(m > 0):
        raise DegenerateInputError("normalization residual needs a non-zero element")
    report = check_delta2(phi, _regime_of(f))
    if not report.passes:
        raise PreconditionError("phi fails the doubling condition in this regime")
    b = gauge_norm_weighted(phi, m, w)
    return float(np.sum(w * phi.eval_array(m / b))) - 1.0


@dataclass
class HolderPairing:
    pairing: float
    bound: float
    ok: bool


def _pairing(f, g) -> float:
    if isinstance(f, SparseVector) and isinstance(g, SparseVector):
        keys = f.support() & g.support()
        return float(sum(abs(f.get(k)) * abs(g.get(k)) for k in keys))
    if isinstance(f, StepFunction) and isinstance(g, StepFunction):
        cuts = np.union1d(f.breakpoints, g.breakpoints)
        mids = 0.5 * (cuts[:-1] + cuts[1:])
        fi = np.searchsorted(f.breakpoints, mids, side="right") - 1
        gi = np.searchsorted(g.breakpoints, mids, side="right") - 1
        vals = np.abs(f.values[fi]) * np.abs(g.values[gi])
        return float(np.sum(np.diff(cuts) * vals))
    raise DomainError("pairing requires two elements over the same measure space")


def holder_bound(phi: YoungFunction, f, psi) -> HolderPairing:
    """Non-normalized Hoelder inequality: |<f, psi>| <= 2 ||f||_(phi) ||psi||_(phi*)."""
    pairing = _pairing(f, psi)
    bound = 2.0 * gauge_norm(phi, f) * gauge_norm(phi.conjugate(), psi)
    return HolderPairing(pairing, bound, pairing <= bound + 1e-9)


def nested_gauge_norm(psi: YoungFunction, phi: YoungFunction,
                      xi: CocycleVector) -> float:
    """Gauge norm of the scalar sequence of inner gauge norms."""
    if not len(xi):
        return 0.0
    inner = _inner_norms(phi, xi)
    return gauge_norm_weighted(psi, inner, np.ones(inner.size))


def _inner_norms(phi: YoungFunction, xi: CocycleVector) -> np.ndarray:
    from ._kernels import backend

    vectors = list(xi.entries.values())
    desc = phi.kernel_descriptor()
    if desc is not None and len(vectors) > 16:
        lens = np.fromiter((len(v) for v in vectors), dtype=np.int64,
                           count=len(vectors))
        indptr = np.zeros(len(vectors) + 1, dtype=np.int64)
        np.cumsum(lens, out=indptr[1:])
        data = np.empty(int(indptr[-1]), dtype=float)
        pos = 0
        for v in vectors:
            k = len(v)
            data[pos:pos + k] = v.moduli()
            pos += k
        return backend.gauge_norms_csr(desc, data, np.ones_like(data), indptr)
    return np.array([gauge_norm(phi, v) for v in vectors])


# ---------------------------------------------------------------------------
# JSON wire formats


def vector_to_json(f) -> dict:
    if isinstance(f, SparseVector):
        return {
            "kind": "sparse",
            "entries": [[k, v.real, v.imag] for k, v in sorted(
                f.entries.items(), key=lambda kv: str(kv[0]))],
        }
    if isinstance(f, StepFunction):
        return {
            "kind": "step",
            "breakpoints": list(map(float, f.breakpoints)),
            "values": [[v.real, v.imag] for v in f.values],
        }
    if isinstance(f, CocycleVector):
        return {
            "kind": "nested",
            "entries": [[k, vector_to_json(v)] for k, v in sorted(f.entries.items())],
        }
    raise DomainError(f"cannot serialize {type(f).__name__}")


def vector_from_json(obj: dict):
    try:
        kind = obj["kind"]
        if kind == "sparse":
            return SparseVector({k: complex(re, im) for k, re, im in obj["entries"]})
        if kind == "step":
            return StepFunction(obj["breakpoints"],
                                [complex(re, im) for re, im in obj["values"]])
        if kind == "nested":
            return CocycleVector({k: vector_from_json(v) for k, v in obj["entries"]})
    except (KeyError, TypeError, ValueError) as exc:
        raise ParseError(f"malformed vector JSON: {exc}") from exc
    raise ParseError(f"unknown vector kind {obj.get('kind')!r}")
