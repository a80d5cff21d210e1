"""Young functions and their calculus.

A closed catalog of convex shape functions [0, inf) -> [0, inf] together with
evaluation, inversion, Legendre conjugation, doubling-growth diagnostics,
growth-class index estimation, inverse interpolation, and the ergodic
almost-invariance ratio.  The catalog is closed under conjugation: power
conjugates are stored exactly via a multiplicative ``ScaledBy`` wrapper, the
piecewise-linear transform is exact, and only truly non-closed-form cases fall
back to a grid Legendre transform.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .errors import (
    DegenerateInputError,
    DomainError,
    NotInClassError,
    ParseError,
    PreconditionError,
    UnsupportedVariantError,
)

INF = math.inf

#: Default relative tolerance and iteration cap of every monotone bisection.
BISECT_RTOL = 1e-12
BISECT_MAX_ITER = 200

#: Diagnostic grids span six decades around the regime threshold.
GRID_POINTS = 512
GRID_DECADES = 6

FUNCTION_REGIME = "function"
SEQUENCE_REGIME = "sequence"
_REGIMES = (FUNCTION_REGIME, SEQUENCE_REGIME)


def log_grid(lo: float, hi: float, n: int = GRID_POINTS) -> np.ndarray:
    return np.logspace(math.log10(lo), math.log10(hi), n)


def invert_monotone(fn, y: float, rtol: float = BISECT_RTOL,
                    max_iter: int = BISECT_MAX_ITER) -> float:
    """Solve fn(t) = y for a non-decreasing fn on [0, inf) with fn(0) = 0.

    Bracket found by doubling/halving from t = 1, then bisection until the
    bracket width is below rtol relative to its upper end.
    """
    if y < 0:
        raise DomainError("target must be non-negative")
    if y == 0.0:
        return 0.0
    lo, hi = 0.0, 1.0
    v = fn(hi)
    if v < y:
        while v < y:
            lo, hi = hi, hi * 2.0
            if hi > 1e300:
                raise DomainError("no finite bracket for inversion")
            v = fn(hi)
    else:
        while True:
            cand = hi * 0.5
            if cand < 1e-300:
                break
            if fn(cand) < y:
                lo = cand
                break
            hi = cand
    for _ in range(max_iter):
        if hi - lo <= rtol * hi:
            break
        mid = 0.5 * (lo + hi)
        if fn(mid) < y:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


@dataclass(frozen=True)
class KernelDescriptor:
    """Compact encoding of a Young function for the batch/compiled kernels.

    Codes: 1 = c*t^p, 2 = t^p/p, 3 = t, 4 = indicator band,
    5 = piecewise linear (breaks/slopes/knots arrays).
    """

    code: int
    a: float = 0.0
    b: float = 1.0
    breaks: Optional[np.ndarray] = None
    slopes: Optional[np.ndarray] = None
    knots: Optional[np.ndarray] = None


class YoungFunction:
    """Abstract catalog member; concrete variants are frozen dataclasses."""

    is_n_function: bool = False

    def __call__(self, t: float) -> float:
        if t < 0:
            raise DomainError("Young functions are defined on t >= 0")
        return self._eval(float(t))

    def _eval(self, t: float) -> float:
        raise NotImplementedError

    def eval_array(self, x: np.ndarray) -> np.ndarray:
        raise NotImplementedError

    def inverse(self, y: float) -> float:
        """Right inverse on [0, inf): the t with phi(t) = y."""
        if y < 0:
            raise DomainError("inverse target must be non-negative")
        return self._inverse(float(y))

    def _inverse(self, y: float) -> float:
        return invert_monotone(self._eval, y)

    def conjugate(self) -> "YoungFunction":
        raise NotImplementedError

    def kernel_descriptor(self) -> Optional[KernelDescriptor]:
        form = _power_form(self)
        if form is not None:
            c, p = form
            return KernelDescriptor(code=1, a=p, b=c)
        return None

    def spec_string(self) -> str:
        raise NotImplementedError


@dataclass(frozen=True)
class Power(YoungFunction):
    """t -> t^p for p > 1."""

    p: float

    def __post_init__(self):
        object.__setattr__(self, "p", float(self.p))
        if not self.p > 1:
            raise DomainError("Power requires p > 1")

    is_n_function = True

    def _eval(self, t):
        return t ** self.p

    def eval_array(self, x):
        return np.asarray(x, dtype=float) ** self.p

    def _inverse(self, y):
        return y ** (1.0 / self.p)

    def conjugate(self):
        q = self.p / (self.p - 1.0)
        return ScaledBy((self.p - 1.0) * self.p ** (-q), Power(q))

    def spec_string(self):
        return f"power:{self.p:g}"


@dataclass(frozen=True)
class ScaledPower(YoungFunction):
    """t -> t^p / p for p > 1; self-dual family under conjugation."""

    p: float

    def __post_init__(self):
        object.__setattr__(self, "p", float(self.p))
        if not self.p > 1:
            raise DomainError("ScaledPower requires p > 1")

    is_n_function = True

    def _eval(self, t):
        return t ** self.p / self.p

    def eval_array(self, x):
        return np.asarray(x, dtype=float) ** self.p / self.p

    def _inverse(self, y):
        return (self.p * y) ** (1.0 / self.p)

    def conjugate(self):
        return ScaledPower(self.p / (self.p - 1.0))

    def kernel_descriptor(self):
        return KernelDescriptor(code=2, a=self.p)

    def spec_string(self):
        return f"scaled-power:{self.p:g}"


@dataclass(frozen=True)
class Linear(YoungFunction):
    """t -> t; a Young function but not an N-function."""

    is_n_function = False

    def _eval(self, t):
        return t

    def eval_array(self, x):
        return np.asarray(x, dtype=float).copy()

    def _inverse(self, y):
        return y

    def conjugate(self):
        return IndicatorBand()

    def kernel_descriptor(self):
        return KernelDescriptor(code=3)

    def spec_string(self):
        return "linear"


@dataclass(frozen=True)
class IndicatorBand(YoungFunction):
    """0 on [0, 1], +inf beyond; the Legendre partner of Linear."""

    is_n_function = False

    def _eval(self, t):
        return 0.0 if t <= 1.0 else INF

    def eval_array(self, x):
        x = np.asarray(x, dtype=float)
        return np.where(x <= 1.0, 0.0, INF)

    def _inverse(self, y):
        raise UnsupportedVariantError("IndicatorBand is not invertible on [0, inf)")

    def conjugate(self):
        return Linear()

    def kernel_descriptor(self):
        return KernelDescriptor(code=4)

    def spec_string(self):
        return "indicator"


def _pwl_canonical(breaks, slopes):
    bs = [float(b) for b in breaks]
    ms = [float(m) for m in slopes]
    if len(bs) != len(ms) or not bs:
        raise DomainError("breakpoints and slopes must have equal positive length")
    if bs[0] != 0.0:
        raise DomainError("first breakpoint must be 0")
    if any(b2 <= b1 for b1, b2 in zip(bs, bs[1:])):
        raise DomainError("breakpoints must be strictly increasing")
    if any(m < 0 for m in ms):
        raise DomainError("slopes must be non-negative")
    if any(m2 < m1 for m1, m2 in zip(ms, ms[1:])):
        raise DomainError("slopes must be non-decreasing (convexity)")
    if any(math.isinf(m) for m in ms[:-1]):
        raise DomainError("only the final slope may be infinite")
    out_b, out_m = [bs[0]], [ms[0]]
    for b, m in zip(bs[1:], ms[1:]):
        if m == out_m[-1]:
            continue
        out_b.append(b)
        out_m.append(m)
    return tuple(out_b), tuple(out_m)


@dataclass(frozen=True)
class PiecewiseLinearConvex(YoungFunction):
    """Convex piecewise-linear function: slope[i] applies on [break[i], break[i+1]).

    The final slope extends to infinity and may be ``inf`` (a hard wall).
    """

    breakpoints: tuple
    slopes: tuple
    _knots: tuple = field(default=(), compare=False, repr=False)

    def __post_init__(self):
        b, m = _pwl_canonical(self.breakpoints, self.slopes)
        object.__setattr__(self, "breakpoints", b)
        object.__setattr__(self, "slopes", m)
        knots = [0.0]
        for i in range(len(b) - 1):
            knots.append(knots[-1] + m[i] * (b[i + 1] - b[i]))
        object.__setattr__(self, "_knots", tuple(knots))

    is_n_function = False

    def _eval(self, t):
        b, m, v = self.breakpoints, self.slopes, self._knots
        i = np.searchsorted(b, t, side="right") - 1
        if math.isinf(m[i]):
            return v[i] if t <= b[i] else INF
        return v[i] + m[i] * (t - b[i])

    def eval_array(self, x):
        x = np.asarray(x, dtype=float)
        b = np.asarray(self.breakpoints)
        m = np.asarray(self.slopes)
        v = np.asarray(self._knots)
        idx = np.searchsorted(b, x, side="right") - 1
        out = v[idx] + m[idx] * (x - b[idx])
        wall = np.isinf(m[idx]) & (x > b[idx])
        if wall.any():
            out = np.where(wall, INF, np.where(np.isinf(m[idx]), v[idx], out))
        return out

    def _inverse(self, y):
        b, m, v = self.breakpoints, self.slopes, self._knots
        if m[0] == 0.0 and y > 0 and len(m) == 1:
            raise UnsupportedVariantError("identically flat pwl is not invertible")
        i = int(np.searchsorted(v, y, side="right") - 1)
        i = min(i, len(b) - 1)
        if math.isinf(m[i]):
            return b[i]
        if m[i] == 0.0:
            if y > v[i]:
                raise DomainError("value not attained on a flat piece")
            return b[i]
        return b[i] + (y - v[i]) / m[i]

    def conjugate(self):
        b, m = self.breakpoints, self.slopes
        if math.isinf(m[-1]):
            cb = (0.0,) + m[:-1]
            cm = b
        else:
            cb = (0.0,) + m
            cm = b + (INF,)
        # A leading zero slope duplicates the 0 breakpoint; drop it.
        if len(cb) > 1 and cb[1] == 0.0:
            cb = cb[1:]
            cm = cm[1:]
        return PiecewiseLinearConvex(cb, cm)

    def kernel_descriptor(self):
        return KernelDescriptor(
            code=5,
            breaks=np.asarray(self.breakpoints),
            slopes=np.asarray(self.slopes),
            knots=np.asarray(self._knots),
        )

    def spec_string(self):
        bs = ",".join(f"{b:g}" for b in self.breakpoints)
        ms = ",".join("inf" if math.isinf(m) else f"{m:g}" for m in self.slopes)
        return f"pwl:[{bs}];[{ms}]"


@dataclass(frozen=True)
class ScaledBy(YoungFunction):
    """c * inner(t) for c > 0; closes the catalog under power conjugation."""

    c: float
    inner: YoungFunction

    def __post_init__(self):
        object.__setattr__(self, "c", float(self.c))
        if not self.c > 0:
            raise DomainError("ScaledBy requires c > 0")

    @property
    def is_n_function(self):  # type: ignore[override]
        return self.inner.is_n_function

    def _eval(self, t):
        return self.c * self.inner._eval(t)

    def eval_array(self, x):
        return self.c * self.inner.eval_array(x)

    def _inverse(self, y):
        return self.inner._inverse(y / self.c)

    def conjugate(self):
        form = _power_form(self)
        if form is not None:
            c, q = form
            q2 = q / (q - 1.0)
            c2 = (q - 1.0) / (q * (c * q) ** (1.0 / (q - 1.0)))
            return ScaledBy(c2, Power(q2))
        return numeric_conjugate(self)

    def spec_string(self):
        return f"scaled-by:{self.c:.17g},{self.inner.spec_string()}"


@dataclass(frozen=True)
class Interpolated(YoungFunction):
    """The function whose inverse is (base^-1(y))^(1-s) * y^(s/2), 0 < s <= 1.

    Powers interpolate to powers: for base c*t^p the result is exactly a
    scaled power with exponent p(s) = 1/((1-s)/p + s/2), which the evaluator
    uses; arbitrary bases are inverted numerically by bisection
    (``eval_via_inversion``).
    """

    base: YoungFunction
    s: float

    def __post_init__(self):
        object.__setattr__(self, "s", float(self.s))
        if not 0.0 < self.s <= 1.0:
            raise DomainError("interpolation parameter must lie in (0, 1]")

    @property
    def is_n_function(self):  # type: ignore[override]
        return self.base.is_n_function

    def _form(self):
        return _power_form(self)

    def _eval(self, t):
        form = self._form()
        if form is not None:
            c, p = form
            return c * t ** p
        return self.eval_via_inversion(t)

    def eval_array(self, x):
        form = self._form()
        x = np.asarray(x, dtype=float)
        if form is not None:
            c, p = form
            return c * x ** p
        return np.array([self.eval_via_inversion(float(t)) for t in x])

    def eval_via_inversion(self, t: float) -> float:
        """Evaluate by numerically inverting the defining inverse expression."""
        if t < 0:
            raise DomainError("Young functions are defined on t >= 0")
        if t == 0.0:
            return 0.0
        return invert_monotone(self._inverse, t)

    def _inverse(self, y):
        if y == 0.0:
            return 0.0
        return self.base.inverse(y) ** (1.0 - self.s) * y ** (self.s / 2.0)

    def conjugate(self):
        form = self._form()
        if form is not None:
            return ScaledBy(form[0], Power(form[1])).conjugate()
        return numeric_conjugate(self)

    def spec_string(self):
        return f"interp:{self.base.spec_string()},s={self.s:g}"


def _power_form(phi: YoungFunction):
    """Return (c, p) when phi is structurally c * t^p with p > 1, else None."""
    if isinstance(phi, Power):
        return (1.0, phi.p)
    if isinstance(phi, ScaledPower):
        return (1.0 / phi.p, phi.p)
    if isinstance(phi, ScaledBy):
        inner = _power_form(phi.inner)
        if inner is not None:
            return (phi.c * inner[0], inner[1])
        return None
    if isinstance(phi, Interpolated):
        base = _power_form(phi.base)
        if base is None:
            return None
        cb, pb = base
        ps = 1.0 / ((1.0 - phi.s) / pb + phi.s / 2.0)
        return (cb ** ((1.0 - phi.s) * ps / pb), ps)
    return None


def power_interpolation_exponent(p: float, s: float) -> float:
    """p(s) = 1 / ((1-s)/p + s/2), the interpolated power exponent."""
    return 1.0 / ((1.0 - s) / p + s / 2.0)


def numeric_conjugate(phi: YoungFunction, lo: float = 1e-8, hi: float = 1e8,
                      points: int = 2048) -> PiecewiseLinearConvex:
    """Grid Legendre transform: the exact upper envelope of sampled lines.

    Each sample t contributes the line s -> t*s - phi(t); the envelope is
    convex piecewise linear and is returned exactly as such.  Accuracy is
    limited by the grid; beyond the largest sampled slope the result keeps
    growing linearly instead of following the true transform.
    """
    ts = np.concatenate(([0.0], log_grid(lo, hi, points)))
    vals = phi.eval_array(ts)
    keep = np.isfinite(vals)
    ts, vals = ts[keep], vals[keep]
    # Upper envelope of lines y = t*s - phi(t) on s >= 0, slopes increasing.
    ms: list[float] = []
    cs: list[float] = []
    for t, v in zip(ts, vals):
        m, c = float(t), float(-v)
        if ms and m == ms[-1]:
            if c <= cs[-1]:
                continue
            ms.pop()
            cs.pop()
        while len(ms) >= 2:
            x_new = (cs[-2] - c) / (m - ms[-2])
            x_old = (cs[-2] - cs[-1]) / (ms[-1] - ms[-2])
            if x_new <= x_old:
                ms.pop()
                cs.pop()
            else:
                break
        if len(ms) == 1 and (cs[-1] - c) / (m - ms[-1]) <= 0.0:
            ms.pop()
            cs.pop()
        ms.append(m)
        cs.append(c)
    breaks = [0.0]
    for i in range(1, len(ms)):
        breaks.append((cs[i - 1] - cs[i]) / (ms[i] - ms[i - 1]))
    return PiecewiseLinearConvex(tuple(breaks), tuple(ms))


def conjugate(phi: YoungFunction) -> YoungFunction:
    """The complementary (Legendre) function sup_t {s*t - phi(t)}."""
    return phi.conjugate()


@dataclass(frozen=True)
class KClassIndices:
    """Certified growth-class exponents: phi(t)/t^alpha non-decreasing and
    phi(t)/t^beta non-increasing on the diagnostic grid."""

    alpha: float
    beta: float

    def __post_init__(self):
        if not (0 < self.alpha <= self.beta < INF):
            raise DomainError("need 0 < alpha <= beta < inf")


@dataclass
class GrowthReport:
    passes: bool
    constant: float
    threshold: float
    regime: str
    evidence: list

    def to_json(self) -> dict:
        c = self.constant
        return {
            "passes": self.passes,
            "constant": c if math.isfinite(c) else None,
            "threshold": self.threshold,
            "regime": self.regime,
            "evidence": [[t, r if math.isfinite(r) else None] for t, r in self.evidence],
        }


def _regime_grid(regime: str, t0: float) -> np.ndarray:
    if regime not in _REGIMES:
        raise DomainError(f"regime must be one of {_REGIMES}")
    if regime == FUNCTION_REGIME:
        return log_grid(t0, t0 * 10.0 ** GRID_DECADES)
    return log_grid(t0 * 10.0 ** (-GRID_DECADES), t0)


def _decimate(ts, rs, every=32):
    out = [(float(ts[i]), float(rs[i])) for i in range(0, len(ts), every)]
    j = int(np.argmax(np.where(np.isnan(rs), -INF, rs)))
    out.append((float(ts[j]), float(rs[j])))
    return out


def check_delta2(phi: YoungFunction, regime: str, t0: float = 1.0) -> GrowthReport:
    """Doubling condition phi(2t) <= K*phi(t) on the regime grid.

    Function regime scans t in [t0, 1e6*t0] (behaviour at large t); sequence
    regime scans t in [1e-6*t0, t0] (small t).
    """
    grid = _regime_grid(regime, t0)
    v1 = phi.eval_array(grid)
    v2 = phi.eval_array(2.0 * grid)
    if np.all(v1 == 0.0):
        raise DegenerateInputError("phi vanishes identically on the diagnostic grid")
    with np.errstate(divide="ignore", invalid="ignore"):
        ratio = np.where(
            v1 > 0,
            np.where(np.isinf(v1), np.where(np.isinf(v2), np.nan, 0.0), v2 / v1),
            np.where(v2 > 0, INF, np.nan),
        )
    finite_part = ratio[~np.isnan(ratio)]
    K = float(np.max(finite_part)) if finite_part.size else 0.0
    return GrowthReport(
        passes=math.isfinite(K),
        constant=K,
        threshold=t0,
        regime=regime,
        evidence=_decimate(grid, ratio),
    )


#: Doubling-constant candidates for the lower growth condition, c in (1, 64].
_NABLA2_CANDIDATES = tuple(2.0 ** (k / 4.0) for k in range(1, 25))


def check_nabla2(phi: YoungFunction, regime: str, t0: float = 1.0) -> GrowthReport:
    """Lower doubling condition 2c*phi(t) <= phi(ct) for some c > 1."""
    grid = _regime_grid(regime, t0)
    v1 = phi.eval_array(grid)
    if np.all(v1 == 0.0) and np.all(phi.eval_array(64.0 * grid) == 0.0):
        raise DegenerateInputError("phi vanishes identically on the diagnostic grid")
    for c in _NABLA2_CANDIDATES:
        lhs = 2.0 * c * v1
        rhs = phi.eval_array(c * grid)
        with np.errstate(invalid="ignore"):
            ok = (lhs <= rhs * (1.0 + 1e-12)) | (np.isinf(lhs) & np.isinf(rhs))
        if bool(np.all(ok)):
            with np.errstate(divide="ignore", invalid="ignore"):
                margin = np.where(lhs > 0, rhs / lhs, INF)
            return GrowthReport(True, float(c), t0, regime, _decimate(grid, margin))
    return GrowthReport(False, INF, t0, regime, [])


def k_class_indices(phi: YoungFunction, lo: float = 1e-6, hi: float = 1e6,
                    points: int = GRID_POINTS) -> KClassIndices:
    """Estimate (alpha, beta) as inf/sup of log-log slopes on the grid, then
    certify the two monotonicity properties, widening by the least margin
    needed (at most 10 rounds).

    Structurally homogeneous catalog members (c * t^p) short-circuit to the
    exact point indices (p, p); the grid estimator is kept for everything
    else and is what ``k_class_indices_grid`` exposes for cross-checks.
    """
    form = _power_form(phi)
    if form is not None:
        return KClassIndices(form[1], form[1])
    return k_class_indices_grid(phi, lo, hi, points)


def k_class_indices_grid(phi: YoungFunction, lo: float = 1e-6, hi: float = 1e6,
                         points: int = GRID_POINTS) -> KClassIndices:
    grid = log_grid(lo, hi, points)
    vals = phi.eval_array(grid)
    if not np.all(np.isfinite(vals)) or not np.all(vals > 0):
        raise NotInClassError("phi must be finite and positive on the grid")
    logt = np.log(grid)
    logv = np.log(vals)
    slopes = np.diff(logv) / np.diff(logt)
    alpha = float(np.min(slopes))
    beta = float(np.max(slopes))
    tol = 1e-9
    for round_ in range(10):
        g_lo = logv - alpha * logt
        g_hi = logv - beta * logt
        bad_lo = float(np.max(g_lo[:-1] - g_lo[1:], initial=0.0))
        bad_hi = float(np.max(g_hi[1:] - g_hi[:-1], initial=0.0))
        if bad_lo <= tol and bad_hi <= tol:
            if alpha <= 0:
                raise NotInClassError("alpha collapsed to 0; not in any class")
            return KClassIndices(alpha, beta)
        step = float(np.min(np.diff(logt)))
        alpha -= (bad_lo / step) * (1.0 + 10.0 ** round_ * 1e-12)
        beta += (bad_hi / step) * (1.0 + 10.0 ** round_ * 1e-12)
    raise NotInClassError("monotonicity not certifiable in 10 adjustment rounds")


def interpolate(phi: YoungFunction, s: float) -> Interpolated:
    """Inverse-interpolation toward the quadratic: the spec's Phi_(s)."""
    if not 0.0 < s <= 1.0:
        raise DomainError("s must lie in (0, 1]")
    if not phi.is_n_function:
        raise PreconditionError("interpolation requires an N-function base")
    return Interpolated(phi, s)


def almost_invariance_bound(phi: YoungFunction, eps: float) -> float:
    """Displacement-to-norm ratio 2*phi^-1(2) / phi^-1(1/eps) of the
    asymptotically-invariant indicator vectors, eps in (0, 1]."""
    if not 0.0 < eps <= 1.0:
        raise DomainError("eps must lie in (0, 1]")
    return 2.0 * phi.inverse(2.0) / phi.inverse(1.0 / eps)


def parse_young(spec: str) -> YoungFunction:
    """Parse a Young-function spec string.

    Grammar: ``power:P``, ``scaled-power:P``, ``linear``, ``indicator``,
    ``pwl:[b0,b1,...];[m0,m1,...]``, ``interp:<base>,s=S``,
    ``scaled-by:C,<inner>``.
    """
    s = spec.strip()
    try:
        if s == "linear":
            return Linear()
        if s == "indicator":
            return IndicatorBand()
        if s.startswith("power:"):
            return Power(float(s[len("power:"):]))
        if s.startswith("scaled-power:"):
            return ScaledPower(float(s[len("scaled-power:"):]))
        if s.startswith("pwl:"):
            body = s[len("pwl:"):]
            bpart, mpart = body.split(";")
            breaks = tuple(float(x) for x in bpart.strip()[1:-1].split(","))
            slopes = tuple(
                INF if x.strip() in ("inf", "+inf") else float(x)
                for x in mpart.strip()[1:-1].split(",")
            )
            return PiecewiseLinearConvex(breaks, slopes)
        if s.startswith("interp:"):
            body = s[len("interp:"):]
            base_spec, s_part = body.rsplit(",s=", 1)
            return interpolate(parse_young(base_spec), float(s_part))
        if s.startswith("scaled-by:"):
            body = s[len("scaled-by:"):]
            c_part, inner_spec = body.split(",", 1)
            return ScaledBy(float(c_part), parse_young(inner_spec))
    except (DomainError, PreconditionError):
        raise
    except Exception as exc:
        raise ParseError(f"malformed Young-function spec {spec!r}: {exc}") from exc
    raise ParseError(f"unknown Young-function spec {spec!r}")


def format_young(phi: YoungFunction) -> str:
    return phi.spec_string()
