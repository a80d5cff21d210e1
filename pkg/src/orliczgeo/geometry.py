"""Convexity and smoothness moduli of finite-dimensional Orlicz spaces and a
subgradient search for near-fixed points of affine isometric actions.

Moduli are estimated by sampling feasible pairs on the gauge-norm unit sphere
and refining the best pair; a sampled minimum can only overestimate the true
infimum, so every comparison in this module is stated in the direction a
sample certifies.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .errors import DomainError, SearchExhaustedError, UnsupportedVariantError
from .spaces import gauge_norm_weighted
from .young import YoungFunction, _power_form


def lp_modulus(p: float, eps: float) -> float:
    """Clarkson's modulus of convexity 1 - (1 - (eps/2)^p)^(1/p), p >= 2."""
    if p < 2.0:
        raise DomainError("closed form requires p >= 2")
    if not 0.0 < eps <= 2.0:
        raise DomainError("eps must lie in (0, 2]")
    return 1.0 - (1.0 - (eps / 2.0) ** p) ** (1.0 / p)


def hilbert_smoothness(tau: float) -> float:
    """sqrt(1 + tau^2) - 1, the modulus of smoothness of a Hilbert space."""
    return math.hypot(1.0, tau) - 1.0


def vector_gauge_norm(phi: YoungFunction, x: np.ndarray) -> float:
    """Gauge norm of a dense real/complex coordinate vector."""
    form = _power_form(phi)
    m = np.abs(np.asarray(x))
    if form is not None:
        c, p = form
        return float(c ** (1.0 / p) * np.sum(m ** p) ** (1.0 / p))
    return gauge_norm_weighted(phi, m, np.ones(m.size))


def _batch_norms(phi: YoungFunction, rows: np.ndarray) -> np.ndarray:
    form = _power_form(phi)
    m = np.abs(rows)
    if form is not None:
        c, p = form
        return c ** (1.0 / p) * np.sum(m ** p, axis=1) ** (1.0 / p)
    return np.array([gauge_norm_weighted(phi, r, np.ones(r.size)) for r in m])


@dataclass
class ModulusEstimate:
    """A witnessed one-sided bound: `value` re-evaluates at `witness` exactly."""

    epsilon: float
    value: float
    witness: tuple
    samples: int


def _sample_unit_pairs(phi, dim, samples, rng):
    u = rng.standard_normal((samples, dim))
    v = rng.standard_normal((samples, dim))
    third = samples // 3
    v[:third] = -u[:third]
    v[third:2 * third] = -u[third:2 * third] + 0.3 * v[third:2 * third]
    u /= _batch_norms(phi, u)[:, None]
    v /= _batch_norms(phi, v)[:, None]
    return u, v


def _tighten_to_constraint(phi, u, v, eps, iters=80):
    """Slide v toward u along normalized chords until ||u - v|| ~ eps from above."""
    lo, hi = 0.0, 1.0
    norm = vector_gauge_norm
    for _ in range(iters):
        mid = 0.5 * (lo + hi)
        w = (1.0 - mid) * v + mid * u
        n = norm(phi, w)
        if n == 0.0:
            hi = mid
            continue
        w = w / n
        if norm(phi, u - w) >= eps:
            lo = mid
        else:
            hi = mid
    w = (1.0 - lo) * v + lo * u
    return w / norm(phi, w)


def convexity_modulus_estimate(phi: YoungFunction, dim: int, eps: float,
                               samples: int = 100000, seed: int = 0,
                               refine: bool = True) -> ModulusEstimate:
    """Sampled upper bound of inf{1 - ||(u+v)/2|| : ||u||=||v||=1, ||u-v||>=eps}.

    Random feasible pairs (a third of them exactly antipodal so the eps = 2
    diameter case stays feasible) plus local refinement of the best pair:
    first pull the pair onto the active constraint, then coordinate descent
    along it.
    """
    if dim < 2:
        raise DomainError("need dim >= 2")
    if not 0.0 < eps <= 2.0:
        raise DomainError("eps must lie in (0, 2]")
    rng = np.random.default_rng(seed)
    u, v = _sample_unit_pairs(phi, dim, samples, rng)
    gaps = _batch_norms(phi, u - v)
    feas = gaps >= eps
    if not feas.any():
        raise SearchExhaustedError(f"no feasible pair at eps={eps} in {samples} samples")
    mids = _batch_norms(phi, 0.5 * (u[feas] + v[feas]))
    vals = 1.0 - mids
    j = int(np.argmin(vals))
    bu, bv = u[feas][j].copy(), v[feas][j].copy()
    best = float(vals[j])
    if refine:
        bu, bv, best = _refine_convexity(phi, bu, bv, eps)
    return ModulusEstimate(eps, best, (bu, bv), samples)


def _pair_value(phi, u, v):
    return 1.0 - vector_gauge_norm(phi, 0.5 * (u + v))


def _refine_convexity(phi, u, v, eps, rounds=60):
    v = _tighten_to_constraint(phi, u, v, eps)
    best = _pair_value(phi, u, v)
    step = 0.3
    dim = u.size
    for _ in range(rounds):
        improved = False
        for i in range(dim):
            for sgn in (1.0, -1.0):
                uu = u.copy()
                uu[i] += sgn * step
                uu /= vector_gauge_norm(phi, uu)
                if vector_gauge_norm(phi, uu - v) < eps:
                    continue
                vv = _tighten_to_constraint(phi, uu, v, eps)
                if vector_gauge_norm(phi, uu - vv) < eps * (1.0 - 1e-12):
                    continue
                val = _pair_value(phi, uu, vv)
                if val < best:
                    u, v, best = uu, vv, val
                    improved = True
        if not improved:
            step *= 0.5
            if step < 1e-9:
                break
    return u, v, best


def convexity_modulus_profile(phi: YoungFunction, dim: int, eps_grid,
                              samples: int = 100000, seed: int = 0):
    """Estimates over an eps grid with shared samples and witness reuse.

    A pair feasible at a larger eps is feasible at every smaller one, so
    propagating witnesses down the grid makes the profile non-decreasing by
    construction.
    """
    eps_grid = sorted(float(e) for e in eps_grid)
    ests = [convexity_modulus_estimate(phi, dim, e, samples, seed) for e in eps_grid]
    for i in range(len(ests) - 2, -1, -1):
        if ests[i + 1].value < ests[i].value:
            nxt = ests[i + 1]
            ests[i] = ModulusEstimate(ests[i].epsilon, nxt.value, nxt.witness,
                                      ests[i].samples)
    return ests


def smoothness_modulus_estimate(phi: YoungFunction, dim: int, tau: float,
                                samples: int = 100000, seed: int = 0,
                                variant: str = "sup",
                                refine: bool = True) -> ModulusEstimate:
    """Sampled modulus of smoothness sup{(||u+v|| + ||u-v||)/2 - 1 : ||u||=1,
    ||v||=tau}; ``variant="inf"`` computes the infimum instead."""
    if dim < 2:
        raise DomainError("need dim >= 2")
    if tau <= 0.0:
        raise DomainError("tau must be positive")
    if variant not in ("sup", "inf"):
        raise DomainError("variant must be 'sup' or 'inf'")
    rng = np.random.default_rng(seed)
    u = rng.standard_normal((samples, dim))
    v = rng.standard_normal((samples, dim))
    u /= _batch_norms(phi, u)[:, None]
    v *= (tau / _batch_norms(phi, v))[:, None]
    vals = 0.5 * (_batch_norms(phi, u + v) + _batch_norms(phi, u - v)) - 1.0
    sign = 1.0 if variant == "sup" else -1.0
    j = int(np.argmax(sign * vals))
    bu, bv = u[j].copy(), v[j].copy()
    best = float(vals[j])

    def value(a, b):
        return 0.5 * (vector_gauge_norm(phi, a + b) + vector_gauge_norm(phi, a - b)) - 1.0

    if refine:
        step = 0.3
        for _ in range(70):
            improved = False
            for i in range(dim):
                for sgn in (1.0, -1.0):
                    for which in (0, 1):
                        uu, vv = bu.copy(), bv.copy()
                        if which == 0:
                            uu[i] += sgn * step
                            uu /= vector_gauge_norm(phi, uu)
                        else:
                            vv[i] += sgn * step
                            vv *= tau / vector_gauge_norm(phi, vv)
                        val = value(uu, vv)
                        if sign * val > sign * best:
                            bu, bv, best = uu, vv, val
                            improved = True
            if not improved:
                step *= 0.5
                if step < 1e-9:
                    break
    return ModulusEstimate(tau, best, (bu, bv), samples)


@dataclass
class RaoRenResult:
    estimate: ModulusEstimate
    bound: float
    ok: bool


def rao_ren_check(base: YoungFunction, s: float, eps: float, dim: int = 2,
                  samples: int = 100000, seed: int = 0) -> RaoRenResult:
    """Interpolated-space modulus estimate against the 2/s Clarkson bound.

    The sampled value upper-bounds the true infimum, so estimate >= bound - tol
    is the valid necessary direction of the comparison theorem."""
    from .young import interpolate

    est = convexity_modulus_estimate(interpolate(base, s), dim, eps, samples, seed)
    bound = lp_modulus(2.0 / s, eps)
    return RaoRenResult(est, bound, est.value >= bound - 1e-6)


# ---------------------------------------------------------------------------
# Affine isometric actions and the displacement-halving search


@dataclass
class AffineAction:
    """Affine isometric maps x -> A_g x + t_g over a finite element list.

    ``table`` (when provided) is the group composition law used by
    ``validate``; generator-only bundles leave it None.
    """

    phi: YoungFunction
    dim: int
    elements: tuple
    linear: dict
    translation: dict
    table: Optional[dict] = None

    def apply(self, g: str, x: np.ndarray) -> np.ndarray:
        return self.linear[g] @ x + self.translation[g]

    def displacement(self, x: np.ndarray):
        best, arg = 0.0, None
        for g in self.elements:
            d = vector_gauge_norm(self.phi, self.apply(g, x) - x)
            if d > best:
                best, arg = d, g
        return best, arg

    def validate(self, seed: int = 0, trials: int = 32, tol: float = 1e-10) -> bool:
        rng = np.random.default_rng(seed)
        xs = rng.standard_normal((trials, self.dim))
        for g in self.elements:
            for x in xs:
                nx = vector_gauge_norm(self.phi, x)
                if abs(vector_gauge_norm(self.phi, self.linear[g] @ x) - nx) > tol * max(1.0, nx):
                    raise DomainError(f"linear part of {g!r} is not a gauge isometry")
        if self.table is not None:
            for (g, h), gh in self.table.items():
                for x in xs[:8]:
                    lhs = self.apply(g, self.apply(h, x))
                    rhs = x if gh == "e" else self.apply(gh, x)
                    if vector_gauge_norm(self.phi, lhs - rhs) > tol * 10:
                        raise DomainError(f"action law fails at ({g!r}, {h!r})")
        return True


@dataclass
class FixedPointResult:
    point: np.ndarray
    residual: float
    iterations: int
    halving_trace: list
    converged: bool
    message: str = ""
    trace: list = field(default_factory=list)


def fixed_point_search(phi: YoungFunction, action: AffineAction, x0,
                       tol: float = 1e-6, max_iter: int = 10000) -> FixedPointResult:
    """Minimize x -> max_g ||alpha(g)x - x|| by subgradient descent with the
    Polyak step (target value 0), tracking the best point seen.

    The reported trace is of best-so-far residuals, hence non-increasing; the
    halving trace records the iterations at which it halves.  Stagnation above
    tol is reported in the result, not raised.
    """
    form = _power_form(phi)
    if form is None:
        raise UnsupportedVariantError("subgradient needs a homogeneous gauge (power)")
    c, p = form
    scale = c ** (1.0 / p)

    x = np.asarray(x0, dtype=float).copy()
    if not action.elements:
        return FixedPointResult(x, 0.0, 0, [(0, 0.0)], True, "trivial group")

    best_x = x.copy()
    best_r, _ = action.displacement(x)
    trace = [best_r]
    halving = [(0, best_r)]
    it = 0
    for it in range(1, max_iter + 1):
        r, g = action.displacement(x)
        if r < best_r:
            best_r, best_x = r, x.copy()
            if halving[-1][1] > 0 and best_r <= 0.5 * halving[-1][1]:
                halving.append((it, best_r))
        trace.append(best_r)
        if best_r <= tol:
            return FixedPointResult(best_x, best_r, it, halving, True, "", trace)
        w = action.apply(g, x) - x
        nw = np.sum(np.abs(w) ** p) ** (1.0 / p)
        grad_norm = scale * np.sign(w) * (np.abs(w) / nw) ** (p - 1.0)
        sg = (action.linear[g] - np.eye(action.dim)).T @ grad_norm
        denom = float(np.dot(sg, sg))
        if denom == 0.0:
            break
        x = x - (r / denom) * sg
    converged = best_r <= tol
    msg = "" if converged else f"residual stagnated at {best_r:.3e} > tol"
    return FixedPointResult(best_x, best_r, it, halving, converged, msg, trace)


# ---------------------------------------------------------------------------
# Bundled scenarios


def cyclic_shift_scenario(translation=None):
    """Order-4 coordinate rotation on the quadratic 4-space composed with a
    zero-sum translation; the fixed point solves (I - rho)x = tau."""
    from .young import Power

    dim = 4
    rho = np.roll(np.eye(dim), 1, axis=0)
    tau = np.array([1.0, -1.0, 0.5, -0.5]) if translation is None else \
        np.asarray(translation, dtype=float)
    if abs(tau.sum()) > 1e-12:
        raise DomainError("translation must be zero-sum for the rotation action")
    linear = {}
    trans = {}
    A = np.eye(dim)
    t = np.zeros(dim)
    names = []
    for k in range(1, 4):
        t = rho @ t + tau if k > 1 else tau
        A = rho @ A if k > 1 else rho
        name = "g" * k
        names.append(name)
        linear[name] = A.copy()
        trans[name] = t.copy()
    table = {}
    for i in range(1, 4):
        for j in range(1, 4):
            k = (i + j) % 4
            table[("g" * i, "g" * j)] = "g" * k if k else "e"
    return AffineAction(Power(2.0), dim, tuple(names), linear, trans, table)


def cyclic_shift_oracle(action: AffineAction) -> np.ndarray:
    """Least-norm solution of (I - rho)x = tau, the zero-sum fixed point."""
    rho = action.linear["g"]
    tau = action.translation["g"]
    return np.linalg.pinv(np.eye(action.dim) - rho) @ tau


def diagonal_reflection_scenario(c: float = 1.0):
    """Order-2 negated swap on the quartic plane with diagonal translation
    (c, c); the fixed line x1 + x2 = c meets the diagonal at (c/2, c/2)."""
    from .young import Power

    A = np.array([[0.0, -1.0], [-1.0, 0.0]])
    tau = np.array([c, c])
    return AffineAction(Power(4.0), 2, ("s",), {"s": A}, {"s": tau},
                        {("s", "s"): "e"})


def diagonal_reflection_oracle(action: AffineAction, span: float = 10.0) -> np.ndarray:
    """1-d minimization of the displacement along the diagonal."""
    c = action.translation["s"][0]
    lo, hi = -span + c, span + c

    def f(a):
        x = np.array([a, a])
        return action.displacement(x)[0]

    for _ in range(200):
        m1 = lo + (hi - lo) / 3.0
        m2 = hi - (hi - lo) / 3.0
        if f(m1) <= f(m2):
            hi = m2
        else:
            lo = m1
    a = 0.5 * (lo + hi)
    return np.array([a, a])
