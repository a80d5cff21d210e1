"""Pure-Python/numpy kernel backend.

Mirrors the compiled core's contract.  The batched gauge norm is a vectorized
bisection over CSR rows.  The cocycle routines use the exact class structure
of branches hanging off a geodesic spine (or off the (e, g, gh) tripod): in a
tree, every walk target depends only on the attachment vertex and the branch
depth, so per-class representatives plus multiplicity counts cover all of the
support exactly.  The compiled core instead enumerates every vertex; backend
parity tests tie the two together.
"""

from __future__ import annotations

import math

import numpy as np

from ..errors import DomainError
from ..words import (
    ball_size,
    generator_letters,
    inverse_word,
    multiply,
    tube_vertices,
    walk_toward,
)

NAME = "pure"


# ---------------------------------------------------------------------------
# Batched gauge norms over CSR rows of non-negative moduli


def _desc_eval(code, a, b, breaks, slopes, knots, x):
    if code == 1:
        return b * np.power(x, a)
    if code == 2:
        return np.power(x, a) / a
    if code == 3:
        return np.asarray(x, dtype=float)
    if code == 4:
        return np.where(np.asarray(x) <= 1.0, 0.0, np.inf)
    if code == 5:
        x = np.asarray(x, dtype=float)
        idx = np.searchsorted(breaks, x, side="right") - 1
        out = knots[idx] + slopes[idx] * (x - breaks[idx])
        wall = np.isinf(slopes[idx])
        if wall.any():
            out = np.where(wall & (x > breaks[idx]), np.inf,
                           np.where(wall, knots[idx], out))
        return out
    raise DomainError(f"unknown kernel code {code}")


def _desc_inverse(code, a, b, breaks, slopes, knots, y):
    if code == 1:
        return (y / b) ** (1.0 / a)
    if code == 2:
        return (a * y) ** (1.0 / a)
    if code == 3:
        return y
    if code == 5:
        i = int(np.searchsorted(knots, y, side="right") - 1)
        i = min(i, len(breaks) - 1)
        if math.isinf(slopes[i]) or slopes[i] == 0.0:
            return float(breaks[i])
        return float(breaks[i] + (y - knots[i]) / slopes[i])
    raise DomainError(f"kernel code {code} has no inverse")


def gauge_norms_csr(code, a, b, breaks, slopes, knots, data, weights, indptr,
                    rtol=1e-12, max_iter=200):
    """Gauge norm of each CSR row: inf{t : sum_i w_i phi(m_i/t) <= 1}."""
    indptr = np.asarray(indptr, dtype=np.int64)
    data = np.asarray(data, dtype=float)
    weights = np.asarray(weights, dtype=float)
    n = indptr.size - 1
    out = np.zeros(n)
    counts = np.diff(indptr)
    nonempty = counts > 0
    if not nonempty.any():
        return out
    starts = indptr[:-1][nonempty]
    rowmax = np.maximum.reduceat(data, starts)
    if code == 4:
        out[nonempty] = rowmax
        return out
    sumw = np.add.reduceat(weights, starts)
    at_max = np.where(data == np.repeat(rowmax, counts[nonempty]), weights, 0.0)
    w_at_max = np.maximum.reduceat(at_max, starts)
    cnt = counts[nonempty]

    def modular(t):
        with np.errstate(over="ignore", divide="ignore", invalid="ignore"):
            vals = _desc_eval(code, a, b, breaks, slopes, knots,
                              data / np.repeat(t, cnt))
        return np.add.reduceat(weights * vals, starts)

    inv_hi = np.array([_desc_inverse(code, a, b, breaks, slopes, knots, 1.0 / s)
                       for s in sumw])
    inv_lo = np.array([_desc_inverse(code, a, b, breaks, slopes, knots, 1.0 / w)
                       for w in w_at_max])
    hi = rowmax / inv_hi
    lo = np.minimum(rowmax / np.where(inv_lo > 0, inv_lo, np.inf), hi)
    for _ in range(80):
        bad = modular(hi) > 1.0
        if not bad.any():
            break
        hi = np.where(bad, hi * 2.0, hi)
    for _ in range(80):
        room = (modular(lo) <= 1.0) & (lo > 1e-300)
        if not room.any():
            break
        hi = np.where(room, lo, hi)
        lo = np.where(room, lo * 0.5, lo)
    for _ in range(max_iter):
        if np.all(hi - lo <= rtol * hi):
            break
        mid = 0.5 * (lo + hi)
        below = modular(mid) <= 1.0
        hi = np.where(below, mid, hi)
        lo = np.where(below, lo, mid)
    out[nonempty] = np.where(lo <= 1e-300, 0.0, hi)
    return out


# ---------------------------------------------------------------------------
# Cocycle support statistics (class counts; exact in a tree)


def cocycle_support_stats(g: str, rank: int, delta: int):
    """(support size, non-zero entry count) for the coboundary of g.

    Support = {gamma : d(gamma, [e, g]) <= 10*delta}; the entry at gamma is
    non-zero exactly when d(gamma, [e, g]) <= 10*delta - 1 (for g != e the
    two walk targets then lie on opposite sides of the attachment vertex).
    """
    d = len(g)
    R = 10 * delta
    q = 2 * rank - 1
    if d == 0:
        return ball_size(rank, R), 0
    off_total = (d + 1) * 2 * rank - 2 * d
    per_dir_R = (q ** R - 1) // (q - 1)
    per_dir_r = (q ** (R - 1) - 1) // (q - 1)
    support = (d + 1) + off_total * per_dir_R
    nonzero = (d + 1) + off_total * per_dir_r
    return support, nonzero


# ---------------------------------------------------------------------------
# Cocycle identity verification


def _dirac_diff(u, w):
    if u == w:
        return {}
    return {u: 1.0, w: -1.0}


def _entry_lhs(gamma, gh, R):
    return _dirac_diff(walk_toward(gamma, gh, R), walk_toward(gamma, "", R))


def _entry_rhs(gamma, g, g_inv, h, R):
    out = dict(_dirac_diff(walk_toward(gamma, g, R), walk_toward(gamma, "", R)))
    gp = multiply(g_inv, gamma)
    for x, c in _dirac_diff(walk_toward(gp, h, R), walk_toward(gp, "", R)).items():
        key = multiply(g, x)
        nv = out.get(key, 0.0) + c
        if nv == 0.0:
            out.pop(key, None)
        else:
            out[key] = nv
    return out


def _residual(lhs, rhs):
    keys = set(lhs) | set(rhs)
    return sum(abs(lhs.get(k, 0.0) - rhs.get(k, 0.0)) for k in keys)


def _tripod(g, h):
    verts = {""}
    cur = ""
    for ch in g:
        cur = multiply(cur, ch)
        verts.add(cur)
    cur = g
    for ch in h:
        cur = multiply(cur, ch)
        verts.add(cur)
    return verts


def _branch_representatives(first, r, gens, patterns):
    """Deterministic reduced branch words of depth r starting with `first`."""
    reps = []
    for pat in range(patterns if r >= 2 else 1):
        letters = [first]
        for _ in range(r - 1):
            prev = letters[-1]
            choices = [c for c in gens if not (c != prev and c.lower() == prev.lower())]
            letters.append(choices[0] if pat == 0 else choices[-1])
        reps.append("".join(letters))
    return reps


def cocycle_identity_pair(g: str, h: str, rank: int, delta: int,
                          patterns: int = 2):
    """Max entry residual of b(gh) - pi(g)b(h) - b(g) over the full support.

    Off-tripod branches are grouped into (vertex, depth, direction) classes;
    entries are constant on each class (tree geometry), so checking
    representatives with multiplicity bookkeeping covers every gamma.  Depth
    runs to 10*delta + 1; beyond, all walk targets coincide along the branch.
    """
    R = 10 * delta
    gh = multiply(g, h)
    g_inv = inverse_word(g)
    gens = generator_letters(rank)
    tripod = _tripod(g, h)
    maxres = 0.0
    classes = 0
    for v in tripod:
        classes += 1
        maxres = max(maxres, _residual(_entry_lhs(v, gh, R),
                                       _entry_rhs(v, g, g_inv, h, R)))
        off = [c for c in gens if multiply(v, c) not in tripod]
        for first in off:
            for r in range(1, R + 2):
                for t in _branch_representatives(first, r, gens, patterns):
                    gamma = v + t
                    classes += 1
                    maxres = max(maxres, _residual(
                        _entry_lhs(gamma, gh, R),
                        _entry_rhs(gamma, g, g_inv, h, R)))
    return maxres, classes


def cocycle_identity_all(words, rank: int, delta: int, patterns: int = 2):
    """Max residual of the cocycle identity over all ordered word pairs."""
    maxres = 0.0
    worst = ("", "")
    classes = 0
    for g in words:
        for h in words:
            res, cl = cocycle_identity_pair(g, h, rank, delta, patterns)
            classes += cl
            if res > maxres:
                maxres = res
                worst = (g, h)
    return maxres, worst, len(words) ** 2, classes


def cocycle_stream_compare(g: str, h: str, rank: int, delta: int):
    """Entry-by-entry streamed comparison of both identity sides over the
    whole tripod tube.  Exhaustive; cost grows like (|g|+|h|) * (2k-1)^(10d)."""
    R = 10 * delta
    gh = multiply(g, h)
    g_inv = inverse_word(g)
    maxres = 0.0
    count = 0
    for gamma in tube_vertices(sorted(_tripod(g, h)), rank, R):
        count += 1
        maxres = max(maxres, _residual(_entry_lhs(gamma, gh, R),
                                       _entry_rhs(gamma, g, g_inv, h, R)))
    return maxres, count


def cocycle_stream_stats(g: str, rank: int, delta: int):
    """Per-vertex streamed (support, nonzero) count for the coboundary of g.

    Same contract as the compiled core's honest enumeration; the pure
    closed-form ``cocycle_support_stats`` is the fast path.
    """
    R = 10 * delta
    spine = [""]
    cur = ""
    for ch in g:
        cur = multiply(cur, ch)
        spine.append(cur)
    support = 0
    nonzero = 0
    for gamma in tube_vertices(spine, rank, R):
        support += 1
        if walk_toward(gamma, g, R) != walk_toward(gamma, "", R):
            nonzero += 1
    return support, nonzero
