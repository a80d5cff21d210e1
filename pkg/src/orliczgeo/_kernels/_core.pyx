# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled kernel core.

Words travel as int8 code arrays (a->0, A->1, b->2, B->3, ...; code ^ 1 is
the inverse letter).  Every cocycle routine recomputes walk targets per
vertex from the raw words, so the results are independent of the pure
backend's class-count shortcuts; parity tests compare the two.
"""

from libc.math cimport INFINITY, pow as cpow

import numpy as np

DEF WORD_CAP = 192


# ---------------------------------------------------------------------------
# Young-function evaluation for the batched gauge norm

cdef double yf_eval(int code, double a, double b, double[::1] breaks,
                    double[::1] slopes, double[::1] knots, double t) noexcept nogil:
    cdef Py_ssize_t i
    if code == 1:
        return b * cpow(t, a)
    if code == 2:
        return cpow(t, a) / a
    if code == 3:
        return t
    if code == 4:
        return 0.0 if t <= 1.0 else INFINITY
    i = breaks.shape[0] - 1
    while i > 0 and breaks[i] > t:
        i -= 1
    if slopes[i] == INFINITY:
        return knots[i] if t <= breaks[i] else INFINITY
    return knots[i] + slopes[i] * (t - breaks[i])


cdef double row_modular(int code, double a, double b, double[::1] breaks,
                        double[::1] slopes, double[::1] knots,
                        double[::1] data, double[::1] weights,
                        Py_ssize_t lo, Py_ssize_t hi, double t) noexcept nogil:
    cdef double s = 0.0
    cdef Py_ssize_t i
    for i in range(lo, hi):
        s += weights[i] * yf_eval(code, a, b, breaks, slopes, knots, data[i] / t)
        if s == INFINITY:
            return s
    return s


def gauge_norms_csr(int code, double a, double b, double[::1] breaks,
                    double[::1] slopes, double[::1] knots, double[::1] data,
                    double[::1] weights, long long[::1] indptr, double rtol):
    """Gauge norm of each CSR row of non-negative moduli."""
    cdef Py_ssize_t n = indptr.shape[0] - 1
    out = np.zeros(n)
    cdef double[::1] o = out
    cdef Py_ssize_t r, i, p0, p1, it
    cdef double mx, hi, lo, mid
    with nogil:
        for r in range(n):
            p0 = indptr[r]
            p1 = indptr[r + 1]
            if p1 == p0:
                continue
            mx = 0.0
            for i in range(p0, p1):
                if data[i] > mx:
                    mx = data[i]
            if mx == 0.0:
                continue
            if code == 4:
                o[r] = mx
                continue
            hi = mx
            it = 0
            while it < 1100 and row_modular(code, a, b, breaks, slopes, knots,
                                            data, weights, p0, p1, hi) > 1.0:
                hi *= 2.0
                it += 1
            lo = hi * 0.5
            it = 0
            while it < 1100 and lo > 1e-300 and \
                    row_modular(code, a, b, breaks, slopes, knots,
                                data, weights, p0, p1, lo) <= 1.0:
                hi = lo
                lo *= 0.5
                it += 1
            if lo <= 1e-300:
                o[r] = 0.0
                continue
            for it in range(200):
                if hi - lo <= rtol * hi:
                    break
                mid = 0.5 * (lo + hi)
                if row_modular(code, a, b, breaks, slopes, knots,
                               data, weights, p0, p1, mid) <= 1.0:
                    hi = mid
                else:
                    lo = mid
            o[r] = hi
    return out


# ---------------------------------------------------------------------------
# Free-group word primitives on int8 buffers

cdef inline bint is_inv(signed char x, signed char y) noexcept nogil:
    return (x ^ 1) == y


cdef Py_ssize_t concat_reduce(signed char *dst, Py_ssize_t dlen,
                              const signed char *src, Py_ssize_t slen) noexcept nogil:
    cdef Py_ssize_t i
    for i in range(slen):
        if dlen > 0 and is_inv(dst[dlen - 1], src[i]):
            dlen -= 1
        else:
            dst[dlen] = src[i]
            dlen += 1
    return dlen


cdef bint words_eq(const signed char *x, Py_ssize_t xl,
                   const signed char *y, Py_ssize_t yl) noexcept nogil:
    cdef Py_ssize_t i
    if xl != yl:
        return False
    for i in range(xl):
        if x[i] != y[i]:
            return False
    return True


cdef Py_ssize_t walk_target(const signed char *gam, Py_ssize_t glen,
                            const signed char *endp, Py_ssize_t elen,
                            Py_ssize_t R, signed char *out) noexcept nogil:
    """The vertex R steps from gam along the unique geodesic toward endp,
    or endp itself when closer; both inputs reduced, rooted at the identity."""
    cdef Py_ssize_t cp = 0
    cdef Py_ssize_t mn = glen if glen < elen else elen
    cdef Py_ssize_t i, n
    while cp < mn and gam[cp] == endp[cp]:
        cp += 1
    if (glen - cp) + (elen - cp) <= R:
        for i in range(elen):
            out[i] = endp[i]
        return elen
    if glen - cp >= R:
        n = glen - R
        for i in range(n):
            out[i] = gam[i]
        return n
    n = cp + (R - (glen - cp))
    for i in range(n):
        out[i] = endp[i]
    return n


# ---------------------------------------------------------------------------
# Streaming coboundary statistics: honest per-vertex enumeration

def cocycle_stream_stats(signed char[::1] g, int rank, int delta):
    """(support size, non-zero entry count) of the coboundary of g, by DFS
    over every vertex of the radius-10*delta tube around the geodesic spine,
    recomputing both walk targets per vertex."""
    cdef Py_ssize_t d = g.shape[0]
    cdef Py_ssize_t R = 10 * delta
    if d + R > 150:
        raise ValueError("word too long for kernel buffers")
    cdef signed char gw[WORD_CAP]
    cdef signed char buf[WORD_CAP]
    cdef signed char tu[WORD_CAP]
    cdef signed char tw[WORD_CAP]
    cdef signed char nxt[64]
    cdef Py_ssize_t i, j, lvl, glen, ulen, wlen
    cdef int twok = 2 * rank
    cdef signed char c
    cdef bint skip
    cdef long long support = 0, nonzero = 0
    for i in range(d):
        gw[i] = g[i]
    with nogil:
        for j in range(d + 1):
            for i in range(j):
                buf[i] = gw[i]
            support += 1
            ulen = walk_target(buf, j, gw, d, R, tu)
            wlen = walk_target(buf, j, gw, 0, R, tw)
            if not words_eq(tu, ulen, tw, wlen):
                nonzero += 1
            lvl = 0
            nxt[0] = 0
            while lvl >= 0:
                c = nxt[lvl]
                if c >= twok:
                    lvl -= 1
                    continue
                nxt[lvl] = c + 1
                skip = False
                if lvl == 0:
                    if j < d and c == gw[j]:
                        skip = True
                    elif j > 0 and is_inv(gw[j - 1], c):
                        skip = True
                else:
                    if is_inv(buf[j + lvl - 1], c):
                        skip = True
                if skip:
                    continue
                buf[j + lvl] = c
                glen = j + lvl + 1
                support += 1
                ulen = walk_target(buf, glen, gw, d, R, tu)
                wlen = walk_target(buf, glen, gw, 0, R, tw)
                if not words_eq(tu, ulen, tw, wlen):
                    nonzero += 1
                if lvl + 1 < R:
                    lvl += 1
                    nxt[lvl] = 0
    return support, nonzero


# ---------------------------------------------------------------------------
# Cocycle identity residual

cdef double entry_residual(const signed char *gam, Py_ssize_t gamlen,
                           const signed char *gw, Py_ssize_t gl,
                           const signed char *hw, Py_ssize_t hl,
                           const signed char *ghw, Py_ssize_t ghl,
                           const signed char *ginv, Py_ssize_t ginvl,
                           Py_ssize_t R) noexcept nogil:
    """l1 size of (b(gh) - pi(g) b(h) - b(g))(gam) in units of the Dirac
    modulus; the shared -h(gam, e) terms cancel algebraically, leaving four
    Dirac terms to merge."""
    cdef signed char t1[WORD_CAP]
    cdef signed char t3[WORD_CAP]
    cdef signed char t4[WORD_CAP]
    cdef signed char t5[WORD_CAP]
    cdef signed char gp[WORD_CAP]
    cdef signed char th[WORD_CAP]
    cdef signed char te[WORD_CAP]
    cdef Py_ssize_t l1, l3, l4, l5, gpl, lh, le, i
    l1 = walk_target(gam, gamlen, ghw, ghl, R, t1)
    l3 = walk_target(gam, gamlen, gw, gl, R, t3)
    for i in range(ginvl):
        gp[i] = ginv[i]
    gpl = concat_reduce(gp, ginvl, gam, gamlen)
    lh = walk_target(gp, gpl, hw, hl, R, th)
    le = walk_target(gp, gpl, hw, 0, R, te)
    for i in range(gl):
        t4[i] = gw[i]
    l4 = concat_reduce(t4, gl, th, lh)
    for i in range(gl):
        t5[i] = gw[i]
    l5 = concat_reduce(t5, gl, te, le)

    cdef const signed char *terms[4]
    cdef Py_ssize_t lens[4]
    cdef double coef[4]
    terms[0] = t1; lens[0] = l1; coef[0] = 1.0
    terms[1] = t3; lens[1] = l3; coef[1] = -1.0
    terms[2] = t4; lens[2] = l4; coef[2] = -1.0
    terms[3] = t5; lens[3] = l5; coef[3] = 1.0
    cdef double res = 0.0
    cdef double acc
    cdef bint seen
    cdef Py_ssize_t k, m
    for k in range(4):
        seen = False
        for m in range(k):
            if words_eq(terms[k], lens[k], terms[m], lens[m]):
                seen = True
                break
        if seen:
            continue
        acc = coef[k]
        for m in range(k + 1, 4):
            if words_eq(terms[k], lens[k], terms[m], lens[m]):
                acc += coef[m]
        if acc < 0:
            acc = -acc
        res += acc
    return res


cdef Py_ssize_t build_tripod(const signed char *gw, Py_ssize_t gl,
                             const signed char *hw, Py_ssize_t hl,
                             signed char tp[][WORD_CAP],
                             Py_ssize_t *tplen) noexcept nogil:
    """Vertices of [e, g] union [g, gh] (deduplicated; covers the tripod)."""
    cdef Py_ssize_t ntp = 0, i, j, curl
    cdef signed char cur[WORD_CAP]
    cdef bint dup
    for i in range(gl + 1):
        for j in range(i):
            tp[ntp][j] = gw[j]
        tplen[ntp] = i
        ntp += 1
    curl = gl
    for i in range(gl):
        cur[i] = gw[i]
    for i in range(hl):
        curl = concat_reduce(cur, curl, hw + i, 1)
        dup = False
        for j in range(ntp):
            if words_eq(cur, curl, tp[j], tplen[j]):
                dup = True
                break
        if not dup:
            for j in range(curl):
                tp[ntp][j] = cur[j]
            tplen[ntp] = curl
            ntp += 1
    return ntp


cdef double pair_residual(const signed char *gw, Py_ssize_t gl,
                          const signed char *hw, Py_ssize_t hl,
                          int rank, Py_ssize_t R, int patterns, int max_dirs,
                          long long *classes) noexcept nogil:
    """Max entry residual over all branch classes of the pair (g, h).

    Entries are constant on each (vertex, depth) branch class, so one growing
    representative branch per direction covers the support exactly; depth
    runs to R + 1 to witness vanishing past the tube."""
    cdef signed char ghw[WORD_CAP]
    cdef signed char ginv[WORD_CAP]
    cdef signed char tp[96][WORD_CAP]
    cdef Py_ssize_t tplen[96]
    cdef signed char gam[WORD_CAP]
    cdef signed char nb[WORD_CAP]
    cdef Py_ssize_t ghl, ntp, vi, vl, nbl, r, i
    cdef int twok = 2 * rank
    cdef int c, pat, dirs_used
    cdef double best = 0.0, res
    cdef signed char prev, cc

    for i in range(gl):
        ghw[i] = gw[i]
    ghl = concat_reduce(ghw, gl, hw, hl)
    for i in range(gl):
        ginv[i] = gw[gl - 1 - i] ^ 1
    ntp = build_tripod(gw, gl, hw, hl, tp, tplen)

    for vi in range(ntp):
        vl = tplen[vi]
        res = entry_residual(tp[vi], vl, gw, gl, hw, hl, ghw, ghl, ginv, gl, R)
        classes[0] += 1
        if res > best:
            best = res
        dirs_used = 0
        for c in range(twok):
            # neighbor of v in direction c (one-step reduced product)
            if vl > 0 and is_inv(tp[vi][vl - 1], <signed char> c):
                nbl = vl - 1
                for i in range(nbl):
                    nb[i] = tp[vi][i]
            else:
                for i in range(vl):
                    nb[i] = tp[vi][i]
                nb[vl] = <signed char> c
                nbl = vl + 1
            # on-tripod directions are not branch roots
            r = 0
            for i in range(ntp):
                if words_eq(nb, nbl, tp[i], tplen[i]):
                    r = 1
                    break
            if r:
                continue
            if max_dirs > 0 and dirs_used >= max_dirs:
                break
            dirs_used += 1
            for pat in range(patterns):
                for i in range(vl):
                    gam[i] = tp[vi][i]
                gam[vl] = <signed char> c
                for r in range(1, R + 2):
                    if r >= 2:
                        prev = gam[vl + r - 2]
                        if pat == 0:
                            cc = 0
                            while is_inv(prev, cc):
                                cc += 1
                        else:
                            cc = twok - 1
                            while is_inv(prev, cc):
                                cc -= 1
                        gam[vl + r - 1] = cc
                    elif pat > 0:
                        # the depth-1 representative is pattern-independent
                        continue
                    res = entry_residual(gam, vl + r, gw, gl, hw, hl,
                                         ghw, ghl, ginv, gl, R)
                    classes[0] += 1
                    if res > best:
                        best = res
    return best


def cocycle_identity_pair(signed char[::1] g, signed char[::1] h, int rank,
                          int delta, int patterns=2):
    cdef Py_ssize_t gl = g.shape[0], hl = h.shape[0]
    if gl > 40 or hl > 40 or 10 * delta > 40:
        raise ValueError("pair too long for kernel buffers")
    cdef signed char gw[WORD_CAP]
    cdef signed char hw[WORD_CAP]
    cdef Py_ssize_t i
    for i in range(gl):
        gw[i] = g[i]
    for i in range(hl):
        hw[i] = h[i]
    cdef long long classes = 0
    cdef double res
    with nogil:
        res = pair_residual(gw, gl, hw, hl, rank, 10 * delta, patterns, 0, &classes)
    return res, classes


def cocycle_identity_all(signed char[::1] flat, long long[::1] offsets,
                         int rank, int delta, int patterns=1):
    """Max residual over all ordered pairs of the given words; one branch
    direction per (vertex, depth) class keeps the sweep linear in classes."""
    cdef Py_ssize_t n = offsets.shape[0] - 1
    cdef Py_ssize_t i, j, gl, hl
    cdef signed char gw[WORD_CAP]
    cdef signed char hw[WORD_CAP]
    cdef long long classes = 0
    cdef double best = 0.0, res
    cdef Py_ssize_t wi = 0, wj = 0
    cdef Py_ssize_t k
    for i in range(n):
        if offsets[i + 1] - offsets[i] + 10 * delta > 80:
            raise ValueError("word too long for kernel buffers")
    with nogil:
        for i in range(n):
            gl = offsets[i + 1] - offsets[i]
            for k in range(gl):
                gw[k] = flat[offsets[i] + k]
            for j in range(n):
                hl = offsets[j + 1] - offsets[j]
                for k in range(hl):
                    hw[k] = flat[offsets[j] + k]
                res = pair_residual(gw, gl, hw, hl, rank, 10 * delta,
                                    patterns, 1, &classes)
                if res > best:
                    best = res
                    wi = i
                    wj = j
    return best, wi, wj, classes


def cocycle_stream_compare(signed char[::1] g, signed char[::1] h, int rank,
                           int delta):
    """Entry-by-entry comparison of both identity sides over every vertex of
    the tripod tube; exhaustive, for desk-scale words."""
    cdef Py_ssize_t gl = g.shape[0], hl = h.shape[0]
    cdef Py_ssize_t R = 10 * delta
    if gl + hl + R > 100:
        raise ValueError("pair too long for kernel buffers")
    cdef signed char gw[WORD_CAP]
    cdef signed char hw[WORD_CAP]
    cdef signed char ghw[WORD_CAP]
    cdef signed char ginv[WORD_CAP]
    cdef signed char tp[96][WORD_CAP]
    cdef Py_ssize_t tplen[96]
    cdef signed char gam[WORD_CAP]
    cdef signed char nb[WORD_CAP]
    cdef signed char nxt[64]
    cdef Py_ssize_t i, k, ghl, ntp, vi, vl, nbl, lvl
    cdef int twok = 2 * rank
    cdef signed char c
    cdef bint skip
    cdef double best = 0.0, res
    cdef long long count = 0
    for i in range(gl):
        gw[i] = g[i]
    for i in range(hl):
        hw[i] = h[i]
    with nogil:
        for i in range(gl):
            ghw[i] = gw[i]
        ghl = concat_reduce(ghw, gl, hw, hl)
        for i in range(gl):
            ginv[i] = gw[gl - 1 - i] ^ 1
        ntp = build_tripod(gw, gl, hw, hl, tp, tplen)
        for vi in range(ntp):
            vl = tplen[vi]
            count += 1
            res = entry_residual(tp[vi], vl, gw, gl, hw, hl, ghw, ghl, ginv, gl, R)
            if res > best:
                best = res
            for i in range(vl):
                gam[i] = tp[vi][i]
            lvl = 0
            nxt[0] = 0
            while lvl >= 0:
                c = nxt[lvl]
                if c >= twok:
                    lvl -= 1
                    continue
                nxt[lvl] = c + 1
                skip = False
                if lvl == 0:
                    # skip directions whose neighbor lies on the tripod
                    if vl > 0 and is_inv(gam[vl - 1], c):
                        nbl = vl - 1
                        for i in range(nbl):
                            nb[i] = gam[i]
                    else:
                        for i in range(vl):
                            nb[i] = gam[i]
                        nb[vl] = c
                        nbl = vl + 1
                    for k in range(ntp):
                        if words_eq(nb, nbl, tp[k], tplen[k]):
                            skip = True
                            break
                else:
                    if is_inv(gam[vl + lvl - 1], c):
                        skip = True
                if skip:
                    continue
                gam[vl + lvl] = c
                count += 1
                res = entry_residual(gam, vl + lvl + 1, gw, gl, hw, hl,
                                     ghw, ghl, ginv, gl, R)
                if res > best:
                    best = res
                if lvl + 1 < R:
                    lvl += 1
                    nxt[lvl] = 0
    return best, count
