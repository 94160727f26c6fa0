"""Closed-form kernels for the dual of SU(2).

Labels are n = 2*spin, so the irrep at label n has dimension n + 1 and the
character at torus angle theta is the Chebyshev kernel U_n(cos theta)
= sin((n+1) theta) / sin theta.  Interval subsets {0, ..., n} have Haar mass
S(n+1) with S(N) = sum of the first N squares, and products of interval
indicators linearize in the U-basis with integer coefficients.  Those
integer sequences and the associated oscillatory quadrature are what this
module computes; everything exact is plain `int`/`Fraction`, the quadrature
is numpy float64.
"""

from __future__ import annotations

import math
from fractions import Fraction

import numpy as np
from numpy.polynomial import chebyshev as npcheb
from numpy.polynomial.legendre import leggauss

_INT64_SAFE = 2**62


def sum_squares(n: int) -> int:
    """1^2 + 2^2 + ... + n^2."""
    if n < 0:
        return 0
    return n * (n + 1) * (2 * n + 1) // 6


def sum_first(n: int) -> int:
    if n < 0:
        return 0
    return n * (n + 1) // 2


def interval_haar_n2(n2: int) -> int:
    """Haar mass of the interval of labels {0, 1, ..., n2}."""
    return sum_squares(n2 + 1)


def interval_ratio_n2(k2: int, m2: int) -> Fraction:
    """h(interval(k) * interval(m)) / h(interval(m)) for labels 2k, 2m."""
    return Fraction(sum_squares(m2 + k2 + 1), sum_squares(m2 + 1))


def min_m2_for_ratio(k2: int, bound: Fraction, m2_floor: int = 0) -> int:
    """Smallest m2 >= max(k2, m2_floor) with interval ratio < bound.

    The ratio is strictly decreasing in m2 for fixed k2 >= 1 and tends to 1,
    so doubling plus bisection finds the exact minimum.
    """
    if bound <= 1:
        raise ValueError("ratio bound must exceed 1")
    lo = max(k2, m2_floor)

    def ok(m2: int) -> bool:
        return (sum_squares(m2 + k2 + 1) * bound.denominator
                < sum_squares(m2 + 1) * bound.numerator)

    if ok(lo):
        return lo
    hi = max(2 * lo, lo + 1)
    while not ok(hi):
        lo = hi
        hi *= 2
    while hi - lo > 1:
        mid = (lo + hi) // 2
        if ok(mid):
            hi = mid
        else:
            lo = mid
    return hi


# ---------------------------------------------------------------------------
# Linearization of products of weighted interval sums in the U-basis
# ---------------------------------------------------------------------------
#
# With a_p = p for p <= P and b_q = q for q <= Q (dimension variables),
#   (sum_p a_p U_{p-1}) (sum_q b_q U_{q-1}) = sum_w c_w U_{w-1},
# and multiplying by sin^2 theta turns both factors into sine sums, giving
# the exact recurrence
#   c_1 = A(0),   c_{j+1} = c_{j-1} + A(j) - B(j)   (j >= 1),
# where A(j) = sum_{|p-q|=j} p q and B(j) = sum_{p+q=j} p q over the index
# boxes.  A and B have O(1) closed forms; c_w >= 0 and c_w = 0 for w >= P+Q.


def _corr_conv_terms(P: int, Q: int) -> tuple[list[int], list[int]]:
    """A(j) and B(j) for j = 0 .. P+Q+1, exact."""
    top = P + Q + 2
    max_n = max(P, Q) + 1
    limit = (top * sum_first(max_n) + 2 * sum_squares(max_n)) * 2
    if limit < _INT64_SAFE:
        return _corr_conv_terms_np(P, Q, top)
    return _corr_conv_terms_py(P, Q, top)


def _corr_conv_terms_np(P: int, Q: int, top: int) -> tuple[list[int], list[int]]:
    n = np.arange(0, max(P, Q) + 2, dtype=np.int64)
    s1 = np.concatenate(([0], np.cumsum(n[1:], dtype=np.int64)))
    s2 = np.concatenate(([0], np.cumsum(n[1:] * n[1:], dtype=np.int64)))

    j = np.arange(0, top, dtype=np.int64)
    # A(j): sum over q <= L of q (q + j), with L = min(Q, P - j), plus the
    # mirrored sum with P and Q swapped; j = 0 counts the diagonal once.
    l1 = np.clip(np.minimum(Q, P - j), 0, None)
    l2 = np.clip(np.minimum(P, Q - j), 0, None)
    a = (s2[l1] + j * s1[l1]) + (s2[l2] + j * s1[l2])
    a[0] = s2[min(P, Q)]
    # B(j): sum over p in [max(1, j - Q), min(P, j - 1)] of p (j - p).
    lo = np.clip(j - Q, 1, None)
    hi = np.minimum(P, j - 1)
    valid = hi >= lo
    lo_idx = np.where(valid, lo, 1)
    hi_idx = np.where(valid, hi, 0)
    b = np.where(valid, j * (s1[hi_idx] - s1[lo_idx - 1]) - (s2[hi_idx] - s2[lo_idx - 1]), 0)
    return a.tolist(), b.tolist()


def _corr_conv_terms_py(P: int, Q: int, top: int) -> tuple[list[int], list[int]]:
    a_list, b_list = [], []
    for j in range(top):
        l1 = min(Q, P - j)
        l2 = min(P, Q - j)
        a = 0
        if l1 > 0:
            a += sum_squares(l1) + j * sum_first(l1)
        if l2 > 0:
            a += sum_squares(l2) + j * sum_first(l2)
        if j == 0:
            a = sum_squares(min(P, Q))
        lo, hi = max(1, j - Q), min(P, j - 1)
        b = 0
        if hi >= lo:
            b = j * (sum_first(hi) - sum_first(lo - 1)) - (sum_squares(hi) - sum_squares(lo - 1))
        a_list.append(a)
        b_list.append(b)
    return a_list, b_list


def linearized_interval_product(P: int, Q: int) -> list[int]:
    """Coefficients c indexed by w with c[w] the U_{w-1} coefficient.

    Returns a list of length P+Q with c[0] = 0 unused.  Raises if the
    recurrence fails its own sanity constraints (nonnegativity, vanishing
    tail), which would indicate a bug.
    """
    if P < 1 or Q < 1:
        raise ValueError("interval dimensions must be positive")
    a, b = _corr_conv_terms(P, Q)
    c = [0] * (P + Q + 2)
    c[1] = a[0]
    for j in range(1, P + Q + 1):
        c[j + 1] = c[j - 1] + a[j] - b[j]
    if c[P + Q] != 0 or c[P + Q + 1] != 0:
        raise AssertionError("interval linearization tail does not vanish")
    if any(v < 0 for v in c):
        raise AssertionError("interval linearization produced a negative coefficient")
    return c[: P + Q]


# ---------------------------------------------------------------------------
# Weighted Dirichlet kernels S_M(theta) = sum_{k=1}^{M} k sin(k theta)
# ---------------------------------------------------------------------------


def kernel_sum(M: int, theta: np.ndarray) -> np.ndarray:
    """S_M(theta) in closed form, valid on the open interval (0, pi)."""
    a = M + 0.5
    half = 0.5 * theta
    s = np.sin(half)
    c = np.cos(half)
    return (c * np.sin(a * theta) - (2 * M + 1) * s * np.cos(a * theta)) / (4 * s * s)


def kernel_roots(M: int, grid_factor: int = 4, iterations: int = 40) -> np.ndarray:
    """Interior zeros of S_M on (0, pi), located by grid sign changes + bisection."""
    if M <= 1:
        return np.empty(0)
    count = grid_factor * (M + 1) + 1
    theta = np.linspace(0.0, math.pi, count)[1:-1]
    values = kernel_sum(M, theta)
    sign = np.sign(values)
    flips = np.nonzero(sign[:-1] * sign[1:] < 0)[0]
    lo = theta[flips].copy()
    hi = theta[flips + 1].copy()
    lo_sign = sign[flips]
    for _ in range(iterations):
        mid = 0.5 * (lo + hi)
        same = np.sign(kernel_sum(M, mid)) == lo_sign
        lo = np.where(same, mid, lo)
        hi = np.where(same, hi, mid)
    roots = 0.5 * (lo + hi)
    exact_hits = theta[np.nonzero(values == 0.0)[0]]
    if exact_hits.size:
        roots = np.sort(np.concatenate([roots, exact_hits]))
    return roots


_GL_CACHE: dict[int, tuple[np.ndarray, np.ndarray]] = {}


def _gl_rule(order: int) -> tuple[np.ndarray, np.ndarray]:
    rule = _GL_CACHE.get(order)
    if rule is None:
        rule = leggauss(order)
        _GL_CACHE[order] = rule
    return rule


def piecewise_gauss(fn, breakpoints: np.ndarray, order: int, chunk: int = 200_000) -> float:
    """Integrate fn over [b_0, b_last] with Gauss-Legendre on each piece.

    ``fn`` must accept a flat numpy array of angles.  Pieces are processed in
    chunks to bound peak memory for very fine partitions.
    """
    nodes, weights = _gl_rule(order)
    total = 0.0
    n_pieces = len(breakpoints) - 1
    for start in range(0, n_pieces, chunk):
        stop = min(start + chunk, n_pieces)
        left = breakpoints[start:stop]
        right = breakpoints[start + 1:stop + 1]
        half = 0.5 * (right - left)
        mid = 0.5 * (right + left)
        pts = mid[:, None] + half[:, None] * nodes[None, :]
        vals = fn(pts.ravel()).reshape(pts.shape)
        total += float(np.sum(half * (vals @ weights)))
    return total


def _abs_product_breakpoints(P: int, Q: int) -> np.ndarray:
    pieces = [np.array([0.0, math.pi]), kernel_roots(P), kernel_roots(Q)]
    return np.unique(np.concatenate(pieces))


def interval_product_l1(P: int, Q: int, order: int = 8,
                        tolerance: float = 1e-9) -> tuple[float, float]:
    """(2/pi) * integral of |S_P(theta) S_Q(theta)| over (0, pi), with residual.

    Splits at the zeros of both kernels so each piece is smooth, integrates
    with Gauss-Legendre, and estimates the error by doubling the order.
    Raises no error itself; the caller compares the residual with its budget.
    """
    breaks = _abs_product_breakpoints(P, Q)

    def integrand(theta: np.ndarray) -> np.ndarray:
        return np.abs(kernel_sum(P, theta) * kernel_sum(Q, theta))

    coarse = piecewise_gauss(integrand, breaks, order)
    fine = piecewise_gauss(integrand, breaks, 2 * order)
    return (2.0 / math.pi) * fine, (2.0 / math.pi) * abs(fine - coarse)


# ---------------------------------------------------------------------------
# Generic Chebyshev-U series: evaluation, zeros, oscillatory quadrature
# ---------------------------------------------------------------------------


def u_series_eval(coeffs: np.ndarray, x: np.ndarray) -> np.ndarray:
    """sum_n coeffs[n] * U_n(x) by forward recurrence (stable for |x| <= 1)."""
    result = np.zeros_like(x, dtype=float)
    u_prev = np.ones_like(x, dtype=float)
    u_curr = 2.0 * x
    for n, c in enumerate(coeffs):
        if n == 0:
            result += c * u_prev
            continue
        if n == 1:
            term = u_curr
        else:
            term = 2.0 * x * u_curr - u_prev
            u_prev, u_curr = u_curr, term
        result += c * term
    return result


def u_to_chebyshev_t(coeffs: np.ndarray) -> np.ndarray:
    """Convert a U-basis coefficient vector to the Chebyshev T basis."""
    n_max = len(coeffs) - 1
    t = np.zeros(n_max + 1)
    for n, c in enumerate(coeffs):
        if c == 0.0:
            continue
        t[n % 2:n + 1:2] += 2.0 * c
        if n % 2 == 0:
            t[0] -= c
    return t


def u_series_roots_theta(coeffs: np.ndarray) -> np.ndarray:
    """Angles in (0, pi) where sum coeffs[n] U_n(cos theta) vanishes."""
    t = u_to_chebyshev_t(coeffs)
    t = np.trim_zeros(t, "b")
    if len(t) <= 1:
        return np.empty(0)
    roots = npcheb.chebroots(t)
    real = roots[np.abs(roots.imag) < 1e-9].real
    inside = real[(real > -1.0 + 1e-12) & (real < 1.0 - 1e-12)]
    return np.sort(np.arccos(np.clip(inside, -1.0, 1.0)))


def adaptive_simpson(fn, a: float, b: float, tolerance: float,
                     max_intervals: int = 1 << 20) -> tuple[float, float]:
    """Plain adaptive Simpson; returns (value, residual estimate).

    Raises RuntimeError when the interval budget runs out; callers translate
    that into their own error type.
    """

    def simpson(x0, x2, f0, f1, f2):
        return (x2 - x0) / 6.0 * (f0 + 4.0 * f1 + f2)

    stack = [(a, b, fn(a), fn(0.5 * (a + b)), fn(b), tolerance)]
    total = 0.0
    residual = 0.0
    used = 0
    while stack:
        x0, x2, f0, f1, f2, tol = stack.pop()
        used += 1
        if used > max_intervals:
            raise RuntimeError("adaptive Simpson interval budget exhausted")
        xm = 0.5 * (x0 + x2)
        xl = 0.5 * (x0 + xm)
        xr = 0.5 * (xm + x2)
        fl = fn(xl)
        fr = fn(xr)
        whole = simpson(x0, x2, f0, f1, f2)
        left = simpson(x0, xm, f0, fl, f1)
        right = simpson(xm, x2, f1, fr, f2)
        err = abs(left + right - whole) / 15.0
        if err <= tol or (x2 - x0) < 1e-13:
            total += left + right + (left + right - whole) / 15.0
            residual += err
        else:
            stack.append((x0, xm, f0, fl, f1, 0.5 * tol))
            stack.append((xm, x2, f1, fr, f2, 0.5 * tol))
    return total, residual
