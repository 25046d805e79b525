"""Bessel functions of the first kind and their positive zeros.

Only integer orders 0..50 are supported.  Small arguments use the power
series, everything else Miller's downward recurrence normalised with the
Neumann sum ``1 = J_0 + 2 * sum_k J_{2k}``.
"""

import math
from functools import lru_cache

from ..errors import DomainError
from .roots import Bracket, find_root

MAX_ORDER = 50
MAX_ZERO_INDEX = 100
# accuracy is only claimed up to x = 100; larger x is still allowed so that
# high zeros of high orders can be bracketed
MAX_ARG = 1000.0

_BIG = 1e250


def _series(n, x):
    half = 0.5 * x
    term = 1.0
    for k in range(1, n + 1):
        term *= half / k
    total = term
    h2 = half * half
    k = 0
    while True:
        k += 1
        term *= -h2 / (k * (k + n))
        total += term
        if abs(term) <= 1e-17 * abs(total) and k > half:
            break
        if term == 0.0:
            break
    return total


def _miller(n, x):
    top = max(n, x)
    start = int(top + 30 + 2.0 * math.sqrt(top))
    start += start % 2
    j_next = 0.0
    j_cur = 1e-300
    norm = 0.0
    result = 0.0
    two_over_x = 2.0 / x
    for k in range(start, 0, -1):
        # j_cur holds J_k (unnormalised), compute J_{k-1}
        j_prev = k * two_over_x * j_cur - j_next
        j_next, j_cur = j_cur, j_prev
        if abs(j_cur) > _BIG:
            j_cur /= _BIG
            j_next /= _BIG
            result /= _BIG
            norm /= _BIG
        km1 = k - 1
        if km1 == n:
            result = j_cur
        if km1 > 0 and km1 % 2 == 0:
            norm += 2.0 * j_cur
    norm += j_cur
    return result / norm


def bessel_j(n, x):
    """Bessel function of the first kind ``J_n(x)`` for integer ``n``.

    Parameters
    ----------
    n : int
        Order, ``0 <= n <= 50``.
    x : float
        Argument, ``0 <= x <= 1000``.  Absolute error is below 1e-12 for
        ``x <= 100``.

    Returns
    -------
    float
    """
    if int(n) != n or n < 0 or n > MAX_ORDER:
        raise DomainError(f"order n={n} outside 0..{MAX_ORDER}")
    n = int(n)
    x = float(x)
    if not (0.0 <= x <= MAX_ARG):
        raise DomainError(f"argument x={x} outside [0, {MAX_ARG}]")
    if x == 0.0:
        return 1.0 if n == 0 else 0.0
    if x < 0.5 * n + 4.0:
        return _series(n, x)
    return _miller(n, x)


def bessel_j_prime(n, x):
    """Derivative ``J_n'(x)`` from ``(J_{n-1} - J_{n+1}) / 2``."""
    if n == 0:
        return -bessel_j(1, x)
    return 0.5 * (bessel_j(n - 1, x) - bessel_j(n + 1, x))


def mcmahon_zero(n, p):
    """McMahon's large-``p`` expansion for the ``p``-th zero of ``J_n``."""
    beta = (p + 0.5 * n - 0.25) * math.pi
    mu = 4.0 * n * n
    b8 = 8.0 * beta
    return (
        beta
        - (mu - 1.0) / b8
        - 4.0 * (mu - 1.0) * (7.0 * mu - 31.0) / (3.0 * b8**3)
        - 32.0 * (mu - 1.0) * (83.0 * mu * mu - 982.0 * mu + 3779.0) / (15.0 * b8**5)
    )


def _scan_bracket(n, p):
    # zeros of J_n lie above n and are more than 3 apart, so a unit step
    # never skips one; J_n > 0 on (0, j_{n,1})
    lo = float(max(n, 1))
    f_lo = bessel_j(n, lo)
    found = 0
    while True:
        hi = lo + 1.0
        f_hi = bessel_j(n, hi)
        if f_lo == 0.0:
            found += 1
            if found == p:
                return Bracket(lo - 0.5, lo + 0.5)
        elif f_lo * f_hi < 0.0:
            found += 1
            if found == p:
                return Bracket(lo, hi)
        lo, f_lo = hi, f_hi


@lru_cache(maxsize=4096)
def bessel_zero(n, p):
    """The ``p``-th positive zero ``x_np`` of ``J_n``.

    Low orders (``n <= 2``) are bracketed from McMahon's expansion widened
    by +-0.5; higher orders, where the expansion is poor for small ``p``,
    fall back to a unit-step sign-change count.  The bracket is polished
    with :func:`find_root`.

    Parameters
    ----------
    n : int
        Order, ``0 <= n <= 50``.
    p : int
        Zero index, ``1 <= p <= 100``.

    Returns
    -------
    float
    """
    if int(n) != n or not 0 <= n <= MAX_ORDER:
        raise DomainError(f"order n={n} outside 0..{MAX_ORDER}")
    if int(p) != p or not 1 <= p <= MAX_ZERO_INDEX:
        raise DomainError(f"zero index p={p} outside 1..{MAX_ZERO_INDEX}")
    n, p = int(n), int(p)
    bracket = None
    if n <= 2:
        guess = mcmahon_zero(n, p)
        cand = Bracket(max(guess - 0.5, 1e-3), guess + 0.5)
        if bessel_j(n, cand.lo) * bessel_j(n, cand.hi) < 0.0:
            bracket = cand
    if bracket is None:
        bracket = _scan_bracket(n, p)

    def f(x):
        return bessel_j(n, x)

    return find_root(f, bracket, tol=4e-15 * bracket.hi)
