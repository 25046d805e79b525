"""Bracketed scalar root finding."""

import math
from dataclasses import dataclass

from ..errors import BracketError, ConvergenceError, DomainError


@dataclass(frozen=True)
class Bracket:
    """Closed interval ``[lo, hi]`` on which a function changes sign."""

    lo: float
    hi: float

    def __post_init__(self):
        if not self.lo < self.hi:
            raise DomainError(f"bracket needs lo < hi, got [{self.lo}, {self.hi}]")

    @property
    def width(self):
        return self.hi - self.lo


def find_root(f, bracket, tol=1e-12, max_iter=200):
    """Brent's method: inverse quadratic / secant steps safeguarded by bisection.

    Parameters
    ----------
    f : callable
        Continuous real function of one real variable.
    bracket : Bracket
        Interval with ``f(lo) * f(hi) <= 0``.
    tol : float
        Absolute tolerance on the final bracket width.
    max_iter : int
        Iteration budget.

    Returns
    -------
    float
        Root estimate.

    Raises
    ------
    BracketError
        If ``f`` has the same sign at both ends.
    ConvergenceError
        If ``max_iter`` iterations do not shrink the bracket below ``tol``.
    """
    a, b = float(bracket.lo), float(bracket.hi)
    fa, fb = f(a), f(b)
    if fa == 0.0:
        return a
    if fb == 0.0:
        return b
    if (fa > 0.0) == (fb > 0.0):
        raise BracketError(f"no sign change on [{a}, {b}]: f={fa:.3g}, {fb:.3g}")

    c, fc = a, fa
    d = e = b - a
    for _ in range(max_iter):
        if (fb > 0.0) == (fc > 0.0):
            c, fc = a, fa
            d = e = b - a
        if abs(fc) < abs(fb):
            a, b, c = b, c, b
            fa, fb, fc = fb, fc, fb
        tol1 = 2.0 * 2.2e-16 * abs(b) + 0.5 * tol
        xm = 0.5 * (c - b)
        if abs(xm) <= tol1 or fb == 0.0:
            return b
        if abs(e) >= tol1 and abs(fa) > abs(fb):
            s = fb / fa
            if a == c:
                p = 2.0 * xm * s
                q = 1.0 - s
            else:
                q = fa / fc
                r = fb / fc
                p = s * (2.0 * xm * q * (q - r) - (b - a) * (r - 1.0))
                q = (q - 1.0) * (r - 1.0) * (s - 1.0)
            if p > 0.0:
                q = -q
            p = abs(p)
            if 2.0 * p < min(3.0 * xm * q - abs(tol1 * q), abs(e * q)):
                e, d = d, p / q
            else:
                d = e = xm
        else:
            d = e = xm
        a, fa = b, fb
        b += d if abs(d) > tol1 else math.copysign(tol1, xm)
        fb = f(b)
    raise ConvergenceError(f"find_root: no convergence in {max_iter} iterations")


def scan_sign_changes(f, grid):
    """Brackets of every sign change of ``f`` sampled on an increasing grid.

    Samples that evaluate to non-finite values are skipped.
    """
    out = []
    prev_x = prev_f = None
    for x in grid:
        fx = f(x)
        if not math.isfinite(fx):
            prev_x = prev_f = None
            continue
        if prev_f is not None and (prev_f * fx < 0.0 or (fx == 0.0 and prev_f != 0.0)):
            out.append(Bracket(prev_x, x))
        prev_x, prev_f = x, fx
    return out
