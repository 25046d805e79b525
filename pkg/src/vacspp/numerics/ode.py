"""Integrators for the complex oscillator ``Q'' + gamma(t) Q' + omega^2(t) Q = 0``.

Two routes are provided.

``dopri5``
    Embedded Dormand-Prince 5(4) pair with adaptive steps on the real
    four-component system ``(Re Q, Im Q, Re Q', Im Q')``.
``symplectic``
    Fixed-step fourth-order Yoshida composition of kick-drift-kick leapfrog,
    carried out in ``decimal`` arithmetic.  Every sub-step is a shear of unit
    determinant, so the Wronskian is conserved to the working precision even
    when ``|Q|`` grows by tens of orders of magnitude.
"""

import math
from dataclasses import dataclass
from decimal import Decimal, localcontext

from ..errors import ConvergenceError, DomainError


@dataclass(frozen=True)
class IntegratorConfig:
    """Step control settings.

    ``max_step`` doubles as the fixed step of the symplectic route, and
    ``digits`` is the decimal working precision used there.
    """

    rel_tol: float = 1e-10
    abs_tol: float = 1e-12
    max_step: float = math.inf
    max_steps: int = 5_000_000
    method: str = "dopri5"
    digits: int = 120

    def __post_init__(self):
        if not (self.rel_tol > 0 and self.abs_tol > 0 and self.max_step > 0):
            raise DomainError("integrator tolerances and max_step must be > 0")
        if self.max_steps < 1:
            raise DomainError("max_steps must be a positive integer")
        if self.method not in ("dopri5", "symplectic"):
            raise DomainError(f"unknown integrator method {self.method!r}")
        if self.method == "symplectic" and not math.isfinite(self.max_step):
            raise DomainError("symplectic integration needs a finite max_step")


@dataclass(frozen=True)
class OscillatorState:
    """Mode amplitude and velocity at time ``t``.

    ``exact`` optionally carries ``(Re Q, Im Q, Re Q', Im Q')`` as
    ``Decimal`` values when the state came from the extended-precision
    integrator.
    """

    t: float
    Q: complex
    Qdot: complex
    exact: tuple = None

    def wronskian(self):
        """``i (Q* Q' - Q Q'*) = 2 Im(Q Q'*)``; equals 1 for the in-vacuum."""
        if self.exact is not None:
            qr, qi, vr, vi = self.exact
            with localcontext() as ctx:
                ctx.prec = 400
                return float(-2 * (qr * vi - qi * vr))
        return -2.0 * (self.Q.real * self.Qdot.imag - self.Q.imag * self.Qdot.real)


# Dormand-Prince 5(4) tableau
_C = (0.0, 1 / 5, 3 / 10, 4 / 5, 8 / 9, 1.0, 1.0)
_A = (
    (),
    (1 / 5,),
    (3 / 40, 9 / 40),
    (44 / 45, -56 / 15, 32 / 9),
    (19372 / 6561, -25360 / 2187, 64448 / 6561, -212 / 729),
    (9017 / 3168, -355 / 33, 46732 / 5247, 49 / 176, -5103 / 18656),
    (35 / 384, 0.0, 500 / 1113, 125 / 192, -2187 / 6784, 11 / 84),
)
_B = (35 / 384, 0.0, 500 / 1113, 125 / 192, -2187 / 6784, 11 / 84, 0.0)
_E = (
    71 / 57600,
    0.0,
    -71 / 16695,
    71 / 1920,
    -17253 / 339200,
    22 / 525,
    -1 / 40,
)


def _dopri5(fun, t0, y0, t1, cfg, t_eval):
    dim = len(y0)
    t = t0
    y = list(y0)
    k1 = fun(t, y)
    span = t1 - t0
    h = min(cfg.max_step, abs(span) / 100.0)
    scale = max(max(abs(v) for v in y), 1e-300)
    dscale = max(max(abs(v) for v in k1), 1e-300)
    h = min(h, 0.01 * scale / dscale) if dscale > 0 else h
    h = max(h, 1e-12 * abs(span))

    out = [(t, tuple(y))]
    targets = list(t_eval) + [t1] if t_eval else [t1]
    ti = 0
    steps = 0
    rtol, atol = cfg.rel_tol, cfg.abs_tol
    while ti < len(targets):
        target = targets[ti]
        if t >= target:
            if t == target and (not out or out[-1][0] != t):
                out.append((t, tuple(y)))
            ti += 1
            continue
        steps += 1
        if steps > cfg.max_steps:
            raise ConvergenceError(f"dopri5: step budget {cfg.max_steps} exhausted at t={t}")
        step = min(h, target - t, cfg.max_step)
        last = step == target - t
        ks = [k1]
        for s in range(1, 7):
            a = _A[s]
            ys = [
                yi + step * sum(aj * kj[i] for aj, kj in zip(a, ks) if aj)
                for i, yi in enumerate(y)
            ]
            ks.append(fun(t + _C[s] * step, ys))
        # seventh stage evaluated at the 5th-order solution (FSAL)
        y_new = ys
        err = 0.0
        for i in range(dim):
            ei = step * sum(ej * kj[i] for ej, kj in zip(_E, ks) if ej)
            sc = atol + rtol * max(abs(y[i]), abs(y_new[i]))
            err += (ei / sc) ** 2
        err = math.sqrt(err / dim)
        if err <= 1.0:
            t = target if last else t + step
            y = y_new
            k1 = ks[6]
            if last:
                out.append((t, tuple(y)))
                ti += 1
            fac = 10.0 if err == 0.0 else min(10.0, 0.9 * err ** -0.2)
            # a step clipped to hit an output time must not shrink the proposal
            h = max(h, step * fac) if last else step * fac
        else:
            h = step * max(0.2, 0.9 * err ** -0.2)
        if h < 1e-15 * max(abs(t), abs(span)):
            raise ConvergenceError(f"dopri5: step size underflow at t={t}")
    return out


_YOSHIDA_W1 = 1.0 / (2.0 - 2.0 ** (1.0 / 3.0))
_YOSHIDA_W0 = -(2.0 ** (1.0 / 3.0)) / (2.0 - 2.0 ** (1.0 / 3.0))


def _symplectic(omega_sq, t0, state, t1, cfg, t_eval):
    qr, qi, vr, vi = state
    targets = list(t_eval) + [t1] if t_eval else [t1]
    out = [(t0, (qr, qi, vr, vi))]
    t = t0
    steps = 0
    with localcontext() as ctx:
        ctx.prec = cfg.digits
        for target in targets:
            if target <= t:
                if target == t and out[-1][0] != t:
                    out.append((t, (qr, qi, vr, vi)))
                continue
            n = max(1, math.ceil((target - t) / cfg.max_step - 1e-9))
            steps += n
            if steps > cfg.max_steps:
                raise ConvergenceError(f"symplectic: step budget {cfg.max_steps} exhausted")
            h = (target - t) / n
            subs = (h * _YOSHIDA_W1, h * _YOSHIDA_W0, h * _YOSHIDA_W1)
            for k in range(n):
                ts = t + k * h
                for hs in subs:
                    half = Decimal(0.5 * hs)
                    c = half * Decimal(omega_sq(ts))
                    vr -= c * qr
                    vi -= c * qi
                    dh = Decimal(hs)
                    qr += dh * vr
                    qi += dh * vi
                    ts += hs
                    c = half * Decimal(omega_sq(ts))
                    vr -= c * qr
                    vi -= c * qi
            t = target
            out.append((t, (+qr, +qi, +vr, +vi)))
    return out


def integrate_oscillator(omega_sq, q0, qdot0, t_span, cfg=None, t_eval=None, damping=None):
    """Solve ``Q'' + gamma(t) Q' + omega_sq(t) Q = 0`` for complex ``Q``.

    Parameters
    ----------
    omega_sq : callable
        Real function of time, the squared instantaneous frequency.
    q0, qdot0 : complex
        Initial amplitude and velocity at ``t_span[0]``.
    t_span : tuple of float
        ``(t0, t1)`` with ``t1 >= t0``.
    cfg : IntegratorConfig, optional
    t_eval : sequence of float, optional
        Interior output times, increasing and inside ``t_span``.
    damping : callable, optional
        ``gamma(t)``; only the ``dopri5`` route supports it.

    Returns
    -------
    list of OscillatorState
        Trajectory including both endpoints.
    """
    cfg = cfg or IntegratorConfig()
    t0, t1 = float(t_span[0]), float(t_span[1])
    if t1 < t0:
        raise DomainError("t_span must be increasing")
    if t_eval is not None:
        t_eval = [float(s) for s in t_eval if t0 < s < t1]
    q0, qdot0 = complex(q0), complex(qdot0)

    if cfg.method == "symplectic":
        if damping is not None:
            raise DomainError("symplectic route does not support a damping term")
        with localcontext() as ctx:
            ctx.prec = cfg.digits
            start = tuple(Decimal(v) for v in (q0.real, q0.imag, qdot0.real, qdot0.imag))
        raw = _symplectic(omega_sq, t0, start, t1, cfg, t_eval)
        return [
            OscillatorState(
                t,
                complex(float(s[0]), float(s[1])),
                complex(float(s[2]), float(s[3])),
                exact=s,
            )
            for t, s in raw
        ]

    if damping is None:

        def fun(t, y):
            w = omega_sq(t)
            return (y[2], y[3], -w * y[0], -w * y[1])

    else:

        def fun(t, y):
            w = omega_sq(t)
            g = damping(t)
            return (y[2], y[3], -w * y[0] - g * y[2], -w * y[1] - g * y[3])

    y0 = (q0.real, q0.imag, qdot0.real, qdot0.imag)
    if t1 == t0:
        return [OscillatorState(t0, q0, qdot0)]
    raw = _dopri5(fun, t0, y0, t1, cfg, t_eval)
    return [OscillatorState(t, complex(y[0], y[1]), complex(y[2], y[3])) for t, y in raw]
