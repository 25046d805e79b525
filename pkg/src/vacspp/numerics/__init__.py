"""Self-contained numerical kernel: Bessel functions, roots, ODEs, quadrature."""

from .bessel import bessel_j, bessel_j_prime, bessel_zero
from .ode import IntegratorConfig, OscillatorState, integrate_oscillator
from .quadrature import quadrature
from .roots import Bracket, find_root, scan_sign_changes

__all__ = [
    "Bracket",
    "IntegratorConfig",
    "OscillatorState",
    "bessel_j",
    "bessel_j_prime",
    "bessel_zero",
    "find_root",
    "integrate_oscillator",
    "quadrature",
    "scan_sign_changes",
]
