"""Weierstrass-curve model of the elliptic fibration over the unit disk.

The fiber over tau is the projective cubic

    y^2 = 4 x^3 + x^2 - g2(tau) x - g3(tau)

in the affine chart (x, y); the single point at infinity is bookkept as a
flag on the fiber record, never as coordinates. The coefficient series

    g2(tau) = 20      * sum_{n>=1} n^3            tau^n / (1 - tau^n)
    g3(tau) = (1/3)   * sum_{n>=1} (7n^5 + 5n^3)  tau^n / (1 - tau^n)

converge for |tau| < 1; evaluation is certified through term bounds with a
geometric tail majorant and refuses |tau| within CONVERGENCE_MARGIN of 1.

Completing the cube with x = X - 1/12 puts the fiber into the depressed form
y^2 = 4 X^3 - G2 X - G3 with

    G2 = 1/12 + g2(tau),      G3 = g3(tau) - g2(tau)/12 - 1/216,

whose discriminant G2^3 - 27 G3^2 vanishes exactly at the nodal fiber tau = 0
and whose j-invariant is 1728 G2^3 / (G2^3 - 27 G3^2).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import mpmath

from .numerics import DomainError, require_finite

#: evaluation is refused for |tau| > 1 - CONVERGENCE_MARGIN.
CONVERGENCE_MARGIN = 0.05

_MAX_TERMS = 100_000


class ConvergenceMarginError(DomainError):
    """|tau| too close to 1 for a certified series tail."""


class SingularFiberError(DomainError):
    """Requested invariant has a pole at a singular fiber."""


def _check_tau(tau: complex) -> complex:
    tau = require_finite(tau, "tau")
    if abs(tau) > 1.0 - CONVERGENCE_MARGIN:
        raise ConvergenceMarginError(
            f"|tau|={abs(tau)} is inside the convergence margin "
            f"(need |tau| <= {1.0 - CONVERGENCE_MARGIN})"
        )
    return tau


def _lambert_sum(tau: complex, coeff, tol: float) -> complex:
    """Sum coeff(n) * tau^n / (1 - tau^n) until the certified tail < tol.

    ``coeff(n)`` must be positive (it doubles as its own term bound); the
    tail majorant is geometric with ratio |tau| * coeff(n+1)/coeff(n).
    """
    if not (tol > 0):
        raise DomainError("tol must be positive")
    if tau == 0:
        return 0j
    r = abs(tau)
    s = 0j
    tn = complex(1.0, 0.0)
    rn = 1.0
    for n in range(1, _MAX_TERMS + 1):
        tn *= tau
        rn *= r
        s += coeff(n) * tn / (1.0 - tn)
        term_bound = coeff(n + 1) * rn * r / (1.0 - r)
        growth = r * coeff(n + 2) / coeff(n + 1)
        if growth < 1.0 and term_bound / (1.0 - growth) < tol:
            return s
    raise ConvergenceMarginError(
        f"series did not certify within {_MAX_TERMS} terms at |tau|={r}"
    )


@lru_cache(maxsize=4096)
def g2_series(tau: complex, tol: float = 1e-12) -> complex:
    """Second Weierstrass coefficient of the fiber over tau (see module doc)."""
    tau = _check_tau(complex(tau))
    return _lambert_sum(tau, lambda n: 20.0 * n**3, tol)


@lru_cache(maxsize=4096)
def g3_series(tau: complex, tol: float = 1e-12) -> complex:
    """Third Weierstrass coefficient of the fiber over tau (see module doc)."""
    tau = _check_tau(complex(tau))
    return _lambert_sum(tau, lambda n: (7.0 * n**5 + 5.0 * n**3) / 3.0, tol)


@dataclass(frozen=True)
class FiberCubic:
    """Affine fiber equation F(x, y) = y^2 - 4x^3 - x^2 + g2*x + g3.

    The projective fiber has exactly one extra point on the line at
    infinity; ``has_point_at_infinity`` records it without coordinates.
    """

    tau: complex
    g2: complex
    g3: complex
    has_point_at_infinity: bool = True

    def f(self, x: complex, y: complex) -> complex:
        return y * y - 4.0 * x**3 - x * x + self.g2 * x + self.g3

    def fx(self, x: complex, y: complex) -> complex:
        return -12.0 * x * x - 2.0 * x + self.g2

    def fy(self, x: complex, y: complex) -> complex:
        return 2.0 * y

    def fxx(self, x: complex, y: complex) -> complex:
        return -24.0 * x - 2.0

    def fxy(self, x: complex, y: complex) -> complex:
        return 0j

    def fyy(self, x: complex, y: complex) -> complex:
        return 2.0 + 0j

    def hessian_det(self, x: complex, y: complex) -> complex:
        return self.fxx(x, y) * self.fyy(x, y) - self.fxy(x, y) ** 2


def fiber_cubic(tau: complex, tol: float = 1e-12) -> FiberCubic:
    """Coefficient record of the affine fiber equation over tau."""
    tau = _check_tau(complex(tau))
    return FiberCubic(tau=tau, g2=g2_series(tau, tol), g3=g3_series(tau, tol))


def depressed_invariants(g2: complex, g3: complex) -> tuple[complex, complex]:
    """(G2, G3) of the depressed form y^2 = 4X^3 - G2 X - G3 under x = X - 1/12."""
    return (1.0 / 12.0 + g2, g3 - g2 / 12.0 - 1.0 / 216.0)


def discriminant(tau: complex, tol: float = 1e-12) -> complex:
    """G2^3 - 27 G3^2 of the fiber over tau; zero iff the fiber is singular."""
    big_g2, big_g3 = depressed_invariants(g2_series(tau, tol), g3_series(tau, tol))
    return big_g2**3 - 27.0 * big_g3**2


def is_singular_fiber(tau: complex, tol: float = 1e-12) -> tuple[bool, complex]:
    """(flag, discriminant): flag is True when |discriminant| < tol."""
    if not (tol > 0):
        raise DomainError("tol must be positive")
    disc = discriminant(tau)
    return (abs(disc) < tol, disc)


def _series_mp(tau, coeff):
    # Lambert-type sum in the active working precision; stops once the term
    # bound falls below the precision target.
    s = mpmath.mpc(0)
    n = 1
    target = mpmath.mpf(10) ** (-(mpmath.mp.dps - 5))
    r = abs(tau)
    while n < _MAX_TERMS:
        tn = tau**n
        c = coeff(n)
        s += c * tn / (1 - tn)
        if c * r**n / (1 - r) < target and n > 8:
            return s
        n += 1
    raise ConvergenceMarginError("extended-precision series did not converge")


def j_from_weierstrass(tau: complex, singular_tol: float = 1e-12) -> complex:
    """j-invariant of the fiber over tau, from the depressed-form invariants.

    The final combination G2^3 - 27 G3^2 cancels catastrophically in double
    precision near |tau| ~ 0.3 (the discriminant is exponentially smaller
    than G2^3), so the series and the quotient are evaluated in extended
    precision and rounded once at the end. Raises SingularFiberError at a
    singular fiber, where j has a pole.
    """
    tau = _check_tau(complex(tau))
    flag, _ = is_singular_fiber(tau, tol=singular_tol)
    if flag:
        raise SingularFiberError(f"fiber over tau={tau!r} is singular: j has a pole")
    with mpmath.workdps(45):
        t = mpmath.mpc(tau)
        g2 = 20 * _series_mp(t, lambda n: mpmath.mpf(n) ** 3)
        g3 = _series_mp(t, lambda n: (7 * mpmath.mpf(n) ** 5 + 5 * mpmath.mpf(n) ** 3) / 3)
        big_g2 = mpmath.mpf(1) / 12 + g2
        big_g3 = g3 - g2 / 12 - mpmath.mpf(1) / 216
        disc = big_g2**3 - 27 * big_g3**2
        j = 1728 * big_g2**3 / disc
        return complex(j)
