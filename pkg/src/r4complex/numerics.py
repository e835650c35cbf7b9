"""Complex-arithmetic backbone: branched logarithms, annulus moduli, and the
finite-difference Cauchy-Riemann residual.

Every quantity in this package is a plain ``complex``/``float``; the helpers
here enforce the domain conventions that the rest of the modules rely on:

* principal logarithms carry their imaginary part in (-pi, pi] (half-open at
  -pi), so branch indices are reproducible;
* annuli are open, ``0 <= r_in < r_out <= inf``;
* the moduli parameters (rho0, rho1, rho2) satisfy
  ``0 < rho0 < rho1 < 1 < rho2 < 1/rho1``.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from typing import Callable

TWO_PI = 2.0 * math.pi


class DomainError(ValueError):
    """Input lies outside the mathematical domain of an operation."""


def require_finite(z: complex, label: str = "value") -> complex:
    """Reject NaN/Inf components; return the value unchanged."""
    z = complex(z)
    if not (math.isfinite(z.real) and math.isfinite(z.imag)):
        raise DomainError(f"{label} must have finite components, got {z!r}")
    return z


@dataclass(frozen=True)
class BranchedLog:
    """A logarithm together with an explicit integer branch index.

    ``value = principal + 2*pi*i*branch`` with Im(principal) in (-pi, pi].
    """

    principal: complex
    branch: int

    @property
    def value(self) -> complex:
        return self.principal + TWO_PI * 1j * self.branch


def branched_log(w: complex, k: int = 0) -> BranchedLog:
    """Branch ``k`` of log w.

    Raises DomainError for w = 0. The principal part keeps its imaginary
    part in (-pi, pi]; inputs on the negative real axis with a negative-zero
    imaginary part are folded back to +pi.
    """
    w = require_finite(w, "w")
    if w == 0:
        raise DomainError("log is undefined at 0")
    p = cmath.log(w)
    if p.imag <= -math.pi:
        # cmath returns -pi for arguments with imag == -0.0; fold to +pi.
        p = complex(p.real, p.imag + TWO_PI)
    return BranchedLog(principal=p, branch=int(k))


def cr_residual(
    f: Callable[[complex], complex], at: complex, step: float = 1e-4
) -> float:
    """Magnitude of the numerical d/d(conj z) derivative of ``f`` at ``at``.

    Uses the 4-point central stencil

        dzbar f ~ [(f(z+h) - f(z-h)) + i*(f(z+ih) - f(z-ih))] / (4h)

    with h = step * max(1, |at|). Second-order accurate: for a holomorphic
    map the result decays like O(step^2) until rounding noise takes over.
    Evaluation failures inside the stencil propagate to the caller.
    """
    at = require_finite(at, "at")
    if not (step > 0):
        raise DomainError(f"step must be positive, got {step}")
    h = step * max(1.0, abs(at))
    d = (f(at + h) - f(at - h)) + 1j * (f(at + 1j * h) - f(at - 1j * h))
    return abs(d / (4.0 * h))


@dataclass(frozen=True)
class AnnulusSpec:
    """Open annulus ``r_in < |z| < r_out``; ``r_in = 0`` is a punctured disk,
    ``r_out = inf`` an unbounded complement."""

    r_in: float
    r_out: float

    def __post_init__(self) -> None:
        if math.isnan(self.r_in) or math.isnan(self.r_out):
            raise DomainError("annulus radii must not be NaN")
        if not (0.0 <= self.r_in < self.r_out):
            raise DomainError(
                f"need 0 <= r_in < r_out, got ({self.r_in}, {self.r_out})"
            )

    def contains(self, z: complex) -> bool:
        return self.r_in < abs(z) < self.r_out

    def scaled(self, c: float) -> "AnnulusSpec":
        if not (c > 0) or math.isinf(c):
            raise DomainError("scale factor must be positive and finite")
        return AnnulusSpec(self.r_in * c, self.r_out * c)


class InfiniteModulusError(DomainError):
    """The annulus is a punctured disk or unbounded: no finite conformal
    modulus exists."""


def annulus_modulus(a: AnnulusSpec) -> float:
    """Conformal modulus ``log(r_out/r_in) / (2 pi)``.

    A complete biholomorphism invariant of finite annuli: two annuli are
    conformally equivalent iff their moduli agree.
    """
    if a.r_in == 0.0 or math.isinf(a.r_out):
        raise InfiniteModulusError(
            f"{a!r} is not a conformal annulus of finite modulus"
        )
    return math.log(a.r_out / a.r_in) / TWO_PI


def annuli_biholomorphic(a: AnnulusSpec, b: AnnulusSpec, tol: float = 1e-9) -> bool:
    """Whether two finite annuli are conformally equivalent (moduli match
    within ``tol``)."""
    if not (tol > 0):
        raise DomainError("tol must be positive")
    return abs(annulus_modulus(a) - annulus_modulus(b)) <= tol


@dataclass(frozen=True)
class ModuliParams:
    """Parameter triple (rho0, rho1, rho2) for one glued complex structure.

    (rho1, rho2) ranges over the open region 0 < rho1 < 1 < rho2 < 1/rho1;
    rho0 in (0, rho1) is auxiliary and only sets the width of the gluing
    annulus.
    """

    rho0: float
    rho1: float
    rho2: float

    def __post_init__(self) -> None:
        ok = (
            0.0 < self.rho0 < self.rho1 < 1.0 < self.rho2 < 1.0 / self.rho1
        )
        if not ok:
            raise DomainError(
                "moduli parameters must satisfy "
                "0 < rho0 < rho1 < 1 < rho2 < 1/rho1, got "
                f"({self.rho0}, {self.rho1}, {self.rho2})"
            )

    @classmethod
    def default(cls) -> "ModuliParams":
        return cls(rho0=0.1, rho1=0.3, rho2=2.0)

    @property
    def base_overlap(self) -> AnnulusSpec:
        """The annulus rho0 < |w| < rho1 where the two base charts overlap."""
        return AnnulusSpec(self.rho0, self.rho1)

    @property
    def fiber_annulus(self) -> AnnulusSpec:
        """The standard fiber annulus 1 < |z| < rho2 of the product chart."""
        return AnnulusSpec(1.0, self.rho2)

    @property
    def inverted_overlap(self) -> AnnulusSpec:
        """The overlap annulus seen from the second chart: 1/rho1 < |u| < 1/rho0."""
        return AnnulusSpec(1.0 / self.rho1, 1.0 / self.rho0)
