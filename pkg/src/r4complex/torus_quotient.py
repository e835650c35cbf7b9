"""The quotient elliptic fibration (C* x punctured disk) / Z.

The integer n acts by (z, w) -> (z*w^n, w); each fiber over w is the torus
C*/w^Z. This module reduces points to the fundamental domain |w| < |z| <= 1,
computes the lattice parameter of a fiber, evaluates the modular j-invariant
through its q-expansion (with q = w), and decides fiber isomorphism.
"""

from __future__ import annotations

import math
import threading
from dataclasses import dataclass

from .numerics import TWO_PI, DomainError, require_finite

#: largest |w| at which the q-expansion evaluation is certified.
J_SERIES_RADIUS = 0.5

#: hard cap on adaptively extended series length (reached only near the
#: certification radius with very tight tolerances).
_J_SERIES_MAX_TERMS = 700


@dataclass(frozen=True)
class QuotientPoint:
    """A point of the quotient in canonical form: |w| < |z| <= 1.

    ``shift`` records the exponent n applied to reach the canonical
    representative from the original input.
    """

    z: complex
    w: complex
    shift: int

    def __post_init__(self) -> None:
        if not (abs(self.w) < abs(self.z) <= 1.0):
            raise DomainError(
                f"not a canonical representative: |w|={abs(self.w)!r}, "
                f"|z|={abs(self.z)!r}"
            )


def reduce(z: complex, w: complex) -> QuotientPoint:
    """Canonical representative of the orbit of (z, w) under n.(z,w)=(zw^n, w).

    Requires z != 0 and 0 < |w| < 1; then the exponent n with
    |w| < |z w^n| <= 1 is unique.
    """
    z = require_finite(z, "z")
    w = require_finite(w, "w")
    if z == 0:
        raise DomainError("fiber coordinate must be nonzero")
    r = abs(w)
    if not (0.0 < r < 1.0):
        raise DomainError(f"base coordinate must satisfy 0 < |w| < 1, got |w|={r}")
    n = math.ceil(math.log(abs(z)) / -math.log(r))
    # The closed-form index can be off by one when |z w^n| rounds across a
    # boundary; settle it by direct comparison.
    for delta in (0, 1, -1, 2, -2):
        cand = n + delta
        zc = z * w**cand
        if r < abs(zc) <= 1.0:
            return QuotientPoint(z=zc, w=w, shift=cand)
    raise DomainError(f"reduction failed for z={z!r}, w={w!r}")


@dataclass(frozen=True)
class LatticeParam:
    """Upper-half-plane parameter v of a fiber torus: C/(Z + Zv)."""

    v: complex

    def __post_init__(self) -> None:
        if not self.v.imag > 0:
            raise DomainError(f"lattice parameter needs Im(v) > 0, got {self.v!r}")


def lattice_param(w: complex) -> LatticeParam:
    """Lattice parameter v = (1/2 pi i) log w of the fiber torus over w.

    The argument convention here is arg w in [0, 2 pi) (not the package-wide
    principal branch), so Re(v) in [0, 1) and Im(v) = -log|w| / 2 pi > 0.
    """
    w = require_finite(w, "w")
    r = abs(w)
    if not (0.0 < r < 1.0):
        raise DomainError(f"need 0 < |w| < 1, got |w|={r}")
    theta = math.atan2(w.imag, w.real)
    if theta < 0.0:
        theta += TWO_PI
    return LatticeParam(complex(theta / TWO_PI, -math.log(r) / TWO_PI))


# --- q-expansion of the modular j-invariant ---------------------------------
#
# Coefficients are generated exactly (integer arithmetic) from the weight-4
# Eisenstein series and the 24th power of the Euler product:
#
#   j(q) * q = E4(q)^3 / prod_{n>=1} (1-q^n)^24.
#
# The table extends on demand under a lock; entry [n] is the coefficient of
# q^(n-1) in j.

_j_lock = threading.Lock()
_j_table: list[int] = []


def _sigma3(n: int) -> int:
    return sum(d**3 for d in range(1, n + 1) if n % d == 0)


def _polymul(a: list[int], b: list[int], nmax: int) -> list[int]:
    out = [0] * (nmax + 1)
    for i, ai in enumerate(a):
        if ai == 0 or i > nmax:
            continue
        top = nmax - i
        for j, bj in enumerate(b):
            if j > top:
                break
            out[i + j] += ai * bj
    return out


def _build_j_table(nmax: int) -> list[int]:
    e4 = [1] + [240 * _sigma3(n) for n in range(1, nmax + 1)]
    e4cubed = _polymul(_polymul(e4, e4, nmax), e4, nmax)
    euler24 = [1] + [0] * nmax
    for n in range(1, nmax + 1):
        for _ in range(24):
            nxt = euler24[:]
            for i in range(nmax + 1 - n):
                nxt[i + n] -= euler24[i]
            euler24 = nxt
    inv = [1] + [0] * nmax
    for n in range(1, nmax + 1):
        inv[n] = -sum(euler24[k] * inv[n - k] for k in range(1, n + 1))
    return _polymul(e4cubed, inv, nmax)


def j_coefficients(count: int) -> list[int]:
    """First ``count`` coefficients of j(q), starting at the q^-1 term.

    Exact integers; the table is cached and grown on demand.
    """
    if count < 1:
        raise DomainError("count must be >= 1")
    global _j_table
    with _j_lock:
        if len(_j_table) < count:
            _j_table = _build_j_table(count + 16)
        return _j_table[:count]


class SeriesRadiusError(DomainError):
    """|w| exceeds the radius for which the q-series tail is certified."""


def _tail_bound(n: int, aq: float) -> float:
    # coefficient bound c(n) <= exp(4 pi sqrt(n)) plus a geometric majorant
    # for the remaining terms; valid once the term ratio drops below 1.
    term = math.exp(4.0 * math.pi * math.sqrt(n)) * aq**n
    ratio = aq * math.exp(4.0 * math.pi * (math.sqrt(n + 1.0) - math.sqrt(n)))
    if ratio >= 1.0:
        return math.inf
    return term / (1.0 - ratio)


def j_torus(w: complex, tol: float = 1e-9) -> complex:
    """j-invariant of the torus C*/w^Z via the q-expansion with q = w.

    Summation stops once the certified tail bound drops below
    ``tol * max(1, |partial sum|)``, i.e. ``tol`` is a relative tolerance
    against the eventual j value. Certified only for 0 < |w| <= 0.5; beyond
    that radius a SeriesRadiusError is raised.
    """
    w = require_finite(w, "w")
    if not (tol > 0):
        raise DomainError("tol must be positive")
    aq = abs(w)
    if aq == 0.0:
        raise DomainError("j has a pole at w = 0")
    if aq > J_SERIES_RADIUS:
        raise SeriesRadiusError(
            f"|w|={aq} exceeds the certified q-series radius {J_SERIES_RADIUS}"
        )
    coeffs = j_coefficients(64)
    s = 1.0 / w + coeffs[1]
    qpow = complex(1.0, 0.0)
    n = 1
    while True:
        if n + 1 >= len(coeffs):
            coeffs = j_coefficients(min(2 * len(coeffs), _J_SERIES_MAX_TERMS + 1))
        qpow *= w
        s += coeffs[n + 1] * qpow
        if _tail_bound(n + 1, aq) <= tol * max(1.0, abs(s)):
            return s
        n += 1
        if n > _J_SERIES_MAX_TERMS:
            raise SeriesRadiusError(
                f"q-series did not certify within {_J_SERIES_MAX_TERMS} terms "
                f"at |w|={aq}, tol={tol}"
            )


def tori_isomorphic(w: complex, w2: complex, tol: float = 1e-6) -> bool:
    """Whether the fiber tori over w and w2 are isomorphic elliptic curves.

    Decided by j-invariant equality: |j(w) - j(w2)| <= tol * (1 + |j(w)|).
    """
    if not (tol > 0):
        raise DomainError("tol must be positive")
    jw = j_torus(w, tol=min(tol, 1e-9))
    jw2 = j_torus(w2, tol=min(tol, 1e-9))
    return abs(jw - jw2) <= tol * (1.0 + abs(jw))
