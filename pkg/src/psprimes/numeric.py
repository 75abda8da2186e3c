"""Certified elementary evaluations that everything else builds on.

The central primitive is a *certified* floor of ``n**e``: the value is
evaluated in float64 with a rigorous error radius, and whenever the
enclosing interval straddles an integer the evaluation is escalated
through increasing mpmath precision until the floor is unambiguous.
Exact integer powers (e.g. ``4**1.5 == 8``) are detected by integer
root extraction, so escalation always terminates.

A floor that is off by one corrupts every downstream membership count,
which is why nothing here trusts a bare float comparison near an
integer boundary.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import mpmath
import numpy as np

TWO_PI = 2.0 * math.pi

# Relative error radius attached to a float64 power: libm pow is good to a
# couple of ulps, 2^-47 leaves a margin of ~32 ulps.
_FLOAT_POW_REL = 2.0 ** -47

# Relative guard band for vectorised floors: anything whose fractional part
# comes closer than this to 0 or 1 is re-decided by the scalar certified path.
_ARRAY_GUARD_REL = 1e-12

_ESCALATION_PRECS = (96, 160, 256, 416, 704, 1184, 2000)


class PrecisionError(RuntimeError):
    """Raised when a floor decision cannot be certified at any staged precision."""


@dataclass(frozen=True)
class GammaExponent:
    """A validated pair (c, gamma) with gamma = 1/c, carried by every PS computation."""

    c: float
    gamma: float

    def __post_init__(self) -> None:
        if not 1.0 < self.c < 2.0:
            raise ValueError(f"exponent c must lie in (1, 2), got {self.c}")
        if abs(self.gamma * self.c - 1.0) > 1e-15:
            raise ValueError("gamma is not the reciprocal of c")
        if not 0.5 < self.gamma < 1.0:
            raise ValueError(f"gamma must lie in (1/2, 1), got {self.gamma}")

    @classmethod
    def from_c(cls, c: float) -> "GammaExponent":
        return cls(c=float(c), gamma=1.0 / float(c))

    @classmethod
    def from_gamma(cls, gamma: float) -> "GammaExponent":
        return cls(c=1.0 / float(gamma), gamma=float(gamma))


@dataclass(frozen=True)
class CertifiedReal:
    """A real known to lie in [value - radius, value + radius]."""

    value: float
    radius: float

    def __post_init__(self) -> None:
        if self.radius < 0.0 or not math.isfinite(self.value):
            raise ValueError("certified real needs a finite value and radius >= 0")

    def decided_floor(self) -> int | None:
        """Floor of the represented quantity, or None if the interval straddles an integer."""
        lo = math.floor(self.value - self.radius)
        hi = math.floor(self.value + self.radius)
        return int(lo) if lo == hi else None


def _iroot(n: int, k: int) -> tuple[int, bool]:
    """Integer k-th root of n >= 1: returns (floor(n**(1/k)), exact?)."""
    if n < 2 or k == 1:
        return n, True
    if k >= n.bit_length():
        return 1, n == 1
    x = 1 << -(-n.bit_length() // k)  # >= true root
    while True:
        y = ((k - 1) * x + n // x ** (k - 1)) // k
        if y >= x:
            break
        x = y
    return x, x ** k == n


def _pow_parts(n: int, e: float) -> tuple[int, float, bool]:
    """Certified decomposition of n**e: (floor, fractional part, exact integer?).

    The fractional part is a float64 approximation; it is only used by callers
    for quantities that are Lipschitz in it (sawtooth evaluations), never for
    another floor decision.
    """
    if n < 1:
        raise ValueError(f"base must be a positive integer, got {n}")
    if not 0.0 < e < 4.0:
        raise ValueError(f"exponent must lie in (0, 4), got {e}")
    if n == 1:
        return 1, 0.0, True
    if e == int(e):
        return n ** int(e), 0.0, True

    y = float(n) ** e
    cr = CertifiedReal(y, abs(y) * _FLOAT_POW_REL)
    fl = cr.decided_floor()
    if fl is not None:
        # Interval excludes every integer, so the power is certainly not one.
        return fl, y - fl, False

    # Close call: first rule exact integer powers in or out, then escalate.
    frac_e = Fraction(e)  # exact binary expansion of the float exponent
    root, exact = _iroot(n, frac_e.denominator)
    if exact:
        return root ** frac_e.numerator, 0.0, True
    for prec in _ESCALATION_PRECS:
        with mpmath.workprec(prec):
            ymp = mpmath.power(n, mpmath.mpf(e))
            rad = mpmath.ldexp(abs(ymp), 8 - prec)
            lo = mpmath.floor(ymp - rad)
            if lo == mpmath.floor(ymp + rad):
                return int(lo), float(ymp - lo), False
    raise PrecisionError(f"floor({n}**{e!r}) undecided at {_ESCALATION_PRECS[-1]} bits")


def floor_pow(n: int, e: float) -> int:
    """Exact floor(n**e) for integer n >= 1 and 0 < e < 4, certified."""
    fl, _, _ = _pow_parts(n, e)
    return fl


def floor_neg_pow(n: int, e: float) -> int:
    """Exact floor(-(n**e)), certified; equals -ceil(n**e)."""
    fl, _, exact = _pow_parts(n, e)
    return -fl if exact else -fl - 1


def floor_pow_array(ns: np.ndarray, e: float) -> np.ndarray:
    """Vectorised floor(n**e) with the same certification guarantee as floor_pow.

    Entries whose float64 fractional part falls inside the guard band are
    re-decided one by one through the certified scalar path.
    """
    fl, _ = _pow_parts_array(ns, e)
    return fl


def _pow_parts_array(ns: np.ndarray, e: float) -> tuple[np.ndarray, np.ndarray]:
    """Vectorised (floor, frac) of n**e with guarded near-integer escalation."""
    ns = np.asarray(ns, dtype=np.int64)
    if ns.size and (ns.min() < 1 or ns.max() >= (1 << 53)):
        raise ValueError("array bases must lie in [1, 2^53)")
    if not 0.0 < e < 4.0:
        raise ValueError(f"exponent must lie in (0, 4), got {e}")
    y = ns.astype(np.float64) ** e
    fl = np.floor(y)
    frac = y - fl
    tol = np.maximum(np.abs(y) * _ARRAY_GUARD_REL, _ARRAY_GUARD_REL)
    risky = (frac <= tol) | (frac >= 1.0 - tol)
    out = fl.astype(np.int64)
    if risky.any():
        for i in np.nonzero(risky)[0]:
            f, fr, _ = _pow_parts(int(ns[i]), e)
            out[i] = f
            frac[i] = fr
    return out, frac


def psi(t: float) -> float:
    """Sawtooth {t} - 1/2, in [-1/2, 1/2)."""
    return (t - math.floor(t)) - 0.5


def psi_array(t: np.ndarray) -> np.ndarray:
    t = np.asarray(t, dtype=np.float64)
    return (t - np.floor(t)) - 0.5


def unit_exp(t: float) -> complex:
    """e(t) = exp(2*pi*i*t), with the argument reduced mod 1 first."""
    r = t - math.floor(t)
    return complex(math.cos(TWO_PI * r), math.sin(TWO_PI * r))


def unit_exp_parts(t: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Vectorised (cos, sin) of 2*pi*t with mod-1 reduction."""
    t = np.asarray(t, dtype=np.float64)
    r = TWO_PI * (t - np.floor(t))
    return np.cos(r), np.sin(r)


# Lanczos approximation, g = 7, 9 terms: the classic double-precision
# coefficient set, giving ~1e-13 relative error on (0, 142).
_LANCZOS_G = 7.0
_LANCZOS_COEFFS = (
    0.99999999999980993,
    676.5203681218851,
    -1259.1392167224028,
    771.32342877765313,
    -176.61502916214059,
    12.507343278686905,
    -0.13857109526572012,
    9.9843695780195716e-6,
    1.5056327351493116e-7,
)


def gamma_fn(s: float) -> float:
    """Gamma(s) for s > 0 via the Lanczos approximation, relative error <= 1e-12."""
    if not (s > 0.0 and math.isfinite(s)):
        raise ValueError(f"gamma_fn requires s > 0, got {s}")
    if s < 0.5:
        # reflection keeps the series argument away from the poles
        return math.pi / (math.sin(math.pi * s) * gamma_fn(1.0 - s))
    z = s - 1.0
    acc = _LANCZOS_COEFFS[0]
    for i, c in enumerate(_LANCZOS_COEFFS[1:], start=1):
        acc += c / (z + i)
    t = z + _LANCZOS_G + 0.5
    return math.sqrt(2.0 * math.pi) * t ** (z + 0.5) * math.exp(-t) * acc


class CompensatedSum:
    """Neumaier-compensated streaming accumulator with a running error bound.

    The bound (2*eps + n*eps^2) * sum|x_i| is the standard worst case for
    compensated summation; for unit-magnitude terms it stays below 1e-6 out
    to ~1e9 terms.
    """

    __slots__ = ("_total", "_comp", "_abs_total", "_count")

    def __init__(self) -> None:
        self._total = 0.0
        self._comp = 0.0
        self._abs_total = 0.0
        self._count = 0

    def add(self, x: float) -> None:
        t = self._total + x
        if abs(self._total) >= abs(x):
            self._comp += (self._total - t) + x
        else:
            self._comp += (x - t) + self._total
        self._total = t
        self._abs_total += abs(x)
        self._count += 1

    @property
    def value(self) -> float:
        return self._total + self._comp

    @property
    def error_bound(self) -> float:
        eps = math.ulp(1.0) / 2.0
        return (2.0 * eps + self._count * eps * eps) * self._abs_total


def comp_sum(xs) -> tuple[float, float]:
    """Exactly rounded sum of a float array plus an error bound for the reduction."""
    xs = np.asarray(xs, dtype=np.float64)
    value = math.fsum(xs)
    # fsum is correctly rounded, so only the final rounding contributes.
    bound = math.ulp(abs(value)) if value else math.ulp(0.0)
    return value, bound


def comp_csum(res, ims) -> tuple[complex, float]:
    """Compensated complex reduction: (sum, error bound covering both parts)."""
    re, be = comp_sum(res)
    im, bi = comp_sum(ims)
    return complex(re, im), be + bi
