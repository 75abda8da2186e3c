"""Piatetski-Shapiro membership and the counting theorems.

Membership of m in the floor-power sequence is decided through certified
floors of m^gamma (an interval [(m)^gamma, (m+1)^gamma) contains an
integer iff m is a member, expressed via two negated floors). Counting
functions compare exact counts against their refined main terms; the
ternary Goldbach count convolves membership indicator vectors; the
singular series is a truncated Euler product with a provable tail bound.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import mpmath
import numpy as np

from .numeric import GammaExponent, _pow_parts_array, floor_neg_pow, gamma_fn
from .sieve import SieveTable, shared_table

MAX_AP_MODULUS = 10 ** 4
GOLDBACH_N_RANGE = (10 ** 4, 10 ** 6)
SINGULAR_SERIES_P = 10 ** 6


@dataclass
class PsCountReport:
    """One counting experiment: exact count against its main term."""

    x: int
    c: float
    count: int
    main_term: float
    ratio: float | None
    q: int = 1
    a: int = 0
    headline_term: float | None = None


def _ensure_table(x: int, table: SieveTable | None) -> SieveTable:
    if table is None:
        return shared_table(x)
    if x > table.limit:
        raise ValueError(f"x={x} exceeds sieve limit {table.limit}")
    return table


def ps_indicator(m: int, g: GammaExponent) -> int:
    """1 iff m is a floor-power member, via two certified negated floors."""
    if m < 1:
        raise ValueError(f"m must be >= 1, got {m}")
    return floor_neg_pow(m, g.gamma) - floor_neg_pow(m + 1, g.gamma)


def ps_member_array(limit: int, g: GammaExponent) -> np.ndarray:
    """Boolean membership for every m <= limit (index 0 is False)."""
    ms = np.arange(1, limit + 2, dtype=np.int64)
    fl, frac = _pow_parts_array(ms, g.gamma)
    ceil = fl + (frac > 0)
    out = np.zeros(limit + 1, dtype=bool)
    out[1:] = (ceil[1:] - ceil[:-1]) == 1
    return out


def _psi_of_negated(frac: np.ndarray) -> np.ndarray:
    # psi(-(fl + frac)) = (1 - frac) - 1/2 when frac > 0, else -1/2
    return np.where(frac > 0, 0.5 - frac, -0.5)


def ps_expansion_residual(m: int, g: GammaExponent) -> float:
    """Indicator minus its first-order expansion; caller checks |.| <= C*m^(gamma-2)."""
    if m < 2:
        raise ValueError(f"m must be >= 2, got {m}")
    arr = ps_expansion_residual_array(np.array([m], dtype=np.int64), g)
    return float(arr[0])


def ps_expansion_residual_array(ms: np.ndarray, g: GammaExponent) -> np.ndarray:
    """Vectorised expansion residual for an array of m >= 2."""
    ms = np.asarray(ms, dtype=np.int64)
    if ms.size and ms.min() < 2:
        raise ValueError("all m must be >= 2")
    gam = g.gamma
    fl0, fr0 = _pow_parts_array(ms, gam)
    fl1, fr1 = _pow_parts_array(ms + 1, gam)
    ind = (fl1 + (fr1 > 0)) - (fl0 + (fr0 > 0))
    expansion = (
        gam * ms.astype(np.float64) ** (gam - 1.0)
        + _psi_of_negated(fr1)
        - _psi_of_negated(fr0)
    )
    return ind.astype(np.float64) - expansion


def refined_main_term(
    x: int, c: float, q: int = 1, a: int = 0, table: SieveTable | None = None
) -> float:
    """gamma * sum of p^(gamma-1) over primes p <= x with p = a (mod q)."""
    g = GammaExponent.from_c(c)
    table = _ensure_table(x, table)
    ps = table.primes(x)
    if q > 1:
        ps = ps[ps % q == a]
    return g.gamma * math.fsum(ps.astype(np.float64) ** (g.gamma - 1.0))


def ps_prime_count(x: int, c: float, table: SieveTable | None = None) -> PsCountReport:
    """Count floor-power primes <= x against the refined main term.

    The headline x^gamma/log x is reported alongside; the refined term makes
    the desk-scale ratio test tight because the sawtooth oscillation it drops
    is power-saving.
    """
    g = GammaExponent.from_c(c)
    table = _ensure_table(x, table)
    mask = ps_member_array(x, g) & table.primality[: x + 1]
    count = int(np.count_nonzero(mask))
    main = refined_main_term(x, c, table=table)
    return PsCountReport(
        x=x,
        c=c,
        count=count,
        main_term=main,
        ratio=count / main if main > 0 else None,
        headline_term=x ** g.gamma / math.log(x),
    )


def ap_main_term(
    x: int, c: float, q: int, a: int, table: SieveTable | None = None
) -> float:
    """Main term for the progression count, with the step integral in closed form.

    Evaluates gamma*x^(gamma-1)*pi(x;q,a) + gamma*(1-gamma)*I where
    I = integral_2^x u^(gamma-2) pi(u;q,a) du
      = sum over p of (x^(gamma-1) - p^(gamma-1)) / (gamma-1).
    """
    g = GammaExponent.from_c(c)
    table = _ensure_table(x, table)
    if q < 1:
        raise ValueError(f"q must be >= 1, got {q}")
    ps = table.primes(x)
    if q > 1:
        ps = ps[ps % q == a]
    gam = g.gamma
    xg1 = float(x) ** (gam - 1.0)
    integral = math.fsum((xg1 - ps.astype(np.float64) ** (gam - 1.0)) / (gam - 1.0))
    return gam * xg1 * ps.size + gam * (1.0 - gam) * integral


def ps_prime_count_ap(
    x: int, c: float, q: int, a: int, table: SieveTable | None = None
) -> PsCountReport:
    """Count floor-power primes <= x in the progression a mod q."""
    if q < 1 or q > MAX_AP_MODULUS:
        raise ValueError(f"q must lie in [1, {MAX_AP_MODULUS}], got {q}")
    if math.gcd(a, q) != 1:
        raise ValueError(f"require gcd(a, q) = 1, got a={a}, q={q}")
    g = GammaExponent.from_c(c)
    table = _ensure_table(x, table)
    mask = ps_member_array(x, g) & table.primality[: x + 1]
    idx = np.nonzero(mask)[0]
    count = int(np.count_nonzero(idx % q == a % q))
    main = ap_main_term(x, c, q, a % q, table=table)
    return PsCountReport(
        x=x,
        c=c,
        count=count,
        main_term=main,
        ratio=count / main if main > 0 else None,
        q=q,
        a=a % q,
    )


@dataclass(frozen=True)
class BeattyParams:
    """Parameters of the inhomogeneous floor sequence (floor(alpha*n + beta)).

    alpha must look irrational: values within 1e-12 of a rational with
    denominator <= 10^4 are rejected (heuristic guard; finite type is the
    caller's assertion). alpha_label 'sqrt2' or 'phi' requests certified
    quadratic-irrational arithmetic in boundary rechecks.
    """

    alpha: float
    beta: float
    alpha_label: str | None = None

    def __post_init__(self) -> None:
        if self.alpha_label not in (None, "sqrt2", "phi"):
            raise ValueError(f"unknown alpha_label {self.alpha_label!r}")
        if not self.alpha > 1.0:
            raise ValueError(f"alpha must exceed 1, got {self.alpha}")
        approx = Fraction(self.alpha).limit_denominator(10 ** 4)
        if abs(self.alpha - approx) < 1e-12:
            raise ValueError(
                f"alpha={self.alpha} is within 1e-12 of {approx}; need an "
                "irrational of finite type"
            )

    @classmethod
    def from_label(cls, label: str, beta: float) -> "BeattyParams":
        vals = {"sqrt2": math.sqrt(2.0), "phi": (1.0 + math.sqrt(5.0)) / 2.0}
        return cls(alpha=vals[label], beta=beta, alpha_label=label)

    def _alpha_mp(self):
        if self.alpha_label == "sqrt2":
            return mpmath.sqrt(2)
        if self.alpha_label == "phi":
            return (1 + mpmath.sqrt(5)) / 2
        return mpmath.mpf(self.alpha)


# Boundary guard for the vectorised membership test, relative to the
# interval endpoints; flagged entries are re-decided exactly.
_BEATTY_GUARD_REL = 1e-9


def beatty_member(m: int, B: BeattyParams) -> bool:
    """True iff [(m-beta)/alpha, (m+1-beta)/alpha) contains an integer n >= 1."""
    if m < 1:
        raise ValueError(f"m must be >= 1, got {m}")
    lo = (m - B.beta) / B.alpha
    hi = (m + 1 - B.beta) / B.alpha
    tol = (abs(lo) + abs(hi) + 1.0) * _BEATTY_GUARD_REL
    if min(abs(lo - round(lo)), abs(hi - round(hi))) < tol:
        return _beatty_member_exact(m, B)
    n0 = math.ceil(lo)
    return n0 >= 1 and n0 < hi


def _beatty_member_exact(m: int, B: BeattyParams) -> bool:
    if B.alpha_label is None:
        # the float parameters are the exact parameters: decide in Q
        af, bf = Fraction(B.alpha), Fraction(B.beta)
        lo = (m - bf) / af
        hi = (m + 1 - bf) / af
        n0 = math.ceil(lo)
        return n0 >= 1 and n0 < hi
    # quadratic irrationals have bounded partial quotients, so 60 digits
    # decide every boundary at desk scale with room to spare
    with mpmath.workdps(60):
        a = B._alpha_mp()
        b = mpmath.mpf(B.beta)
        lo = (m - b) / a
        hi = (m + 1 - b) / a
        n0 = mpmath.ceil(lo)
        return bool(n0 >= 1 and n0 < hi)


def beatty_member_array(limit: int, B: BeattyParams) -> np.ndarray:
    """Boolean Beatty membership for every m <= limit (index 0 is False)."""
    ms = np.arange(1, limit + 1, dtype=np.float64)
    lo = (ms - B.beta) / B.alpha
    hi = (ms + 1.0 - B.beta) / B.alpha
    n0 = np.ceil(lo)
    member = (n0 >= 1.0) & (n0 < hi)
    tol = (np.abs(lo) + np.abs(hi) + 1.0) * _BEATTY_GUARD_REL
    risky = (np.abs(lo - np.rint(lo)) < tol) | (np.abs(hi - np.rint(hi)) < tol)
    out = np.zeros(limit + 1, dtype=bool)
    out[1:] = member
    for i in np.nonzero(risky)[0]:
        out[i + 1] = _beatty_member_exact(int(i + 1), B)
    return out


def ps_beatty_prime_count(
    x: int, c: float, B: BeattyParams, table: SieveTable | None = None
) -> PsCountReport:
    """Count primes <= x lying in both sequences, against x^gamma/(alpha*log x)."""
    g = GammaExponent.from_c(c)
    table = _ensure_table(x, table)
    mask = (
        ps_member_array(x, g)
        & beatty_member_array(x, B)
        & table.primality[: x + 1]
    )
    count = int(np.count_nonzero(mask))
    main = x ** g.gamma / (B.alpha * math.log(x))
    return PsCountReport(
        x=x,
        c=c,
        count=count,
        main_term=main,
        ratio=count / main if main > 0 else None,
    )


@dataclass
class SingularSeriesResult:
    N: int
    truncation_P: int
    value: float
    tail_bound: float


def singular_series(
    N: int, P: int, table: SieveTable | None = None
) -> SingularSeriesResult:
    """Truncated Euler product prod_{p|N}(1-1/(p-1)^2) * prod_{p∤N}(1+1/(p-1)^3).

    Vanishes exactly for even N (the p=2 factor is zero). The omitted factors
    beyond P change log(value) by at most sum_{n>P} 2/n^3 <= 1/P^2, reported
    conservatively as 2/P.
    """
    if N < 3:
        raise ValueError(f"N must be >= 3, got {N}")
    if P < 100:
        raise ValueError(f"P must be >= 100, got {P}")
    table = _ensure_table(P, table)
    ps = table.primes(P).astype(np.int64)
    divides = (N % ps) == 0
    pm1 = ps.astype(np.float64) - 1.0
    f_div = float(np.prod(1.0 - 1.0 / pm1[divides] ** 2)) if divides.any() else 1.0
    f_rest = float(np.prod(1.0 + 1.0 / pm1[~divides] ** 3))
    return SingularSeriesResult(
        N=N, truncation_P=P, value=f_div * f_rest, tail_bound=2.0 / P
    )


@dataclass
class Goldbach3Result:
    N: int
    c: tuple[float, float, float]
    exact: int
    predicted: float
    degenerate: bool
    singular_value: float


def _pair_sum_counts(p1: np.ndarray, p2: np.ndarray, nmax: int) -> np.ndarray:
    """r[s] = #{(a, b): a in p1, b in p2, a + b = s} for s <= nmax."""
    r = np.zeros(nmax + 1, dtype=np.int64)
    block = 256
    for i in range(0, p1.size, block):
        sums = (p1[i : i + block, None] + p2[None, :]).ravel()
        sums = sums[sums <= nmax]
        if sums.size:
            r += np.bincount(sums, minlength=nmax + 1)
    return r


def goldbach3_count(
    N: int,
    c1: float,
    c2: float,
    c3: float,
    table: SieveTable | None = None,
    singular_P: int = SINGULAR_SERIES_P,
) -> Goldbach3Result:
    """Ordered triples of floor-power primes summing to N, with the predicted count.

    Even N is degenerate: the prediction is exactly 0 (singular series), the
    exact count is still reported.
    """
    lo, hi = GOLDBACH_N_RANGE
    if not lo <= N <= hi:
        raise ValueError(f"N must lie in [{lo}, {hi}], got {N}")
    cs = (c1, c2, c3)
    for c in cs:
        if not 1.0 < c < 1.2:
            raise ValueError(f"each exponent must lie in (1, 6/5), got {c}")
    table = _ensure_table(max(N, singular_P), table)
    prime_mask = table.primality[: N + 1]
    members = {}
    for c in sorted(set(cs)):
        members[c] = ps_member_array(N, GammaExponent.from_c(c)) & prime_mask
    p1 = np.nonzero(members[c1])[0]
    p2 = np.nonzero(members[c2])[0]
    r = _pair_sum_counts(p1, p2, N)
    p3 = np.nonzero(members[c3])[0]
    exact = int(r[N - p3].sum())

    ss = singular_series(N, singular_P, table=table)
    gs = [GammaExponent.from_c(c).gamma for c in cs]
    coeff = (
        gs[0] * gs[1] * gs[2] * gamma_fn(gs[0]) * gamma_fn(gs[1]) * gamma_fn(gs[2])
    ) / gamma_fn(gs[0] + gs[1] + gs[2])
    predicted = coeff * ss.value * N ** (sum(gs) - 1.0) / math.log(N) ** 3
    return Goldbach3Result(
        N=N,
        c=cs,
        exact=exact,
        predicted=predicted,
        degenerate=(N % 2 == 0),
        singular_value=ss.value,
    )
