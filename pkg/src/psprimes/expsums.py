"""Direct numerical evaluation of the exponential-sum machinery.

Everything here evaluates sums term by term (no asymptotics): the central
weighted sum over dyadic ranges, bilinear model sums, the trigonometric
sawtooth approximation, second-derivative and stationary-phase checks, the
combinatorial von Mangoldt decomposition, and the weighted-versus-classical
prime-sum discrepancy with its alpha scans.

Reductions are exactly rounded and ordered, so every result is
deterministic regardless of worker parallelism.
"""

from __future__ import annotations

import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .numeric import GammaExponent, unit_exp, unit_exp_parts
from .pspseq import ps_member_array
from .sieve import SieveTable, lambda_array, mobius_array, shared_table

_MAX_XH_ENV = "PSPRIMES_MAX_XH"
_DEFAULT_MAX_XH = 1e13


class ResourceGuardError(ValueError):
    """Requested evaluation exceeds the configured term budget."""


def _ensure_table(limit: int, table: SieveTable | None) -> SieveTable:
    if table is None:
        return shared_table(limit)
    if limit > table.limit:
        raise ValueError(f"need sieve limit >= {limit}, table has {table.limit}")
    return table


@dataclass(frozen=True)
class ExpSumSpec:
    """Parameters of the central sum: phase alpha*n + h*(n+u)^gamma.

    n runs over a subinterval of (x, 2x] and h over a subinterval of (H, 2H];
    both default to the full dyadic interval.
    """

    alpha: float
    g: GammaExponent
    u: float
    x: int
    H: int
    n_interval: tuple[int, int] | None = None
    h_interval: tuple[int, int] | None = None

    def __post_init__(self) -> None:
        if not 0.0 <= self.u <= 1.0:
            raise ValueError(f"u must lie in [0, 1], got {self.u}")
        if self.x < 16:
            raise ValueError(f"x must be >= 16, got {self.x}")
        if self.H < 1:
            raise ValueError(f"H must be >= 1, got {self.H}")
        for name, iv, lo, hi in (
            ("n_interval", self.n_interval, self.x, 2 * self.x),
            ("h_interval", self.h_interval, self.H, 2 * self.H),
        ):
            if iv is not None:
                if not (lo <= iv[0] <= iv[1] <= hi):
                    raise ValueError(f"{name}={iv} not a subinterval of ({lo}, {hi}]")

    def n_bounds(self) -> tuple[int, int]:
        return self.n_interval if self.n_interval is not None else (self.x, 2 * self.x)

    def h_values(self) -> np.ndarray:
        lo, hi = (
            self.h_interval if self.h_interval is not None else (self.H, 2 * self.H)
        )
        return np.arange(lo + 1, hi + 1, dtype=np.int64)


def _weighted_abs_sum(weights: np.ndarray, phase: np.ndarray) -> float:
    cos, sin = unit_exp_parts(phase)
    return math.hypot(math.fsum(weights * cos), math.fsum(weights * sin))


def theorem_sum(
    spec: ExpSumSpec,
    scaled: bool = False,
    table: SieveTable | None = None,
    threads: int = 1,
) -> float:
    """Sum over h of |sum over n of Lambda(n) e(alpha*n + h*(n+u)^gamma)|.

    With scaled=True the result is multiplied by min(1, x^(1-gamma)/H).
    The per-h inner sums are independent, so h-blocks may be evaluated by a
    thread pool; the final reduction always runs in increasing h order.
    """
    if spec.x * spec.H > _max_xh():
        raise ResourceGuardError(
            f"x*H = {spec.x * spec.H} exceeds the {_MAX_XH_ENV} budget {_max_xh():g}"
        )
    n_lo, n_hi = spec.n_bounds()
    table = _ensure_table(n_hi, table)
    lam = lambda_array(table, n_hi)
    ns = np.arange(n_lo + 1, n_hi + 1, dtype=np.int64)
    w = lam[ns]
    keep = w > 0
    ns, w = ns[keep], w[keep]
    gam = spec.g.gamma
    pow_u = (ns + spec.u) ** gam
    alpha_n = spec.alpha * ns
    hs = spec.h_values()

    def inner(h: int) -> float:
        return _weighted_abs_sum(w, alpha_n + h * pow_u)

    if threads > 1 and hs.size > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            parts = list(pool.map(inner, [int(h) for h in hs]))
    else:
        parts = [inner(int(h)) for h in hs]
    total = math.fsum(parts)
    if scaled:
        total *= min(1.0, spec.x ** (1.0 - gam) / spec.H)
    return total


def _max_xh() -> float:
    return float(os.environ.get(_MAX_XH_ENV, _DEFAULT_MAX_XH))


def bilinear_sum(
    kind: str,
    a_coeffs,
    b_coeffs,
    m_range: range,
    n_range: range,
    *,
    alpha: float,
    g: GammaExponent,
    u: float,
    x: int,
    h_weights: dict[int, float],
) -> float:
    """|sum over h, m, n of delta_h a_m b_n e(alpha*mn + h*(mn+u)^gamma)|, mn in (x, 2x].

    kind 'TypeI' admits b_n up to max(1, log(2N)) (smooth/log coefficients);
    'TypeII' requires |b_n| <= 1. Coefficient bound violations are rejected.
    """
    if kind not in ("TypeI", "TypeII"):
        raise ValueError(f"kind must be TypeI or TypeII, got {kind!r}")
    a = np.asarray(a_coeffs, dtype=np.float64)
    b = np.asarray(b_coeffs, dtype=np.float64)
    if len(a) != len(m_range) or len(b) != len(n_range):
        raise ValueError("coefficient arrays must align with their ranges")
    tol = 1e-12
    if np.any(np.abs(a) > 1.0 + tol):
        raise ValueError("need |a_m| <= 1")
    b_cap = 1.0 if kind == "TypeII" else max(1.0, math.log(2 * max(n_range)))
    if np.any(np.abs(b) > b_cap + tol):
        raise ValueError(f"need |b_n| <= {b_cap:g} for {kind}")
    if any(abs(d) > 1.0 + tol for d in h_weights.values()):
        raise ValueError("need |delta_h| <= 1")

    ns = np.fromiter(n_range, dtype=np.int64)
    gam = g.gamma
    res: list[float] = []
    ims: list[float] = []
    for h in sorted(h_weights):
        delta = h_weights[h]
        if delta == 0.0:
            continue
        for i, m in enumerate(m_range):
            prod = m * ns
            mask = (prod > x) & (prod <= 2 * x)
            if not mask.any():
                continue
            sel = prod[mask]
            phase = alpha * sel + h * (sel + u) ** gam
            cos, sin = unit_exp_parts(phase)
            coeff = delta * float(a[i])
            bw = b[mask]
            res.append(coeff * math.fsum(bw * cos))
            ims.append(coeff * math.fsum(bw * sin))
    return math.hypot(math.fsum(res), math.fsum(ims))


@dataclass
class VaalerApprox:
    """Trigonometric approximant of the sawtooth with its Fejer-kernel majorant.

    The taper is W(t) = pi*t*(1-|t|)*cot(pi*t) + |t| evaluated at h/(H+1); the
    coefficient a_h = -W(h/(H+1)) / (2*pi*i*h) (conjugate-symmetric), and the
    majorant coefficients b_h = (1 - |h|/(H+1)) / (2H+2) are nonnegative with
    a nonnegative cosine sum.
    """

    H: int
    taper: np.ndarray = field(repr=False)  # W(h/(H+1)) for h = 1..H
    b: np.ndarray = field(repr=False)  # b_h for h = 0..H

    def a_coeff(self, h: int) -> complex:
        if not 0 < abs(h) <= self.H:
            raise ValueError(f"a_h defined for 0 < |h| <= {self.H}, got {h}")
        val = 1j * self.taper[abs(h) - 1] / (2.0 * math.pi * abs(h))
        return val if h > 0 else val.conjugate()

    def b_coeff(self, h: int) -> float:
        if abs(h) > self.H:
            raise ValueError(f"b_h defined for |h| <= {self.H}, got {h}")
        return float(self.b[abs(h)])

    def psi_poly(self, ts: np.ndarray) -> np.ndarray:
        """sum over 0<|h|<=H of a_h e(h t), which is real by symmetry."""
        ts = np.asarray(ts, dtype=np.float64)
        out = np.zeros_like(ts)
        for h in range(1, self.H + 1):
            out -= self.taper[h - 1] / (math.pi * h) * np.sin(2.0 * math.pi * h * ts)
        return out

    def majorant(self, ts: np.ndarray) -> np.ndarray:
        """sum over |h|<=H of b_h e(h t): the scaled Fejer kernel, >= 0."""
        ts = np.asarray(ts, dtype=np.float64)
        out = np.full_like(ts, float(self.b[0]))
        for h in range(1, self.H + 1):
            out += 2.0 * self.b[h] * np.cos(2.0 * math.pi * h * ts)
        return out


def vaaler_coeffs(H: int) -> VaalerApprox:
    """Explicit sawtooth approximant of degree H with |a_h| <= 1/(pi*h), b_h <= 2/H."""
    if H < 1:
        raise ValueError(f"H must be >= 1, got {H}")
    hs = np.arange(1, H + 1, dtype=np.float64)
    t = hs / (H + 1.0)
    taper = math.pi * t * (1.0 - t) / np.tan(math.pi * t) + t
    b = (1.0 - np.arange(0, H + 1, dtype=np.float64) / (H + 1.0)) / (2.0 * H + 2.0)
    return VaalerApprox(H=H, taper=taper, b=b)


@dataclass
class VdcCheck:
    lhs: float
    rhs_unit: float
    empirical_c: float
    lam: float


def vdc_bound_check(h: float, g: GammaExponent, alpha: float, N: int) -> VdcCheck:
    """Second-derivative test: |sum e(h n^gamma + alpha n)| against N*sqrt(lam)+1/sqrt(lam).

    lam is the curvature scale gamma*(1-gamma)*|h|*N^(gamma-2) of the phase on
    (N, 2N]; empirical_c is the observed ratio.
    """
    if h == 0:
        raise ValueError("h = 0 gives a degenerate (curvature-free) phase")
    if N < 1:
        raise ValueError(f"N must be >= 1, got {N}")
    gam = g.gamma
    ns = np.arange(N + 1, 2 * N + 1, dtype=np.int64)
    phase = h * ns.astype(np.float64) ** gam + alpha * ns
    cos, sin = unit_exp_parts(phase)
    lhs = math.hypot(math.fsum(cos), math.fsum(sin))
    lam = gam * (1.0 - gam) * abs(h) * float(N) ** (gam - 2.0)
    rhs = N * math.sqrt(lam) + 1.0 / math.sqrt(lam)
    return VdcCheck(lhs=lhs, rhs_unit=rhs, empirical_c=lhs / rhs, lam=lam)


@dataclass
class BProcessCompare:
    direct: complex
    stationary: complex
    error: float
    bound: float
    degenerate: bool
    num_stationary: int


def b_process_compare(
    h: float,
    g: GammaExponent,
    N: int,
    interval: tuple[float, float] | None = None,
) -> BProcessCompare:
    """Compare a concave-phase sum with its stationary-phase main term.

    Phase f(n) = h*n^gamma on [a, b] within (N, 2N] (so f'' < 0). The main
    term sums e(-phi(nu) - 1/8)/sqrt(|f''(x_nu)|) over integers nu in
    [f'(b), f'(a)] with f'(x_nu) = nu solved by bisection plus Newton polish;
    the reference error unit is log(F/N + 2) + N/sqrt(F) with F = h*N^gamma.
    """
    if h <= 0:
        raise ValueError(f"h must be positive for a concave phase, got {h}")
    a, b = interval if interval is not None else (N + 1, 2 * N)
    if not (N < a <= b <= 2 * N):
        raise ValueError(f"interval [{a}, {b}] must sit inside ({N}, {2 * N}]")
    gam = g.gamma

    ns = np.arange(math.ceil(a), math.floor(b) + 1, dtype=np.int64)
    cos, sin = unit_exp_parts(h * ns.astype(np.float64) ** gam)
    direct = complex(math.fsum(cos), math.fsum(sin))

    fp = lambda t: gam * h * t ** (gam - 1.0)  # decreasing on [a, b]
    nu_lo = math.ceil(fp(b))
    nu_hi = math.floor(fp(a))
    terms_re: list[float] = []
    terms_im: list[float] = []
    for nu in range(nu_lo, nu_hi + 1):
        x_nu = _stationary_point(gam, h, float(nu), float(a), float(b))
        phi = -h * x_nu ** gam + nu * x_nu
        curv = abs(gam * (gam - 1.0) * h * x_nu ** (gam - 2.0))
        z = unit_exp(-phi - 0.125) / math.sqrt(curv)
        terms_re.append(z.real)
        terms_im.append(z.imag)
    stationary = complex(math.fsum(terms_re), math.fsum(terms_im))

    F = h * float(N) ** gam
    bound = math.log(F / N + 2.0) + N / math.sqrt(F)
    return BProcessCompare(
        direct=direct,
        stationary=stationary,
        error=abs(direct - stationary),
        bound=bound,
        degenerate=F < 1.0,
        num_stationary=len(terms_re),
    )


def _stationary_point(gam: float, h: float, nu: float, a: float, b: float) -> float:
    """Solve gam*h*t^(gam-1) = nu on [a, b] to ~1e-13 relative (monotone)."""
    lo, hi = a, b
    while hi - lo > 1e-13 * hi:
        mid = 0.5 * (lo + hi)
        if gam * h * mid ** (gam - 1.0) >= nu:
            lo = mid
        else:
            hi = mid
    x = 0.5 * (lo + hi)
    for _ in range(3):
        val = gam * h * x ** (gam - 1.0) - nu
        slope = gam * (gam - 1.0) * h * x ** (gam - 2.0)
        x = min(max(x - val / slope, a), b)
    return x


@dataclass(frozen=True)
class HbParams:
    """Shape of the combinatorial decomposition: J folds, cutoff Z, dyadic base x."""

    J: int
    x: int
    Z: int

    def __post_init__(self) -> None:
        if not 1 <= self.J <= 4:
            raise ValueError(f"J must lie in [1, 4], got {self.J}")
        if self.Z < 2 or self.x < 2:
            raise ValueError("need Z >= 2 and x >= 2")
        if self.Z ** self.J < 2 * self.x:
            raise ValueError(
                f"identity invalid: Z^J = {self.Z ** self.J} < 2x = {2 * self.x}"
            )


@dataclass
class HbDecomposition:
    params: HbParams
    lambda_values: np.ndarray = field(repr=False)  # reconstructed Lambda on [0, 2x]
    term_arrays: list[np.ndarray] = field(repr=False)  # signed binomial terms per j


def _dirichlet(f: np.ndarray, g: np.ndarray, hi: int) -> np.ndarray:
    """Dirichlet convolution (f*g)(n) for n <= hi; f, g indexed from 0."""
    out = np.zeros(hi + 1, dtype=np.float64)
    for d in np.nonzero(f[: hi + 1])[0]:
        if d == 0:
            continue
        out[d :: d] += f[d] * g[1 : hi // d + 1]
    return out


def hb_terms(params: HbParams, table: SieveTable | None = None) -> HbDecomposition:
    """Materialise the alternating convolution identity for Lambda on [1, 2x].

    Term j is (-1)^(j-1) C(J,j) (mu restricted to [1,Z])^(*j) * log * 1^(*(j-1));
    their sum reproduces Lambda exactly for n <= Z^J, hence on all of (x, 2x].
    """
    hi = 2 * params.x
    table = _ensure_table(max(hi, params.Z), table)
    mu = mobius_array(table, min(params.Z, hi))
    g1 = np.zeros(hi + 1, dtype=np.float64)
    g1[1 : mu.size] = mu[1:]

    logs = np.zeros(hi + 1, dtype=np.float64)
    logs[1:] = np.log(np.arange(1, hi + 1, dtype=np.float64))

    terms = []
    total = np.zeros(hi + 1, dtype=np.float64)
    g_j = None
    l_j = logs  # log * 1^(*(j-1)), built incrementally
    for j in range(1, params.J + 1):
        g_j = g1 if g_j is None else _dirichlet(g_j, g1, hi)
        if j > 1:
            l_prev = l_j
            l_j = np.zeros(hi + 1, dtype=np.float64)
            for d in range(1, hi + 1):
                if l_prev[d]:
                    l_j[d :: d] += l_prev[d]
        signed = (-1.0) ** (j - 1) * math.comb(params.J, j) * _dirichlet(g_j, l_j, hi)
        terms.append(signed)
        total += signed
    return HbDecomposition(params=params, lambda_values=total, term_arrays=terms)


def hb_reconstruct(handle: HbDecomposition, n: int) -> float:
    """Evaluate the decomposition at n in (x, 2x]; equals Lambda(n) exactly."""
    if not handle.params.x < n <= 2 * handle.params.x:
        raise ValueError(f"n={n} outside ({handle.params.x}, {2 * handle.params.x}]")
    return float(handle.lambda_values[n])


def min_valid_cutoff(x: int, J: int) -> int:
    """Smallest Z with Z^J >= 2x."""
    z = round((2 * x) ** (1.0 / J))
    while z ** J < 2 * x:
        z += 1
    while z > 2 and (z - 1) ** J >= 2 * x:
        z -= 1
    return z


def classify_block(N_block: int, U: int, V: int, Z: int) -> str:
    """Block label: 'TypeI' when N > Z, 'TypeII' when U < N < V, else 'Neither'."""
    if not 3 <= U < V < Z:
        raise ValueError(f"need 3 <= U < V < Z, got U={U}, V={V}, Z={Z}")
    if N_block > Z:
        return "TypeI"
    if U < N_block < V:
        return "TypeII"
    return "Neither"


def hb_block_hypotheses(x: int, U: int, V: int, Z: int) -> list[str]:
    """Side conditions the decomposition parameters should satisfy; returns violations."""
    out = []
    if x < 64 * Z ** 2 * U:
        out.append(f"x >= 64*Z^2*U fails: {x} < {64 * Z ** 2 * U}")
    if Z < 4 * U ** 2:
        out.append(f"Z >= 4*U^2 fails: {Z} < {4 * U ** 2}")
    if V ** 3 < 32 * x:
        out.append(f"V^3 >= 32*x fails: {V ** 3} < {32 * x}")
    return out


def bf_discrepancy(
    nmax: int, c: float, alpha: float, table: SieveTable | None = None
) -> float:
    """|weighted member sum - classical sum| for the prime exponential sum.

    The weighted side carries c*p^(1-gamma)*log(p) over member primes; the
    classical side is sum of log(p) e(alpha p) over all primes <= nmax.
    """
    table = _ensure_table(nmax, table)
    w = _bf_weight_vector(nmax, c, table)
    ps = table.primes(nmax)
    cos, sin = unit_exp_parts(alpha * ps.astype(np.float64))
    return math.hypot(math.fsum(w * cos), math.fsum(w * sin))


def _bf_weight_vector(nmax: int, c: float, table: SieveTable) -> np.ndarray:
    g = GammaExponent.from_c(c)
    ps = table.primes(nmax)
    member = ps_member_array(nmax, g)[ps]
    pf = ps.astype(np.float64)
    logp = np.log(pf)
    return c * pf ** (1.0 - g.gamma) * logp * member - logp


@dataclass
class AlphaScanResult:
    max_discrepancy: float
    argmax_alpha: float
    rows: list[tuple[float, float]]


def alpha_scan(
    nmax: int,
    c: float,
    grid_size: int,
    table: SieveTable | None = None,
    threads: int = 1,
) -> AlphaScanResult:
    """Worst-case discrepancy over an equispaced alpha grid plus small rationals.

    The grid is {i/grid_size} on [0, 1) joined with every a/q for q <= 20;
    the maximiser reported is the first (smallest alpha) in case of ties.
    """
    if not 1 <= grid_size <= 10 ** 4:
        raise ValueError(f"grid_size must lie in [1, 10^4], got {grid_size}")
    table = _ensure_table(nmax, table)
    w = _bf_weight_vector(nmax, c, table)
    pf = table.primes(nmax).astype(np.float64)
    alphas = sorted(
        {i / grid_size for i in range(grid_size)}
        | {a / q for q in range(1, 21) for a in range(q)}
    )

    def disc(alpha: float) -> float:
        cos, sin = unit_exp_parts(alpha * pf)
        return math.hypot(math.fsum(w * cos), math.fsum(w * sin))

    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            vals = list(pool.map(disc, alphas))
    else:
        vals = [disc(a) for a in alphas]
    rows = list(zip(alphas, vals))
    best = max(range(len(rows)), key=lambda i: (rows[i][1], -i))
    return AlphaScanResult(
        max_discrepancy=rows[best][1], argmax_alpha=rows[best][0], rows=rows
    )
