"""Desk-scale toolkit for Piatetski-Shapiro primes.

Library layers:

- numeric: certified floors/powers, sawtooth, unit exponential, Gamma,
  compensated reductions.
- sieve: segmented least-prime-factor table with mu/Lambda and weighted
  prime sums.
- pspseq: floor-power membership, prime counting (plain, progressions,
  Beatty intersections), ternary Goldbach counts, singular series.
- exppairs: exact-rational exponent-pair calculus and admissibility regions.
- expsums: direct evaluation of the exponential sums and their checks.
- cli: subcommand front end emitting CSV/JSON.
"""

__version__ = "0.1.0"

from .numeric import (
    CertifiedReal,
    CompensatedSum,
    GammaExponent,
    PrecisionError,
    comp_csum,
    comp_sum,
    floor_neg_pow,
    floor_pow,
    floor_pow_array,
    gamma_fn,
    psi,
    unit_exp,
)
from .sieve import (
    SieveTable,
    build_table,
    lambda_array,
    mobius,
    mobius_array,
    prime_sum_ap,
    shared_table,
    von_mangoldt,
)
from .pspseq import (
    BeattyParams,
    Goldbach3Result,
    PsCountReport,
    SingularSeriesResult,
    ap_main_term,
    beatty_member,
    goldbach3_count,
    ps_beatty_prime_count,
    ps_expansion_residual,
    ps_indicator,
    ps_member_array,
    ps_prime_count,
    ps_prime_count_ap,
    refined_main_term,
    singular_series,
)
from .exppairs import (
    BOURGAIN_PAIR,
    TRIVIAL_PAIR,
    ConstraintReport,
    ExponentPair,
    InfeasibleError,
    Rational,
    a_process,
    b_process,
    delta_feasible,
    enumerate_pairs,
    gamma_threshold,
    max_delta,
    search_pairs,
    type1_constraints,
    type2_range,
)
from .expsums import (
    AlphaScanResult,
    ExpSumSpec,
    HbParams,
    ResourceGuardError,
    VaalerApprox,
    alpha_scan,
    b_process_compare,
    bf_discrepancy,
    bilinear_sum,
    classify_block,
    hb_reconstruct,
    hb_terms,
    min_valid_cutoff,
    theorem_sum,
    vaaler_coeffs,
    vdc_bound_check,
)
