"""Exact power GCD and LCM matrices, their structure, and divisibility."""
from .arith import (
    ArithmeticFn,
    arithmetic_fn,
    conv_mobius,
    divisors,
    format_rational,
    inverse_power_fn,
    mobius,
    parse_rational,
    power_fn,
)
from .divisibility import (
    ALL_KINDS,
    DivisibilityReport,
    PairKind,
    check_double_gtd_divisibility,
    check_single_gtd_divisibility,
    check_triple_gtd_divisibility,
    divides,
    kernel_closed_form,
    kernel_gcd_gcd,
    kernel_gcd_lcm,
    kernel_lcm_lcm,
    quotient,
    quotient_via_kernels,
    validate_theorems,
)
from .errors import *  # noqa: F401,F403
from .explorer import (
    CampaignSummary,
    EnumConfig,
    enumerate_factor_closed,
    enumerate_gcd_closed,
    run_campaign,
    search_frontier,
)
from .linalg import ExactMatrix, det_oracle, inverse_oracle, right_quotient, solve
from .matrices import (
    build_gcd_matrix,
    build_lcm_matrix,
    build_power_gcd_matrix,
    coeff_table,
    det_gcd_structured,
    det_lcm_structured,
    det_minor_lin_hong,
    det_smith,
    inverse_gcd_structured,
    inverse_lcm_structured,
    inverse_structured,
    mobius_coeff,
    mobius_coeff_closed,
    weight,
    weight_from_gtd,
)
from .structure import (
    GcdSet,
    analyze,
    check_interval_lcm_rule,
    check_triple_gtd_identities,
    condition_g,
    gcd_closure,
    greatest_type_divisors,
    is_divisor_chain,
    is_factor_closed,
    is_gcd_closed,
    max_gtd,
    parse_set,
    parse_set_file,
)

__version__ = "0.1.0"
