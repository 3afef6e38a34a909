"""Normal and primitive elements of finite field extensions with
prescribed traces in intermediate subfields: exact counts, character-sum
certificates, sufficiency bounds, and exhaustive verification."""

from .bounds import (BoundReport, QValue, SieveConstants, check_sufficiency,
                     dispatch_coprime, k3_threshold, lcm_degree,
                     recompute_threshold, sieve_constant)
from .census import (CensusReport, ProfileCount, run_census,
                     verify_pmtrace_exceptions, verify_theorems)
from .characters import (CharSumBreakdown, additive_char_order,
                         char_sum_audit, gauss_sum, normal_char_sum,
                         normal_char_sum_table, normal_density,
                         primitive_char_sum, primitive_char_sum_table,
                         primitive_density, trace_char_sum,
                         trace_char_sum_table)
from .errors import (AuditError, BudgetError, ConsistencyError,
                     NormtraceError, ValidationError)
from .field import FieldContext, FieldElement, FieldSpec, build_context
from .intfactor import euler_phi, factorize, is_prime, mobius, omega
from .linearized import (TraceProfile, TraceSolution, additive_order,
                         check_admissible, enumerate_normal_admissible,
                         is_normal, make_profile, normal_subfield_elements,
                         normal_with_traces_count, solve_trace_system,
                         trace, trace_correspondence_ratio,
                         zero_sum_tuple_count)
from .polyq import (Factorization, PolyQ, factor, format_poly, parse_poly,
                    phi, squarefree_divisor_count, xm1_factorization)

__version__ = "0.1.0"

__all__ = [
    "AuditError", "BoundReport", "BudgetError", "CensusReport",
    "CharSumBreakdown", "ConsistencyError", "Factorization",
    "FieldContext", "FieldElement", "FieldSpec", "NormtraceError",
    "PolyQ", "ProfileCount", "QValue", "SieveConstants", "TraceProfile",
    "TraceSolution", "ValidationError", "additive_char_order",
    "additive_order", "build_context", "char_sum_audit",
    "check_admissible", "check_sufficiency", "dispatch_coprime",
    "enumerate_normal_admissible", "euler_phi", "factor", "factorize",
    "format_poly", "gauss_sum", "is_normal", "is_prime", "k3_threshold",
    "lcm_degree", "make_profile", "mobius", "normal_char_sum",
    "normal_char_sum_table", "normal_density",
    "normal_subfield_elements", "normal_with_traces_count", "omega",
    "parse_poly", "phi", "primitive_char_sum",
    "primitive_char_sum_table", "primitive_density",
    "recompute_threshold", "run_census", "sieve_constant",
    "solve_trace_system", "squarefree_divisor_count", "trace",
    "trace_char_sum", "trace_char_sum_table",
    "trace_correspondence_ratio", "verify_pmtrace_exceptions",
    "verify_theorems", "xm1_factorization", "zero_sum_tuple_count",
]
