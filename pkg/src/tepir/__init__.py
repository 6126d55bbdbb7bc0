"""Private information retrieval from replicated databases that is private
against T colluding databases and keeps all message content hidden from an
eavesdropper tapping any E of them.

The package provides the scheme engine (query generation, database answers,
decoding), instance-level verifiers for correctness and both privacy
guarantees, and exact-rational calculators for the inner/outer rate bounds
and the secrecy-rate bounds.
"""

from .bounds import (BoundReport, bound_report, capacity_e_ge_t, inner_bound,
                     outer_bound, secrecy_bounds, sweep)
from .field import (DivisionByZero, FieldElement, NonPrimeModulus, PrimeField,
                    field_new, is_prime, next_prime)
from .matrices import (DuplicatePoint, FieldTooSmall, SingularMatrix, ZeroPoint,
                       invert, lemma1_harness, master_matrix, mds_generator,
                       rank, sample_invertible, solve, vandermonde)
from .params import (InvalidParameters, SchemeParams, SubsetPlan,
                     check_divisibilities, derive, subset_plan)
from .scheme import (AllColludeResult, CommonRandomness, DecodeFailure,
                     MessageStore, RetrievalResult, Transcript, UserState,
                     answer, assemble_queries, build_round_vector, decode,
                     encode_desired, encode_undesired, generate_session,
                     run_all_collude, run_retrieval, transcript_from_json,
                     transcript_to_json)
from .verify import (CheckReport, CollusionView, EavesdropView,
                     collusion_view, eavesdrop_view, run_all_checks,
                     transcript_system_privacy_failures, verify_correctness,
                     verify_system_privacy, verify_system_privacy_config,
                     verify_user_privacy_statistical,
                     verify_user_privacy_structural)

__version__ = "0.1.0"
