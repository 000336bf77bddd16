"""Simplification of generating sets of subfields of Q(x1, ..., xn)."""

from .arith import (NonCoprimeModuli, PrimeField, ZeroInverse, crt_pair, inv,
                    production_prime, rational_reconstruct)
from .poly import (DEGREVLEX, LEX, QQ, DivisionByZero, MonomialOrder,
                   MultiPoly, RationalFunction, Ring, RingMismatch, gcd_q,
                   lcm_q)
from .groebner import (TRACE_DIVERGED, GroebnerTrace, ReducedGB, gb_apply,
                       gb_learn, groebner, nf_plus, normal_form)
from .interp import (FAIL, Blackbox, EvaluationBudgetExceeded, RootNotSmooth,
                     admissible_ratio, ben_or_tiwari, cauchy_interpolate,
                     estimate_degrees, interpolate_rational)
from .oms import (GeneratorSet, CoefficientReport, gb_coefficients, gb_ring,
                  specialize_eoms)
from .fields import (MembershipContext, UnluckyPoint, contains, fields_equal,
                     minimize, polynomial_generators)
from .simplify import (NEED_MORE_PRIMES, SimplificationReport, SimplifyConfig,
                       VerificationFailed, reconstruct_candidates,
                       simplicity_compare, simplicity_key, simplify)
from .cli import ParseError, UnknownIdentifier, ZeroDenominator, \
    parse_expression, parse_problem_file, run

__version__ = "0.1.0"
