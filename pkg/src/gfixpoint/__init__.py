"""G-metric spaces, phi-induced preorders and n-tuple fixed point iterations."""

from .checkers import (check_dual_chain, check_embedded_pair, check_n_embedded_chain,
                       check_weakly_related)
from .errors import (ArityError, ConfigError, DomainError, EvaluationError, ExprSyntaxError,
                     GFixpointError)
from .fixpoint import (FixpointReport, OrbitTrace, SolverConfig, Status, iterate_chain,
                       iterate_pair, iterate_single, iterate_triple, verify_coincidence,
                       verify_common_fixed_point, verify_ntuple_fixed_point)
from .gmetric import (AxiomReport, Box, FiniteSet, GMetricSpace, Interval, cauchy_residual,
                      check_axioms, custom_expr, derived_dg, discrete, eval_g, is_symmetric,
                      max_abs_diff, max_value, table_space)
from .maps import (NTupleMap, SelfMap, cyclic_apply, eval_map, linear, paper_f3, parse_expr,
                   parse_map, sine_perturbed, table_map, to_text)
from .order import (OrderReport, PhiOrder, RelationReport, check_isotone, check_preorder, leq,
                    phi_from_spec)

__version__ = "0.1.0"
