"""Distance-preserving ZX rewrites and Floquetification of stabiliser codes."""

from .diagram import (B, H, X, Z, DiagramError, ValidationReport, ZXDiagram,
                      compose, single_spider, wire_diagram)
from .interpret import (BudgetExceeded, LinearMap, apply_boundary_paulis,
                        canonical_key, equal_up_to_scalar, interpret)
from .webs import PauliWeb, WebClass, boundary_pauli, classify, fire, web_basis, web_system
from .errors import (DetectorErrorMatrix, EdgeFlip, ErrorSet, apply_error,
                     classify_error, detecting_regions, detector_matrix,
                     distance_report, zx_distance)
from .rules import RULE_NAMES, RewriteRule, rule
from .rewrite import (Embedding, PreservationReport, apply, find_matches,
                      substitute, verify_distance_preserving, verify_semantics)
from .flow import (MCFlow, Path, extract_circuit, f_overhead, g_overhead,
                   make_well_covered, reduce_degree, verify_flow)
from .circuit import Circuit, Op, circuit_to_diagram
from .synth import decompose_measurement, measurement_circuit_for, normalise_pauli
from .tableau import PauliString, PostselectionZero, StabiliserTableau
from .floquet import (CodeParams, FloquetResult, PeriodicSchedule,
                      StabiliserCode, build_measurement_circuit, code_params,
                      code_schedule, established_window, floquetify,
                      parse_code, remove_swaps, reorder, schedule_distance,
                      simulate, unroll)

__all__ = [name for name in dir() if not name.startswith("_")]
__version__ = "0.1.0"
