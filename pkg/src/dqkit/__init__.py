"""dqkit: exact, certified deformation quantization at finite truncation order.

Moyal-Weyl star products, Fedosov flat sections, Frechet semi-norm
enclosures, quantum Weierstrass approximation with certified bounds, the
renormalized torus trace, and admissible BV graph combinatorics — all over
exact rational coefficient rings, with interval enclosures wherever a real
number must be bounded rather than represented.
"""

from .approx import (BudgetExceededError, QuantumPolynomial, bernstein,
                     classical_to_quantum, evaluate_witness,
                     quantum_weierstrass)
from .bvgraphs import (LabeledGraph, MalformedGraphError, admissible,
                       build_graph, enumerate_admissible, hbar_order,
                       verify_locality_bound)
from .coeffring import (Box, CEnclosure, PolyRep, SmoothRep, SumRep, TrigRep,
                        evaluate, jet, multi_indices, sup_enclosure)
from .fedosov import (FedosovData, InvalidCorrectionError,
                      QuantizabilityResult, check_flat, covariant_derivative,
                      exterior_derivative, flat_section, is_quantizable,
                      jet_locality_test, star_via_flat_sections)
from .formal import (FormalFunction, FormalSeries, TruncationError,
                     scalar_seminorm)
from .frechet import (Atlas, compact_distance, continuity_ratio,
                      formal_seminorm, frechet_distance, smooth_seminorm)
from .intervals import (Enclosure, QQi, cos_enclosure, pi_enclosure,
                        sin_enclosure)
from .serialization import ValidationError
from .star import (SymplecticStructure, commutator, invert_matrix, moyal,
                   moyal_component, poisson)
from .trace import (NonTrigCoefficientError, TraceValue, cyclicity_defect,
                    renormalized_trace, scalar_trace_seminorm,
                    symplectic_volume_factor, trace_continuity_check)
from .weyl import (WeylElement, bracket_over_hbar, delta, delta_inv,
                   fiberwise_moyal, graded_commutator, symbol)

__version__ = "0.1.0"

__all__ = [
    "Atlas", "Box", "BudgetExceededError", "CEnclosure", "Enclosure",
    "FedosovData", "FormalFunction", "FormalSeries", "InvalidCorrectionError",
    "LabeledGraph", "MalformedGraphError", "NonTrigCoefficientError",
    "PolyRep", "QQi", "QuantizabilityResult", "QuantumPolynomial",
    "SmoothRep", "SumRep", "SymplecticStructure", "TraceValue", "TrigRep",
    "TruncationError", "ValidationError", "WeylElement", "admissible",
    "bernstein", "bracket_over_hbar", "build_graph", "check_flat",
    "classical_to_quantum", "commutator", "compact_distance",
    "continuity_ratio", "cos_enclosure", "covariant_derivative",
    "cyclicity_defect", "delta", "delta_inv", "enumerate_admissible",
    "evaluate", "evaluate_witness", "exterior_derivative", "fiberwise_moyal",
    "flat_section", "formal_seminorm", "frechet_distance",
    "graded_commutator", "hbar_order", "invert_matrix", "is_quantizable",
    "jet", "jet_locality_test", "moyal", "moyal_component", "multi_indices",
    "pi_enclosure", "poisson", "quantum_weierstrass", "renormalized_trace",
    "scalar_seminorm", "scalar_trace_seminorm", "sin_enclosure",
    "smooth_seminorm", "star_via_flat_sections", "sup_enclosure", "symbol",
    "symplectic_volume_factor", "trace_continuity_check",
    "verify_locality_bound",
]
