"""Synchronism versus asynchronism in Boolean automata networks."""
from .core import (
    LIMITS, Network, NonMonotoneNetwork, Sign, SizeCeiling, build_network, flip, frustrations, hamming,
    instabilities, is_locally_monotone, parse_config, raise_limits, signed_structure, to_bits,
)
from .dynamics import Transition, build_graph, check_attractor_preservation, outgoing_transitions, reachability
from .cycles import critical_cycles, min_critical_size, x_critical_cycles
from .sequential import admissible_derivation, decompose, is_sequentialisable, normal_transitions
from .impact import Impact, classify_impact, classify_sensitivity, check_structural_prerequisites, impact_label

__version__ = "0.1.0"
