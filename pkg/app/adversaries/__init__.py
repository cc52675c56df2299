from app.adversaries.base import Adversary, AdversaryRoundReport, BroadcastChoice, HalfEmptyConfig
from app.adversaries.oblivious import ObliviousAdversary, oblivious_sequence, parse_family_spec
from app.adversaries.rotating import RotatingLineAdversary, rotating_line_graph
from app.adversaries.strong import (
    StrongAdversary,
    half_empty_witness,
    is_free_edge,
    strongly_adaptive_graph,
    verify_half_empty,
)
from app.config.constants import SpecPrefix


def parse_adversary_spec(text: str) -> Adversary:
    """`strong`, `rotating-line`, or any oblivious family spec."""
    name = text.strip()
    if name == SpecPrefix.STRONG:
        return StrongAdversary()
    if name == SpecPrefix.ROTATING_LINE:
        return RotatingLineAdversary()
    return ObliviousAdversary(parse_family_spec(name))


__all__ = [
    'Adversary',
    'AdversaryRoundReport',
    'BroadcastChoice',
    'HalfEmptyConfig',
    'ObliviousAdversary',
    'RotatingLineAdversary',
    'StrongAdversary',
    'half_empty_witness',
    'is_free_edge',
    'oblivious_sequence',
    'parse_adversary_spec',
    'parse_family_spec',
    'rotating_line_graph',
    'strongly_adaptive_graph',
    'verify_half_empty',
]
