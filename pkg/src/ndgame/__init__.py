"""Non-deterministic equilibria of abstract strategic games and multigames."""
from .lattice import BOTTOM, NdProfile, ProfileShape, SolveTrace, iterate_prefixpoint, leq, meet, top
from .multigame import MultiGame, combined_br_multi, embed_strategic, induced_seq, solve_multi
from .order import EventuallyPeriodicSeq, OutcomeFunction, Preference, validate_preference
from .strategic import BRVariant, StrategicGame, best_response, combined_br, solve

__all__ = [
    "BOTTOM", "NdProfile", "ProfileShape", "SolveTrace", "iterate_prefixpoint", "leq", "meet",
    "top", "MultiGame", "combined_br_multi", "embed_strategic", "induced_seq", "solve_multi",
    "EventuallyPeriodicSeq", "OutcomeFunction", "Preference", "validate_preference",
    "BRVariant", "StrategicGame", "best_response", "combined_br", "solve",
]
