"""Generalized chess problem solving on F x R boards."""

from .board import (
    Color, IllegalMoveError, Kind, Move, Piece, Position, PositionError, Square, XfenError,
    apply_move, attacked_by, is_check, is_checkmate, is_stalemate, legal_moves, mirror,
    parse_move, parse_xfen, perft, serialize_xfen, sq,
)
from .g3 import (
    DnfFormula, G3Error, G3Result, G3State, Literal, UnboundVariable, eval_dnf, g3_moves,
    solve_g3,
)
from .gadgets import (
    GadgetError, GadgetKind, GadgetSpec, VerificationReport, build_gadget, merge_into,
    verify_gadget,
)
from .kernel import BACKEND
from .stipulation import (
    Goal, Refutation, SearchOptions, SolutionTree, Stipulation, playable_moves, refute, solve,
)
from .unbounded import UnboundedResult, solve_unbounded

__version__ = "0.1.0"

__all__ = [
    "BACKEND", "Color", "DnfFormula", "G3Error", "G3Result", "G3State", "GadgetError",
    "GadgetKind", "GadgetSpec", "Goal", "IllegalMoveError", "Kind", "Literal", "Move", "Piece",
    "Position", "PositionError", "Refutation", "SearchOptions", "SolutionTree", "Square",
    "Stipulation", "UnboundVariable", "UnboundedResult", "VerificationReport", "XfenError",
    "apply_move", "attacked_by", "build_gadget", "eval_dnf", "g3_moves", "is_check",
    "is_checkmate", "is_stalemate", "legal_moves", "merge_into", "mirror", "parse_move",
    "parse_xfen", "perft", "playable_moves", "refute", "serialize_xfen", "solve", "solve_g3",
    "solve_unbounded", "sq", "verify_gadget",
]
