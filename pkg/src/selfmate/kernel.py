"""Backend selection for the move-generation kernel.

The compiled ``_ckernel`` is used when importable; set
``SELFMATE_PURE_PYTHON=1`` to force the pure-Python ``_pykernel``.
"""

from __future__ import annotations

import os

from . import _pykernel

_backend = _pykernel
BACKEND = "python"

if not os.environ.get("SELFMATE_PURE_PYTHON"):
    try:
        from . import _ckernel as _backend  # type: ignore[no-redef]

        BACKEND = "cython"
    except ImportError:
        pass

legal_moves = _backend.legal_moves
has_legal_move = _backend.has_legal_move
is_attacked = _backend.is_attacked
in_check = _backend.in_check
make_move = _backend.make_move
perft = _backend.perft
mating_moves = _backend.mating_moves

WHITE, BLACK = _pykernel.WHITE, _pykernel.BLACK
PAWN, KNIGHT, BISHOP, ROOK, QUEEN, KING = (
    _pykernel.PAWN, _pykernel.KNIGHT, _pykernel.BISHOP,
    _pykernel.ROOK, _pykernel.QUEEN, _pykernel.KING,
)
CAPTURE, EN_PASSANT, DOUBLE = _pykernel.CAPTURE, _pykernel.EN_PASSANT, _pykernel.DOUBLE

__all__ = [
    "BACKEND", "legal_moves", "has_legal_move", "is_attacked", "in_check",
    "make_move", "perft", "mating_moves",
]
