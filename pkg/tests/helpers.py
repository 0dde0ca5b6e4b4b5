import random

from selfmate import Color, GadgetKind, Piece, Position, PositionError, Square, build_gadget
from selfmate.board import Kind

PAULY = "8x8 KB3N2/P1P1p1P1/5P1k/4P2p/7P/8/6B1/7b w - - 0 1"
BURBACH = "8x8 1R4B1/5r2/5P1Q/p5r1/P7/KN6/1p1P1p1P/1k2b2R w - - 0 1"
START = "8x8 rnbqkbnr/pppppppp/8/8/8/8/PPPPPPPP/RNBQKBNR w - - 0 1"


def entry_position(kind, color=Color.WHITE):
    g = build_gadget(kind)
    entry = next(e for e in g.entries if e.color is color)
    return g.entry_position(entry)


def acceptance_positions():
    """(label, position, stipulation text) for every solver acceptance case."""
    from selfmate import parse_xfen
    return [
        ("pauly", parse_xfen(PAULY), "s#2"),
        ("burbach", parse_xfen(BURBACH), "r#2"),
        ("selfmate+Qa5", entry_position(GadgetKind.SELFMATE), "s#1"),
        ("reflexmate+Qa3", entry_position(GadgetKind.REFLEXMATE_WHITE), "r#1"),
        ("semi_reflexmate+Qh1", entry_position(GadgetKind.SEMI_REFLEXMATE), "semi-r#1"),
        ("checkmate+Qa3", entry_position(GadgetKind.CHECKMATE_WHITE), "#1"),
    ]


_KINDS = [Kind.QUEEN, Kind.ROOK, Kind.BISHOP, Kind.KNIGHT, Kind.PAWN]


def random_position(rng: random.Random, files=None, ranks=None, n_extra=None,
                    allow_ep=True) -> Position:
    """A random valid position; pawns stay off both back ranks."""
    while True:
        F = files or rng.randint(4, 12)
        R = ranks or rng.randint(4, 12)
        squares = [Square(f, r) for f in range(1, F + 1) for r in range(1, R + 1)]
        rng.shuffle(squares)
        k = n_extra if n_extra is not None else rng.randint(0, min(14, F * R - 2))
        placement = {squares[0]: Piece(Color.WHITE, Kind.KING),
                     squares[1]: Piece(Color.BLACK, Kind.KING)}
        for s in squares[2:2 + k]:
            kind = rng.choice(_KINDS)
            if kind is Kind.PAWN and s.rank in (1, R):
                continue
            placement[s] = Piece(rng.choice(list(Color)), kind)
        side = rng.choice(list(Color))
        ep = None
        if allow_ep and rng.random() < 0.3:
            # plant a just-double-stepped pawn of the side not to move
            f = rng.randint(1, F)
            if side is Color.WHITE:
                pawn_sq, ep, origin = Square(f, R - 3), Square(f, R - 2), Square(f, R - 1)
                pawn = Piece(Color.BLACK, Kind.PAWN)
            else:
                pawn_sq, ep, origin = Square(f, 4), Square(f, 3), Square(f, 2)
                pawn = Piece(Color.WHITE, Kind.PAWN)
            for s in (pawn_sq, ep, origin):
                placement.pop(s, None)
            placement[pawn_sq] = pawn
        try:
            return Position.from_placement(F, R, placement, side, ep)
        except PositionError:
            continue
