"""Generalized F x R chess: squares, positions, moves, xFEN and legality.

Only the six orthodox piece kinds exist.  Castling does not exist, pawns
double-step from rank 2 / rank R-1 only, and promotion happens on the last
rank.  Positions are immutable; every function here is pure.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from enum import Enum
from typing import Iterable, Mapping, NamedTuple

from . import kernel as K

MIN_FILES, MAX_FILES = 4, 26
MIN_RANKS, MAX_RANKS = 4, 64
FILE_LETTERS = "abcdefghijklmnopqrstuvwxyz"


class XfenError(ValueError):
    """Malformed xFEN text; ``column`` is the 0-based offset of the problem."""

    def __init__(self, message: str, column: int | None = None) -> None:
        self.column = column
        if column is not None:
            message = f"{message} (at column {column})"
        super().__init__(message)


class PositionError(ValueError):
    """A placement that breaks a Position invariant."""


class IllegalMoveError(ValueError):
    pass


class Color(str, Enum):
    WHITE = "w"
    BLACK = "b"

    @property
    def opposite(self) -> Color:
        return Color.BLACK if self is Color.WHITE else Color.WHITE

    @property
    def code(self) -> int:
        return K.WHITE if self is Color.WHITE else K.BLACK

    @classmethod
    def from_code(cls, code: int) -> Color:
        return cls.WHITE if code == K.WHITE else cls.BLACK


class Kind(str, Enum):
    KING = "K"
    QUEEN = "Q"
    ROOK = "R"
    BISHOP = "B"
    KNIGHT = "N"
    PAWN = "P"

    @property
    def code(self) -> int:
        return _KIND_CODE[self]

    @classmethod
    def from_code(cls, code: int) -> Kind:
        return _CODE_KIND[code]


_KIND_CODE = {
    Kind.PAWN: K.PAWN, Kind.KNIGHT: K.KNIGHT, Kind.BISHOP: K.BISHOP,
    Kind.ROOK: K.ROOK, Kind.QUEEN: K.QUEEN, Kind.KING: K.KING,
}
_CODE_KIND = {v: k for k, v in _KIND_CODE.items()}
PROMOTION_KINDS = (Kind.QUEEN, Kind.ROOK, Kind.BISHOP, Kind.KNIGHT)


class Square(NamedTuple):
    """A board square, 1-based: ``Square(1, 1)`` is a1."""

    file: int
    rank: int

    @property
    def name(self) -> str:
        return f"{FILE_LETTERS[self.file - 1]}{self.rank}"

    def __str__(self) -> str:
        return self.name

    def shifted(self, dfile: int, drank: int) -> Square:
        return Square(self.file + dfile, self.rank + drank)

    @classmethod
    def parse(cls, text: str) -> Square:
        m = re.fullmatch(r"([a-z])([1-9][0-9]*)", text)
        if not m:
            raise ValueError(f"bad square name {text!r}")
        return cls(FILE_LETTERS.index(m.group(1)) + 1, int(m.group(2)))


def sq(name: str) -> Square:
    """Shorthand for ``Square.parse``."""
    return Square.parse(name)


class Piece(NamedTuple):
    color: Color
    kind: Kind

    @property
    def symbol(self) -> str:
        return self.kind.value if self.color is Color.WHITE else self.kind.value.lower()

    @property
    def code(self) -> int:
        return self.color.code | self.kind.code

    @classmethod
    def from_symbol(cls, ch: str) -> Piece:
        kind = Kind(ch.upper())
        return cls(Color.WHITE if ch.isupper() else Color.BLACK, kind)

    @classmethod
    def from_code(cls, code: int) -> Piece:
        return cls(Color.from_code(code & 8), Kind.from_code(code & 7))


@dataclass(frozen=True)
class Move:
    from_sq: Square
    to_sq: Square
    piece: Kind
    promotion: Kind | None = None
    is_capture: bool = False
    is_en_passant: bool = False

    @property
    def text(self) -> str:
        """Long algebraic form without check marks, e.g. ``Pc7-c8=N``."""
        sep = "x" if self.is_capture else "-"
        promo = f"={self.promotion.value}" if self.promotion else ""
        return f"{self.piece.value}{self.from_sq}{sep}{self.to_sq}{promo}"

    def __str__(self) -> str:
        return self.text


@dataclass(frozen=True)
class Position:
    """Full game state on an F x R board.

    ``board`` is the kernel's byte encoding (see ``_pykernel``); use
    ``placement`` or ``piece_at`` for the typed view.
    """

    files: int
    ranks: int
    board: bytes
    side_to_move: Color = Color.WHITE
    ep_target: Square | None = None
    halfmove_clock: int = 0
    fullmove_number: int = 1
    _legal: list = field(default=None, init=False, repr=False, compare=False, hash=False)

    @classmethod
    def from_placement(
        cls,
        files: int,
        ranks: int,
        placement: Mapping[Square, Piece],
        side_to_move: Color = Color.WHITE,
        ep_target: Square | None = None,
        halfmove_clock: int = 0,
        fullmove_number: int = 1,
        validate: bool = True,
    ) -> Position:
        _check_size(files, ranks)
        buf = bytearray(files * ranks)
        for square, piece in placement.items():
            if not (1 <= square.file <= files and 1 <= square.rank <= ranks):
                raise PositionError(f"square {square} outside {files}x{ranks} board")
            buf[(square.rank - 1) * files + square.file - 1] = piece.code
        pos = cls(files, ranks, bytes(buf), side_to_move, ep_target,
                  halfmove_clock, fullmove_number)
        if validate:
            pos.validate()
        return pos

    @property
    def board_size(self) -> tuple[int, int]:
        return self.files, self.ranks

    @property
    def placement(self) -> dict[Square, Piece]:
        F = self.files
        return {
            Square(i % F + 1, i // F + 1): Piece.from_code(code)
            for i, code in enumerate(self.board)
            if code
        }

    def index(self, square: Square) -> int:
        return (square.rank - 1) * self.files + square.file - 1

    def square(self, index: int) -> Square:
        return Square(index % self.files + 1, index // self.files + 1)

    def contains(self, square: Square) -> bool:
        return 1 <= square.file <= self.files and 1 <= square.rank <= self.ranks

    def piece_at(self, square: Square) -> Piece | None:
        code = self.board[self.index(square)]
        return Piece.from_code(code) if code else None

    @property
    def ep_index(self) -> int:
        return self.index(self.ep_target) if self.ep_target else -1

    @property
    def key(self) -> tuple[bytes, int, int]:
        """Identity ignoring move counters: (board, side, ep)."""
        return self.board, self.side_to_move.code, self.ep_index

    def validate(self) -> None:
        """Raise ``PositionError`` unless every Position invariant holds.

        A pawn standing on its own promotion rank is tolerated: it has no
        moves and attacks nothing, and composed gadget boards use such pawns
        as blockers.
        """
        _check_size(self.files, self.ranks)
        if len(self.board) != self.files * self.ranks:
            raise PositionError("board length does not match size")
        counts = {c: self.board.count(c.code | K.KING) for c in Color}
        for color, n in sorted(counts.items(), key=lambda kv: -kv[1]):
            if n != 1:
                raise PositionError(f"{color.name.lower()} must have exactly one king, found {n}")
        if self.halfmove_clock < 0 or self.fullmove_number < 1:
            raise PositionError("bad move counters")
        waiting = self.side_to_move.opposite
        if K.in_check(self.board, self.files, self.ranks, waiting.code):
            raise PositionError(f"side not to move ({waiting.name.lower()}) is in check")
        if self.ep_target is not None:
            self._validate_ep()

    def _validate_ep(self) -> None:
        ep = self.ep_target
        if not self.contains(ep):
            raise PositionError(f"en-passant square {ep} off board")
        if self.side_to_move is Color.WHITE:
            want_rank, pawn_rank, origin_rank = self.ranks - 2, self.ranks - 3, self.ranks - 1
            pawn = Piece(Color.BLACK, Kind.PAWN)
        else:
            want_rank, pawn_rank, origin_rank = 3, 4, 2
            pawn = Piece(Color.WHITE, Kind.PAWN)
        if (
            ep.rank != want_rank
            or self.piece_at(ep) is not None
            or self.piece_at(Square(ep.file, pawn_rank)) != pawn
            or self.piece_at(Square(ep.file, origin_rank)) is not None
        ):
            raise PositionError(f"en-passant square {ep} is not behind a double-stepped pawn")

    def raw_moves(self) -> list[tuple[int, int, int, int]]:
        """Kernel move tuples in canonical order (cached per instance)."""
        if self._legal is None:
            object.__setattr__(
                self, "_legal",
                K.legal_moves(self.board, self.files, self.ranks,
                              self.side_to_move.code, self.ep_index),
            )
        return self._legal

    def __str__(self) -> str:
        return serialize_xfen(self)


def _check_size(files: int, ranks: int) -> None:
    if not (MIN_FILES <= files <= MAX_FILES and MIN_RANKS <= ranks <= MAX_RANKS):
        raise PositionError(
            f"board {files}x{ranks} outside {MIN_FILES}..{MAX_FILES} x {MIN_RANKS}..{MAX_RANKS}"
        )


# -- xFEN ------------------------------------------------------------------

_SIZE_RE = re.compile(r"(\d+)x(\d+)")


def parse_xfen(text: str) -> Position:
    """Parse size-prefixed FEN (``"FxR placement side - ep half full"``).

    Plain six-field FEN without the size prefix is read as 8x8.
    """
    fields = []
    for m in re.finditer(r"\S+", text):
        fields.append((m.group(), m.start()))
    if not fields:
        raise XfenError("empty xFEN", 0)
    files = ranks = 8
    if _SIZE_RE.fullmatch(fields[0][0]):
        m = _SIZE_RE.fullmatch(fields[0][0])
        files, ranks = int(m.group(1)), int(m.group(2))
        fields = fields[1:]
    if len(fields) != 6:
        raise XfenError(f"expected 6 fields after size, found {len(fields)}",
                        fields[-1][1] if fields else 0)
    (placement, pcol), (side, scol), (castle, ccol), (ep, ecol), (half, hcol), (full, fcol) = fields
    try:
        _check_size(files, ranks)
    except PositionError as exc:
        raise XfenError(str(exc), 0) from None

    pieces = _parse_placement(placement, pcol, files, ranks)
    if side not in ("w", "b"):
        raise XfenError(f"side to move must be 'w' or 'b', got {side!r}", scol)
    if castle != "-":
        raise XfenError("castling is not supported; castling field must be '-'", ccol)
    ep_square = None
    if ep != "-":
        try:
            ep_square = Square.parse(ep)
        except ValueError:
            raise XfenError(f"bad en-passant square {ep!r}", ecol) from None
    for value, col in ((half, hcol), (full, fcol)):
        if not value.isdigit():
            raise XfenError(f"move counter must be a decimal, got {value!r}", col)
    return Position.from_placement(
        files, ranks, pieces, Color(side), ep_square, int(half), int(full)
    )


def _parse_placement(text: str, col: int, files: int, ranks: int) -> dict[Square, Piece]:
    rows = text.split("/")
    if len(rows) != ranks:
        raise XfenError(f"expected {ranks} ranks, found {len(rows)}", col)
    pieces: dict[Square, Piece] = {}
    offset = col
    for i, row in enumerate(rows):
        rank = ranks - i
        file = 1
        for m in re.finditer(r"\d+|[KQRBNPkqrbnp]|.", row):
            tok, at = m.group(), offset + m.start()
            if tok.isdigit():
                if int(tok) == 0:
                    raise XfenError("empty run of zero squares", at)
                file += int(tok)
            elif tok in "KQRBNPkqrbnp":
                if file > files:
                    raise XfenError(f"rank {rank} has more than {files} files", at)
                pieces[Square(file, rank)] = Piece.from_symbol(tok)
                file += 1
            else:
                raise XfenError(f"unexpected character {tok!r}", at)
        if file != files + 1:
            raise XfenError(f"rank {rank} describes {file - 1} files, expected {files}", offset)
        offset += len(row) + 1
    return pieces


def serialize_xfen(p: Position) -> str:
    """Canonical xFEN, always size-prefixed."""
    F, R = p.files, p.ranks
    rows = []
    for rank in range(R, 0, -1):
        row, empty = [], 0
        for code in p.board[(rank - 1) * F: rank * F]:
            if code:
                if empty:
                    row.append(str(empty))
                    empty = 0
                row.append(Piece.from_code(code).symbol)
            else:
                empty += 1
        if empty:
            row.append(str(empty))
        rows.append("".join(row))
    ep = p.ep_target.name if p.ep_target else "-"
    return (f"{F}x{R} {'/'.join(rows)} {p.side_to_move.value} - {ep} "
            f"{p.halfmove_clock} {p.fullmove_number}")


# -- moves -----------------------------------------------------------------

def _to_move(p: Position, raw: tuple[int, int, int, int]) -> Move:
    frm, to, promo, flags = raw
    return Move(
        p.square(frm), p.square(to), Kind.from_code(p.board[frm] & 7),
        Kind.from_code(promo) if promo else None,
        bool(flags & K.CAPTURE), bool(flags & K.EN_PASSANT),
    )


def legal_moves(p: Position) -> list[Move]:
    """All legal moves for the side to move, in canonical order.

    Canonical order is ascending (from.file, from.rank, to.file, to.rank,
    promotion) with promotions ordered Q < R < B < N.
    """
    return [_to_move(p, raw) for raw in p.raw_moves()]


def _find_raw(p: Position, m: Move) -> tuple[int, int, int, int] | None:
    frm, to = p.index(m.from_sq), p.index(m.to_sq)
    promo = m.promotion.code if m.promotion else 0
    for raw in p.raw_moves():
        if raw[0] == frm and raw[1] == to and raw[2] == promo:
            return raw
    return None


def apply_raw(p: Position, raw: tuple[int, int, int, int]) -> Position:
    """Play a kernel move tuple known to be legal in ``p``."""
    frm, to, promo, flags = raw
    board = K.make_move(p.board, p.files, frm, to, promo, flags)
    ep = p.square((frm + to) // 2) if flags & K.DOUBLE else None
    pawn_move = (p.board[frm] & 7) == K.PAWN
    half = 0 if (pawn_move or flags & K.CAPTURE) else p.halfmove_clock + 1
    full = p.fullmove_number + (1 if p.side_to_move is Color.BLACK else 0)
    return Position(p.files, p.ranks, board, p.side_to_move.opposite, ep, half, full)


def apply_move(p: Position, m: Move) -> Position:
    raw = _find_raw(p, m)
    if raw is None:
        raise IllegalMoveError(f"{m.text} is not legal in {serialize_xfen(p)}")
    return apply_raw(p, raw)


def is_check(p: Position) -> bool:
    return K.in_check(p.board, p.files, p.ranks, p.side_to_move.code)


def is_checkmate(p: Position) -> bool:
    return is_check(p) and not p.raw_moves()


def is_stalemate(p: Position) -> bool:
    return not is_check(p) and not p.raw_moves()


def attacked_by(p: Position, s: Square, c: Color) -> bool:
    return K.is_attacked(p.board, p.files, p.ranks, p.index(s), c.code)


def perft(p: Position, depth: int) -> int:
    return K.perft(p.board, p.files, p.ranks, p.side_to_move.code, p.ep_index, depth)


def move_mark(p: Position, m: Move) -> str:
    """``'#'`` if ``m`` mates, ``'+'`` if it checks, else ``''``."""
    after = apply_move(p, m)
    if is_check(after):
        return "#" if not after.raw_moves() else "+"
    return ""


def move_text(p: Position, m: Move) -> str:
    return m.text + move_mark(p, m)


_MOVE_RE = re.compile(
    r"([KQRBNP])?([a-z][1-9][0-9]*)([-x])?([a-z][1-9][0-9]*)(?:=?([QRBNqrbn]))?[+#]*"
)


def parse_move(p: Position, text: str) -> Move:
    """Resolve long-algebraic move text (``Qa5-c3+``, ``Pf8xe7#``, ``c7c8n``)."""
    m = _MOVE_RE.fullmatch(text.strip())
    if not m:
        raise IllegalMoveError(f"cannot parse move text {text!r}")
    letter, frm, _, to, promo = m.groups()
    frm_sq, to_sq = Square.parse(frm), Square.parse(to)
    promo_kind = Kind(promo.upper()) if promo else None
    for mv in legal_moves(p):
        if mv.from_sq == frm_sq and mv.to_sq == to_sq and mv.promotion == promo_kind:
            if letter and Kind(letter) is not mv.piece:
                break
            return mv
    raise IllegalMoveError(f"{text} is not legal in {serialize_xfen(p)}")


# -- transforms ------------------------------------------------------------

def mirror(p: Position) -> Position:
    """Vertical mirror (rank r -> R+1-r) with colors swapped."""
    R = p.ranks
    placement = {
        Square(s.file, R + 1 - s.rank): Piece(pc.color.opposite, pc.kind)
        for s, pc in p.placement.items()
    }
    ep = Square(p.ep_target.file, R + 1 - p.ep_target.rank) if p.ep_target else None
    return Position.from_placement(
        p.files, R, placement, p.side_to_move.opposite, ep,
        p.halfmove_clock, p.fullmove_number, validate=False,
    )


def mirror_move(m: Move, ranks: int) -> Move:
    return Move(
        Square(m.from_sq.file, ranks + 1 - m.from_sq.rank),
        Square(m.to_sq.file, ranks + 1 - m.to_sq.rank),
        m.piece, m.promotion, m.is_capture, m.is_en_passant,
    )


def with_pieces(p: Position, extra: Mapping[Square, Piece] | Iterable[tuple[Square, Piece]],
                side_to_move: Color | None = None, validate: bool = True) -> Position:
    """Copy of ``p`` with pieces added (squares must be empty)."""
    placement = p.placement
    items = extra.items() if isinstance(extra, Mapping) else extra
    for s, pc in items:
        if s in placement:
            raise PositionError(f"square {s} already occupied")
        placement[s] = pc
    return Position.from_placement(
        p.files, p.ranks, placement,
        side_to_move if side_to_move is not None else p.side_to_move,
        None, 0, 1, validate=validate,
    )
