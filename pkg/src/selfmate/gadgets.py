"""Terminal gadgets: construction, translation, mirroring and verification.

Placements are transcribed in ``setpieces`` notation (upper case White,
lower case Black, pawns as ``P``/``p``) relative to an a1 anchor.  Gadgets
that lack one king get a *harness*: the missing king boxed into a corner of
the base frame by three pawns so that it has no moves and attacks nothing
inside the gadget.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from enum import Enum

from .board import (
    Color, Kind, Move, Piece, Position, PositionError, Square,
    apply_move, attacked_by, is_checkmate, legal_moves, mirror_move, serialize_xfen,
)
from .stipulation import (
    FORCING_SIDE_MATES, Goal, SearchOptions, Stipulation, playable_moves, solve,
)
from .unbounded import UnboundedResult, solve_unbounded


class GadgetKind(str, Enum):
    CHECKMATE_WHITE = "checkmate_white"
    CHECKMATE_BLACK = "checkmate_black"
    REFLEXMATE_WHITE = "reflexmate_white"
    REFLEXMATE_BLACK = "reflexmate_black"
    SELFMATE = "selfmate"
    SEMI_REFLEXMATE = "semi_reflexmate"


class GadgetError(ValueError):
    pass


def _pieces(text: str) -> dict[Square, Piece]:
    out = {}
    for tok in text.replace("\n", " ").replace(",", " ").split():
        out[Square.parse(tok[1:])] = Piece.from_symbol(tok[0])
    return out


def _mv(text: str) -> Move:
    """``Qa3-d6`` / ``Pf8xe7`` style script move."""
    capture = "x" in text
    a, b = text[1:].split("x" if capture else "-")
    return Move(Square.parse(a), Square.parse(b), Kind(text[0]), None, capture)


@dataclass(frozen=True)
class Entry:
    """A queen entering the gadget and the forced line that follows.

    ``goal`` is the stipulation kind under which the reply is judged;
    ``attacker``/``target`` name the piece that delivers the final mate and
    the king it attacks.  ``derived`` marks lines obtained by symmetry.
    """

    color: Color
    square: Square
    line: tuple[Move, ...]
    goal: Goal
    attacker: Square
    target: Square
    derived: bool = False


@dataclass(frozen=True)
class _Layout:
    size: tuple[int, int]
    pieces: dict
    harness: dict
    entries: tuple[Entry, ...]
    exceptions: tuple[Square, ...] = ()


_LAYOUTS: dict[GadgetKind, _Layout] = {
    GadgetKind.CHECKMATE_WHITE: _Layout(
        (5, 10),
        _pieces("""kd9,
            Pa1,Pb2,Pc3,Pd4,Pe5,Pe6,Pe7, Pa4,Pb5,Pc6,Pc7,
            pa2,pb3,pc4,pd5, pa5,pb6, pc8,pc9,pc10,pd10,pe8,pe9,pe10"""),
        _pieces("Ke1,Pd1,Pd2,pd3"),
        (Entry(Color.WHITE, Square.parse("a3"), (_mv("Qa3-d6"),), Goal.DIRECT,
               Square.parse("d6"), Square.parse("d9")),),
    ),
    GadgetKind.REFLEXMATE_WHITE: _Layout(
        (8, 12),
        _pieces("""Ke9,
            Pa1,Pb2,Pc3,Pd4,Pa4,Pb5,Pc6,Pd8,
            pa2,pb3,pc4,pd5,pa5,pb6,pc7,pd9,
            pe10,pe11,pe12,pf6,pf7,pf8,pf9,
            pg8,pg9,pg10,pg11,pg12,ph6,ph7,ph8,
            Pf5,Ph5, bf11,bg7"""),
        _pieces("ka12,pb12,pb11,Pb10"),
        (Entry(Color.WHITE, Square.parse("a3"), (_mv("Qa3-e7"), _mv("Pf8xe7")), Goal.REFLEX,
               Square.parse("g7"), Square.parse("e9")),),
    ),
    GadgetKind.SELFMATE: _Layout(
        (15, 16),
        _pieces("""Kl5,kl12,
            Pa3,Pb2,Pc1,Pd2,Pa6,Pb5,Pc4,
            pa4,pb3,pc2,pd3,pa7,pb6,pc5,
            Pa10,Pb11,Pc12,Pa13,Pb14,Pc15,Pd14,
            pa11,pb12,pc13,pa14,pb15,pc16,pd15,
            pl6,pl7,pl8,pn5,pn6,pn7,pn8,
            pm2,pm3,pm5,po2,po3,po4,
            Pm1,Po1, bm7,bn3, rm4,rn4,
            Pl9,Pl10,Pl11,Pn9,Pn10,Pn11,Pn12,
            Pm12,Pm14,Pm15,Po13,Po14,Po15,
            pm16,po16, Bm10,Bn14, Rm13,Rn13"""),
        {},
        (
            Entry(Color.WHITE, Square.parse("a5"), (_mv("Qa5-c3"), _mv("Rm4-d4")), Goal.SELF,
                  Square.parse("n3"), Square.parse("l5")),
            Entry(Color.BLACK, Square.parse("a12"), (_mv("Qa12-c14"), _mv("Rm13-d13")),
                  Goal.SELF, Square.parse("n14"), Square.parse("l12"), derived=True),
        ),
        (Square.parse("m4"), Square.parse("m13")),
    ),
    GadgetKind.SEMI_REFLEXMATE: _Layout(
        (15, 18),
        _pieces("""Kl7,kl14,
            Pa12,Pb13,Pc14,Pa15,Pb16,Pc17,Pd16,
            pa13,pb14,pc15,pa16,pb17,pc18,pd17,
            pl8,pl9,pl10,pn7,pn8,pn9,pn10,
            pm4,pm5,pm7,po4,po5,po6,
            Pm3,Po3, bm9,bn5, pm6,pn6,
            Pl11,Pl12,Pl13,Pn11,Pn12,Pn13,Pn14,
            Pm14,Pm16,Pm17,Po15,Po16,Po17,
            pm18,po18, Bm12,Bn16, Rm15,Rn15,
            Pg1,Ph2,Pi3,Pj4,Pk6,Pj1,Pk2,
            pf1,pg2,ph3,pi4,pj5,pi1,pj2,pk3,pk7"""),
        {},
        (
            Entry(Color.WHITE, Square.parse("h1"), (_mv("Qh1-l5"), _mv("Pm6xl5")),
                  Goal.SEMI_REFLEX, Square.parse("n5"), Square.parse("l7")),
            Entry(Color.BLACK, Square.parse("a14"), (_mv("Qa14-c16"), _mv("Rm15-d15")),
                  Goal.SEMI_REFLEX, Square.parse("n16"), Square.parse("l14")),
        ),
        (Square.parse("m15"),),
    ),
}

_MIRRORED = {
    GadgetKind.CHECKMATE_BLACK: GadgetKind.CHECKMATE_WHITE,
    GadgetKind.REFLEXMATE_BLACK: GadgetKind.REFLEXMATE_WHITE,
}


def _flip(pieces: dict, ranks: int) -> dict:
    return {Square(s.file, ranks + 1 - s.rank): Piece(p.color.opposite, p.kind)
            for s, p in pieces.items()}


def _flip_sq(s: Square, ranks: int) -> Square:
    return Square(s.file, ranks + 1 - s.rank)


def _layout(kind: GadgetKind) -> _Layout:
    if kind not in _MIRRORED:
        return _LAYOUTS[kind]
    base = _LAYOUTS[_MIRRORED[kind]]
    R = base.size[1]
    entries = tuple(
        Entry(e.color.opposite, _flip_sq(e.square, R),
              tuple(mirror_move(m, R) for m in e.line), e.goal,
              _flip_sq(e.attacker, R), _flip_sq(e.target, R), e.derived)
        for e in base.entries
    )
    return _Layout(base.size, _flip(base.pieces, R), _flip(base.harness, R), entries,
                   tuple(_flip_sq(s, R) for s in base.exceptions))


@dataclass(frozen=True)
class GadgetSpec:
    kind: GadgetKind
    anchor: Square
    board_size: tuple[int, int]
    pieces: dict[Square, Piece]
    footprint: frozenset[Square]
    entries: tuple[Entry, ...]
    harness: dict[Square, Piece] = field(default_factory=dict)
    exceptions: tuple[Square, ...] = ()

    @property
    def entry_squares(self) -> list[tuple[Color, Square]]:
        return [(e.color, e.square) for e in self.entries]

    @property
    def scripted_line(self) -> list[Move]:
        return list(self.entries[0].line)

    def position(self, side_to_move: Color = Color.WHITE,
                 extra: dict[Square, Piece] | None = None, validate: bool = True) -> Position:
        """Gadget plus harness (and ``extra`` pieces) on its own board."""
        placement = dict(self.pieces)
        for s, p in list(self.harness.items()) + list((extra or {}).items()):
            if s in placement:
                raise GadgetError(f"square {s} already occupied")
            placement[s] = p
        F, R = self.board_size
        return Position.from_placement(F, R, placement, side_to_move, validate=validate)

    def entry_position(self, entry: Entry) -> Position:
        """Harnessed gadget with the entering queen placed, queen's side to move."""
        return self.position(entry.color, {entry.square: Piece(entry.color, Kind.QUEEN)})

    def to_dict(self) -> dict:
        F, R = self.board_size
        return {
            "kind": self.kind.value,
            "anchor": self.anchor.name,
            "board": f"{F}x{R}",
            "pieces": [
                {"square": s.name, "color": p.color.name.lower(), "kind": p.kind.name.lower()}
                for s, p in sorted(self.pieces.items())
            ],
            "entries": [{"color": e.color.name.lower(), "square": e.square.name}
                        for e in self.entries],
            "line": [m.text for m in self.scripted_line],
        }

    def to_json(self, indent: int | None = 2) -> str:
        return json.dumps(self.to_dict(), indent=indent)


def build_gadget(kind: GadgetKind | str, anchor: Square | None = None,
                 board_size: tuple[int, int] | None = None) -> GadgetSpec:
    """Place the gadget with its a1 corner on ``anchor``.

    ``board_size`` defaults to the base frame shifted by the anchor.
    """
    kind = GadgetKind(kind)
    anchor = anchor or Square(1, 1)
    base = _layout(kind)
    df, dr = anchor.file - 1, anchor.rank - 1
    FW, RW = base.size
    F, R = board_size or (FW + df, RW + dr)
    if df < 0 or dr < 0 or FW + df > F or RW + dr > R:
        raise GadgetError(f"{kind.value} footprint {FW}x{RW} at {anchor} overflows {F}x{R} board")

    def move(s: Square) -> Square:
        return s.shifted(df, dr)

    def shift_move(m: Move) -> Move:
        return Move(move(m.from_sq), move(m.to_sq), m.piece, m.promotion,
                    m.is_capture, m.is_en_passant)

    entries = tuple(
        Entry(e.color, move(e.square), tuple(shift_move(m) for m in e.line), e.goal,
              move(e.attacker), move(e.target), e.derived)
        for e in base.entries
    )
    footprint = frozenset(Square(f + df, r + dr)
                          for f in range(1, FW + 1) for r in range(1, RW + 1))
    pieces = {move(s): p for s, p in base.pieces.items()}
    harness = {move(s): p for s, p in base.harness.items()}
    # pawns parked on their promotion rank only stay inert at the board edge;
    # once lifted off it, prop them up with a column of blocked pawns
    for s, p in base.pieces.items():
        if p.kind is not Kind.PAWN:
            continue
        if p.color is Color.BLACK and s.rank == 1:
            props = range(1, dr + 1)
        elif p.color is Color.WHITE and s.rank == RW:
            props = range(RW + dr + 1, R + 1)
        else:
            continue
        for r in props:
            t = Square(s.file + df, r)
            if t not in pieces and t not in harness:
                harness[t] = p
    return GadgetSpec(
        kind, anchor, (F, R), pieces, footprint, entries, harness,
        tuple(move(s) for s in base.exceptions),
    )


def merge_into(p: Position, g: GadgetSpec) -> Position:
    """Add the gadget's pieces (not its harness) to ``p``."""
    if (p.files, p.ranks) != g.board_size and any(not p.contains(s) for s in g.footprint):
        raise GadgetError(f"gadget footprint does not fit {p.files}x{p.ranks} board")
    placement = p.placement
    for s, pc in g.pieces.items():
        if not p.contains(s):
            raise GadgetError(f"gadget square {s} off board")
        if s in placement:
            raise GadgetError(f"collision on {s}")
        placement[s] = pc
    try:
        return Position.from_placement(p.files, p.ranks, placement, p.side_to_move)
    except PositionError as exc:
        raise GadgetError(f"merged position invalid: {exc}") from None


# -- verification -------------------------------------------------------------

@dataclass
class Check:
    name: str
    passed: bool
    witness: list[str] = field(default_factory=list)
    detail: str = ""


@dataclass
class VerificationReport:
    kind: GadgetKind
    anchor: Square
    checks: list[Check]
    elapsed_ms: float = 0.0

    @property
    def all_pass(self) -> bool:
        return all(c.passed for c in self.checks)

    def outcome(self) -> list[tuple[str, bool]]:
        """Check names and verdicts, independent of anchor-specific witnesses."""
        return [(c.name, c.passed) for c in self.checks]

    def to_dict(self) -> dict:
        return {
            "kind": self.kind.value,
            "anchor": self.anchor.name,
            "all_pass": self.all_pass,
            "checks": [{"name": c.name, "pass": c.passed, "witness": c.witness,
                        "detail": c.detail} for c in self.checks],
            "elapsed_ms": round(self.elapsed_ms, 3),
        }

    def to_text(self) -> str:
        lines = [f"gadget {self.kind.value} @ {self.anchor}"]
        for c in self.checks:
            w = f" [{', '.join(c.witness)}]" if c.witness else ""
            d = f" {c.detail}" if c.detail else ""
            lines.append(f"  {'PASS' if c.passed else 'FAIL'}  {c.name}{d}{w}")
        lines.append(f"all_pass={self.all_pass}")
        return "\n".join(lines)


def _stip(goal: Goal, n: int, forcing: Color) -> Stipulation:
    return Stipulation(goal, n, forcing)


def _clear_line(p: Position, a: Square, b: Square) -> bool:
    df, dr = b.file - a.file, b.rank - a.rank
    steps = max(abs(df), abs(dr))
    if steps == 0 or (df and dr and abs(df) != abs(dr)) :
        return False
    sf, sr = (df > 0) - (df < 0), (dr > 0) - (dr < 0)
    return all(p.piece_at(Square(a.file + sf * i, a.rank + sr * i)) is None
               for i in range(1, steps))


def _attacks_along(p: Position, attacker: Square, target: Square) -> bool:
    """``attacker`` is a line piece with a clear path to ``target``."""
    pc = p.piece_at(attacker)
    if pc is None or pc.kind not in (Kind.BISHOP, Kind.ROOK, Kind.QUEEN):
        return False
    diagonal = abs(attacker.file - target.file) == abs(attacker.rank - target.rank)
    if pc.kind is Kind.BISHOP and not diagonal:
        return False
    if pc.kind is Kind.ROOK and diagonal:
        return False
    return _clear_line(p, attacker, target)


def _check_immobility(g: GadgetSpec) -> Check:
    gadget_squares = set(g.pieces)
    mobile, sides = [], []
    for side in Color:
        try:
            pos = g.position(side)
        except PositionError as exc:
            return Check("immobility", False, [], f"harness invalid with {side.name} to move: {exc}")
        for m in legal_moves(pos):
            if m.from_sq in gadget_squares and m.from_sq not in g.exceptions:
                mobile.append(m.text)
        sides.append(f"{side.name.lower()}={len(legal_moves(pos))}")
    exc = ",".join(s.name for s in g.exceptions) or "none"
    return Check("immobility", not mobile, mobile,
                 f"mobile gadget pieces outside exceptions ({exc}): {len(mobile)}; "
                 f"legal move counts {' '.join(sides)}")


def _check_exceptions_mate(g: GadgetSpec) -> Check:
    if not g.exceptions:
        return Check("exception-moves-mate", True, [], "no exception pieces")
    bad, seen = [], []
    for s in g.exceptions:
        pc = g.pieces[s]
        pos = g.position(pc.color)
        moves = [m for m in legal_moves(pos) if m.from_sq == s]
        if not moves:
            bad.append(f"{s}:no-moves")
        for m in moves:
            seen.append(m.text)
            if not is_checkmate(apply_move(pos, m)):
                bad.append(m.text)
    return Check("exception-moves-mate", not bad, bad or seen,
                 f"{len(seen)} exception moves, all mate" if not bad else "non-mating exception moves")


def _check_entry(g: GadgetSpec, e: Entry) -> tuple[Check, Check]:
    # names stay anchor-free; the squares show up in the witnesses
    label = f"{e.color.name.lower()}-entry" + (" (derived)" if e.derived else "")
    pos = g.entry_position(e)
    first = e.line[0]
    if first not in legal_moves(pos):
        return (Check(f"entry line {label}", False, [first.text], "entry move illegal"),
                Check(f"mate confirmation {label}", False))
    after = apply_move(pos, first)
    stip = _stip(e.goal, 1, e.color if e.goal is not Goal.SEMI_REFLEX else Color.WHITE)
    replies = playable_moves(after, stip)
    want = set(e.line[1:])
    got = set(replies)
    entry_ok = got == want
    entry = Check(f"entry line {label}", entry_ok, [m.text for m in replies],
                  f"after {first.text} the reply set under {e.goal.value} is "
                  f"{'exactly the scripted one' if entry_ok else 'not the scripted one'}")
    final = after
    for m in e.line[1:]:
        if m not in legal_moves(final):
            return entry, Check(f"mate confirmation {label}", False, [m.text], "scripted reply illegal")
        final = apply_move(final, m)
    mated_side = final.side_to_move
    mate_ok = (is_checkmate(final)
               and _attacks_along(final, e.attacker, e.target)
               and final.piece_at(e.target) == Piece(mated_side, Kind.KING)
               and attacked_by(final, e.target, mated_side.opposite))
    mate = Check(f"mate confirmation {label}", mate_ok,
                 [m.text for m in e.line],
                 f"{final.piece_at(e.attacker).kind.name.lower() if final.piece_at(e.attacker) else 'nothing'} "
                 f"on {e.attacker} attacks {mated_side.name.lower()} king {e.target}")
    return entry, mate


def _check_solver(g: GadgetSpec, e: Entry) -> Check:
    """Stipulation-level consequence of the entry, checked with the solvers."""
    pos = g.entry_position(e)
    label = f"solver {e.color.name.lower()}-entry"
    if e.goal is Goal.DIRECT:
        stip = _stip(Goal.DIRECT, 1, e.color)
    elif e.goal is Goal.SEMI_REFLEX and e.color is Color.BLACK:
        res: UnboundedResult = solve_unbounded(pos, Goal.SEMI_REFLEX, Color.WHITE)
        ok = not res.forcing_side_wins and res.forced_side_wins and res.decided
        return Check(label, ok, [], f"unbounded semi-reflex: white loses ({res.summary()})")
    else:
        stip = _stip(e.goal, 1, e.color)
    sol = solve(pos, stip, SearchOptions(refutations=False))
    ok = e.line[0] in sol.keys
    return Check(label, ok, sol.key_texts, f"{stip} keys include {e.line[0].text}")


def _check_reflex_forced(g: GadgetSpec) -> list[Check]:
    checks = []
    if g.kind is GadgetKind.SELFMATE:
        # rooks are reflex-forced: the gadget cannot stand in for a reflexmate one
        for side in Color:
            pos = g.position(side)
            stip = Stipulation(Goal.REFLEX, 1, side)
            playable = playable_moves(pos, stip)
            forced = bool(playable) and all(is_checkmate(apply_move(pos, m)) for m in playable)
            checks.append(Check(f"reflex-forced rooks ({side.name.lower()} to move)", forced,
                                [m.text for m in playable],
                                "every reflex-playable move mates"))
        pos = g.position(Color.WHITE)
        sol = solve(pos, Stipulation(Goal.REFLEX, 1, Color.WHITE))
        fails = not sol.keys and all(r.reason == FORCING_SIDE_MATES for r in sol.refutations.values())
        checks.append(Check("reflex kind fails immediately", fails, [],
                            "all White moves mate and lose under r#1"))
    if g.kind is GadgetKind.SEMI_REFLEXMATE:
        pos = g.position(Color.WHITE)
        stip = Stipulation(Goal.SEMI_REFLEX, 1, Color.WHITE)
        legal = legal_moves(pos)
        playable = playable_moves(pos, stip)
        sol = solve(pos, stip)
        ok = (playable == legal and bool(legal)
              and all(is_checkmate(apply_move(pos, m)) for m in legal)
              and not sol.keys
              and all(r.reason == FORCING_SIDE_MATES for r in sol.refutations.values()))
        checks.append(Check("white rook moves legal, unforced, losing", ok,
                            [m.text for m in legal],
                            "White obligation absent; each m15 move mates and loses"))
    return checks


def verify_gadget(kind: GadgetKind | str, anchor: Square | None = None,
                  board_size: tuple[int, int] | None = None) -> VerificationReport:
    """Run the full check battery for one gadget kind."""
    import time

    start = time.perf_counter()
    g = build_gadget(kind, anchor, board_size)
    checks = [_check_immobility(g), _check_exceptions_mate(g)]
    for e in g.entries:
        checks.extend(_check_entry(g, e))
    for e in g.entries:
        checks.append(_check_solver(g, e))
    checks.extend(_check_reflex_forced(g))
    return VerificationReport(g.kind, g.anchor, checks, (time.perf_counter() - start) * 1000)


def harness_xfen(g: GadgetSpec, side_to_move: Color = Color.WHITE) -> str:
    return serialize_xfen(g.position(side_to_move))
