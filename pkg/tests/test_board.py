import random

import chess
import pytest
from hypothesis import given, settings, strategies as st

import naive_movegen as naive
from helpers import PAULY, START, random_position
from selfmate import (
    Color, IllegalMoveError, Kind, Piece, Position, PositionError, Square, XfenError,
    apply_move, attacked_by, is_check, is_checkmate, is_stalemate, legal_moves, mirror,
    parse_move, parse_xfen, perft, serialize_xfen, sq,
)
from selfmate import _pykernel
from selfmate.board import mirror_move

try:
    from selfmate import _ckernel
except ImportError:  # pragma: no cover - extension not built
    _ckernel = None


# -- xFEN ---------------------------------------------------------------------

@pytest.mark.parametrize("text", [
    PAULY,
    "8x8 1R4B1/5r2/5P1Q/p5r1/P7/KN6/1p1P1p1P/1k2b2R w - - 0 1",
    "4x4 k3/4/4/3K w - - 0 1",
    "26x4 k25/26/26/25K b - - 12 40",
    "5x64 k4/" + "5/" * 62 + "4K w - - 0 1",
    "12x12 k11/12/12/12/12/12/12/12/12/12/12/10K1 w - - 3 7",
])
def test_xfen_round_trip(text):
    assert serialize_xfen(parse_xfen(text)) == text


def test_plain_fen_is_8x8():
    p = parse_xfen("KB3N2/P1P1p1P1/5P1k/4P2p/7P/8/6B1/7b w - - 0 1")
    assert p.board_size == (8, 8)
    assert serialize_xfen(p) == PAULY


def test_random_round_trips():
    rng = random.Random(1234)
    for _ in range(1000):
        p = random_position(rng)
        q = parse_xfen(serialize_xfen(p))
        assert q == p
        assert q.placement == p.placement


@pytest.mark.parametrize("text, marker", [
    ("bad", "bad"),
    ("8x8 KB3N2/P1P1p1P1/5P1k/4P2p/7P/8/6B1/7b w KQkq - 0 1", "KQkq"),
    ("8x8 KB3N2/P1P1p1P1/5P1k/4P2p/7P/8/6B1 w - - 0 1", "KB3N2"),
    ("8x8 KB3N2/P1P1p1P1/5P1k/4P2X/7P/8/6B1/7b w - - 0 1", "X"),
    ("8x8 KB3N2/P1P1p1P1/5P1k/4P2p/7P/8/6B1/7b x - - 0 1", " x ",),
    ("8x8 KB3N2/P1P1p1P1/5P1k/4P2p/7P/8/6B1/7b w - - z 1", "z"),
    ("3x8 k2/3/3/3/3/3/3/2K w - - 0 1", "3x8"),
])
def test_xfen_errors_report_column(text, marker):
    with pytest.raises(XfenError) as err:
        parse_xfen(text)
    column = text.index(marker) + (1 if marker.startswith(" ") else 0)
    assert err.value.column == column


def test_wrong_rank_width():
    with pytest.raises(XfenError, match="describes 9 files"):
        parse_xfen("8x8 KB3N3/P1P1p1P1/5P1k/4P2p/7P/8/6B1/7b w - - 0 1")


@pytest.mark.parametrize("text, message", [
    ("8x8 KK6/8/8/8/8/8/8/7k w - - 0 1", "white must have exactly one king, found 2"),
    ("8x8 kk6/8/8/8/8/8/8/7K w - - 0 1", "black must have exactly one king, found 2"),
    ("8x8 8/8/8/8/8/8/8/7K w - - 0 1", "black must have exactly one king, found 0"),
    ("8x8 k6R/8/8/8/8/8/8/7K w - - 0 1", "side not to move"),
    ("8x8 k7/8/8/8/8/8/8/7K w - e6 0 1", "en-passant"),
])
def test_invalid_positions(text, message):
    with pytest.raises(PositionError, match=message):
        parse_xfen(text)


def test_board_size_limits():
    with pytest.raises(PositionError):
        Position.from_placement(27, 8, {})
    with pytest.raises(PositionError):
        Position.from_placement(8, 65, {})


# -- attacks and special moves ------------------------------------------------

@pytest.mark.parametrize("square, color, expected", [
    ("d6", Color.BLACK, True),   # pawn e7
    ("f6", Color.BLACK, True),
    ("g2", Color.BLACK, True),   # bishop h1
    ("f3", Color.BLACK, False),  # shielded by Bg2
    ("a1", Color.BLACK, False),
    ("c8", Color.WHITE, False),
    ("d6", Color.WHITE, True),   # pawn e5
    ("h1", Color.WHITE, True),
    ("h8", Color.WHITE, True),   # pawn g7
    ("a5", Color.WHITE, False),
])
def test_attacked_by(pauly, square, color, expected):
    assert attacked_by(pauly, sq(square), color) is expected


def test_en_passant_capture_and_pin():
    p = parse_xfen("8x8 4k3/8/8/3pP3/8/8/8/4K3 w - d6 0 1")
    ep = [m for m in legal_moves(p) if m.is_en_passant]
    assert [m.text for m in ep] == ["Pe5xd6"]
    after = apply_move(p, ep[0])
    assert after.piece_at(sq("d5")) is None
    assert after.piece_at(sq("d6")) == Piece(Color.WHITE, Kind.PAWN)
    # capturing en passant would expose the king along the rank
    pinned = parse_xfen("8x8 4k3/8/8/K2pP2r/8/8/8/8 w - d6 0 1")
    assert not [m for m in legal_moves(pinned) if m.is_en_passant]


def test_double_step_sets_ep_only_when_doubled():
    p = parse_xfen("8x8 4k3/3p4/8/4P3/8/8/8/4K3 b - - 0 1")
    double = apply_move(p, parse_move(p, "d7d5"))
    assert double.ep_target == sq("d6")
    single = apply_move(p, parse_move(p, "d7d6"))
    assert single.ep_target is None


def test_no_double_step_onto_promotion_rank():
    p = parse_xfen("4x4 k3/4/1P2/3K w - - 0 1")
    targets = {m.to_sq.name for m in legal_moves(p) if m.piece is Kind.PAWN}
    assert targets == {"b3"}
    p = parse_xfen("4x4 k3/1p2/4/3K b - - 0 1")
    assert {m.text for m in legal_moves(p) if m.piece is Kind.PAWN} == {"Pb3-b2"}


def test_promotions_in_order(pauly):
    texts = [m.text for m in legal_moves(pauly) if m.from_sq == sq("c7")]
    assert texts == ["Pc7-c8=Q", "Pc7-c8=R", "Pc7-c8=B", "Pc7-c8=N"]


def test_inert_pawn_on_promotion_rank():
    p = Position.from_placement(8, 8, {
        sq("a1"): Piece(Color.WHITE, Kind.KING), sq("h8"): Piece(Color.BLACK, Kind.KING),
        sq("d1"): Piece(Color.BLACK, Kind.PAWN),
    }, Color.BLACK)
    assert all(m.from_sq != sq("d1") for m in legal_moves(p))
    assert not attacked_by(p, sq("c2"), Color.BLACK)
    assert not attacked_by(p, sq("e2"), Color.BLACK)


def test_checkmate_and_stalemate():
    mate = parse_xfen("8x8 7k/6Q1/6K1/8/8/8/8/8 b - - 0 1")
    assert is_check(mate) and is_checkmate(mate) and not is_stalemate(mate)
    stale = parse_xfen("8x8 7k/8/6QK/8/8/8/8/8 b - - 0 1")
    assert is_stalemate(stale) and not is_checkmate(stale)


@pytest.mark.parametrize("text, expected", [
    ("Pc7-c8=N", "Pc7-c8=N"),
    ("c7c8n", "Pc7-c8=N"),
    ("Bg2xh1", "Bg2xh1"),
    ("Ka8-b7+", "Ka8-b7"),
])
def test_parse_move(pauly, text, expected):
    assert parse_move(pauly, text).text == expected


@pytest.mark.parametrize("text", ["Qa1-a2", "Nc7-c8", "zz", "Pc7-c8"])
def test_parse_move_rejects(pauly, text):
    with pytest.raises(IllegalMoveError):
        parse_move(pauly, text)


# -- perft oracles ------------------------------------------------------------

def _chess_perft(board, depth):
    if depth == 0:
        return 1
    total = 0
    for mv in list(board.legal_moves):
        board.push(mv)
        total += _chess_perft(board, depth - 1)
        board.pop()
    return total


@pytest.mark.parametrize("depth", [1, 2, 3])
def test_start_perft_matches_python_chess(depth):
    assert perft(parse_xfen(START), depth) == _chess_perft(chess.Board(), depth)


def test_start_perft_depth_4():
    # standard published count
    assert perft(parse_xfen(START), 4) == 197281


def _uci(m):
    promo = m.promotion.value.lower() if m.promotion else ""
    return f"{m.from_sq}{m.to_sq}{promo}"


def test_legal_moves_match_python_chess_on_random_games():
    rng = random.Random(7)
    checked = 0
    for _ in range(60):
        board = chess.Board()
        board.castling_rights = 0
        for _ in range(rng.randint(0, 80)):
            moves = list(board.legal_moves)
            if not moves:
                break
            board.push(rng.choice(moves))
        board.castling_rights = 0
        ep = board.ep_square
        fen = board.fen(en_passant="fen")
        if ep is not None and not any(board.is_en_passant(m) for m in board.legal_moves):
            fen = board.fen(en_passant="legal")
        try:
            p = parse_xfen(fen)
        except PositionError:
            continue  # ep square not behind a double step in our stricter sense
        ours = sorted(_uci(m) for m in legal_moves(p))
        theirs = sorted(m.uci() for m in board.legal_moves)
        assert ours == theirs, fen
        assert is_check(p) == board.is_check()
        checked += 1
    assert checked >= 50


def test_perft_matches_naive_generator_on_random_boards():
    rng = random.Random(99)
    for _ in range(40):
        p = random_position(rng, n_extra=rng.randint(2, 8))
        args = naive.from_xfen(serialize_xfen(p))
        for depth in (1, 2):
            assert perft(p, depth) == naive.perft(*args, depth), serialize_xfen(p)


# -- backend parity -----------------------------------------------------------

@st.composite
def positions(draw):
    seed = draw(st.integers(0, 2**32 - 1))
    return random_position(random.Random(seed))


@pytest.mark.skipif(_ckernel is None, reason="compiled kernel not built")
@settings(max_examples=300, deadline=None)
@given(positions())
def test_kernels_agree(p):
    args = (p.board, p.files, p.ranks, p.side_to_move.code, p.ep_index)
    assert _ckernel.legal_moves(*args) == _pykernel.legal_moves(*args)
    assert _ckernel.has_legal_move(*args) == _pykernel.has_legal_move(*args)
    assert _ckernel.mating_moves(*args) == _pykernel.mating_moves(*args)
    assert _ckernel.perft(*args, 2) == _pykernel.perft(*args, 2)
    for c in (0, 8):
        assert (_ckernel.in_check(p.board, p.files, p.ranks, c)
                == _pykernel.in_check(p.board, p.files, p.ranks, c))
    for i in range(0, p.files * p.ranks, 3):
        assert (_ckernel.is_attacked(p.board, p.files, p.ranks, i, 8)
                == _pykernel.is_attacked(p.board, p.files, p.ranks, i, 8))


# -- symmetry -----------------------------------------------------------------

@settings(max_examples=200, deadline=None)
@given(positions())
def test_mirror_maps_legal_moves(p):
    q = mirror(p)
    expected = sorted(mirror_move(m, p.ranks).text for m in legal_moves(p))
    assert sorted(m.text for m in legal_moves(q)) == expected
    assert mirror(q) == p
    assert is_check(q) == is_check(p)
