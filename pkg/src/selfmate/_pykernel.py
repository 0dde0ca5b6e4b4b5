"""Pure-Python move generation kernel.

Boards are ``bytes`` of length ``F * R`` indexed ``rank0 * F + file0``.
A square holds 0 (empty) or ``color | kind`` with ``color`` in {0, 8} and
``kind`` in 1..6 (P N B R Q K).  This module and ``_ckernel.pyx`` expose the
same functions and must return identical results.
"""

from __future__ import annotations

from functools import lru_cache

WHITE, BLACK = 0, 8
PAWN, KNIGHT, BISHOP, ROOK, QUEEN, KING = 1, 2, 3, 4, 5, 6
CAPTURE, EN_PASSANT, DOUBLE = 1, 2, 4

# sort rank of a promotion kind: none < Q < R < B < N
PROMO_ORDER = (0, 0, 4, 3, 2, 1, 0)
PROMOTIONS = (QUEEN, ROOK, BISHOP, KNIGHT)

_KNIGHT_STEPS = ((1, 2), (2, 1), (2, -1), (1, -2), (-1, -2), (-2, -1), (-2, 1), (-1, 2))
_KING_STEPS = ((1, 0), (1, 1), (0, 1), (-1, 1), (-1, 0), (-1, -1), (0, -1), (1, -1))
_ORTHO = ((1, 0), (-1, 0), (0, 1), (0, -1))
_DIAG = ((1, 1), (1, -1), (-1, 1), (-1, -1))


class _Geometry:
    __slots__ = ("knight", "king", "ortho", "diag")

    def __init__(self, F: int, R: int) -> None:
        def steps(sq, deltas):
            f, r = sq % F, sq // F
            return tuple(
                (r + dr) * F + f + df
                for df, dr in deltas
                if 0 <= f + df < F and 0 <= r + dr < R
            )

        def rays(sq, dirs):
            f, r = sq % F, sq // F
            out = []
            for df, dr in dirs:
                ray = []
                nf, nr = f + df, r + dr
                while 0 <= nf < F and 0 <= nr < R:
                    ray.append(nr * F + nf)
                    nf += df
                    nr += dr
                if ray:
                    out.append(tuple(ray))
            return tuple(out)

        n = F * R
        self.knight = tuple(steps(s, _KNIGHT_STEPS) for s in range(n))
        self.king = tuple(steps(s, _KING_STEPS) for s in range(n))
        self.ortho = tuple(rays(s, _ORTHO) for s in range(n))
        self.diag = tuple(rays(s, _DIAG) for s in range(n))


@lru_cache(maxsize=32)
def _geometry(F: int, R: int) -> _Geometry:
    return _Geometry(F, R)


def _attacked(board, F: int, R: int, sq: int, by: int, geo: _Geometry) -> bool:
    f, r = sq % F, sq // F
    pawn = by | PAWN
    if by == WHITE:
        if r > 0:
            if f > 0 and board[sq - F - 1] == pawn:
                return True
            if f < F - 1 and board[sq - F + 1] == pawn:
                return True
    elif r < R - 1:
        if f > 0 and board[sq + F - 1] == pawn:
            return True
        if f < F - 1 and board[sq + F + 1] == pawn:
            return True
    knight = by | KNIGHT
    for t in geo.knight[sq]:
        if board[t] == knight:
            return True
    king = by | KING
    for t in geo.king[sq]:
        if board[t] == king:
            return True
    rook, bishop, queen = by | ROOK, by | BISHOP, by | QUEEN
    for ray in geo.ortho[sq]:
        for t in ray:
            p = board[t]
            if p:
                if p == rook or p == queen:
                    return True
                break
    for ray in geo.diag[sq]:
        for t in ray:
            p = board[t]
            if p:
                if p == bishop or p == queen:
                    return True
                break
    return False


def _pseudo(board, F: int, R: int, color: int, ep: int, geo: _Geometry):
    them = color ^ 8
    n = F * R
    for sq in range(n):
        p = board[sq]
        if not p or (p & 8) != color:
            continue
        kind = p & 7
        if kind == PAWN:
            f, r = sq % F, sq // F
            if color == WHITE:
                step, last, start = F, R - 1, 1
            else:
                step, last, start = -F, 0, R - 2
            if r == last:
                continue  # inert pawn on its promotion rank
            t = sq + step
            promo = t // F == last
            if not board[t]:
                if promo:
                    for k in PROMOTIONS:
                        yield sq, t, k, 0
                else:
                    yield sq, t, 0, 0
                    # a double step never lands on the promotion rank
                    if r == start and (t + step) // F != last:
                        t2 = t + step
                        if not board[t2]:
                            yield sq, t2, 0, DOUBLE
            for df in (-1, 1):
                if 0 <= f + df < F:
                    t = sq + step + df
                    q = board[t]
                    if q:
                        if (q & 8) == them and (q & 7) != KING:
                            if promo:
                                for k in PROMOTIONS:
                                    yield sq, t, k, CAPTURE
                            else:
                                yield sq, t, 0, CAPTURE
                    elif t == ep:
                        yield sq, t, 0, CAPTURE | EN_PASSANT
        elif kind == KNIGHT or kind == KING:
            for t in (geo.knight[sq] if kind == KNIGHT else geo.king[sq]):
                q = board[t]
                if not q:
                    yield sq, t, 0, 0
                elif (q & 8) == them and (q & 7) != KING:
                    yield sq, t, 0, CAPTURE
        else:
            if kind == ROOK:
                rays = geo.ortho[sq]
            elif kind == BISHOP:
                rays = geo.diag[sq]
            else:
                rays = geo.ortho[sq] + geo.diag[sq]
            for ray in rays:
                for t in ray:
                    q = board[t]
                    if not q:
                        yield sq, t, 0, 0
                        continue
                    if (q & 8) == them and (q & 7) != KING:
                        yield sq, t, 0, CAPTURE
                    break


def _king_square(board, color: int) -> int:
    return board.find(bytes((color | KING,)))


def _is_legal(buf: bytearray, F: int, R: int, color: int, king: int, mv, geo) -> bool:
    frm, to, promo, flags = mv
    piece = buf[frm]
    captured = buf[to]
    ep_sq = -1
    if flags & EN_PASSANT:
        ep_sq = to - F if color == WHITE else to + F
        ep_piece = buf[ep_sq]
        buf[ep_sq] = 0
    buf[to] = (color | promo) if promo else piece
    buf[frm] = 0
    ksq = to if (piece & 7) == KING else king
    ok = not _attacked(buf, F, R, ksq, color ^ 8, geo)
    buf[frm] = piece
    buf[to] = captured
    if ep_sq >= 0:
        buf[ep_sq] = ep_piece
    return ok


def _sort_key(mv, F: int, R: int) -> int:
    frm, to, promo, _ = mv
    n = F * R
    a = (frm % F) * R + frm // F
    b = (to % F) * R + to // F
    return ((a * n) + b) * 5 + PROMO_ORDER[promo]


def legal_moves(board: bytes, F: int, R: int, color: int, ep: int) -> list:
    """Legal moves as ``(from, to, promo, flags)`` tuples in canonical order."""
    geo = _geometry(F, R)
    buf = bytearray(board)
    king = _king_square(board, color)
    moves = [mv for mv in _pseudo(board, F, R, color, ep, geo)
             if _is_legal(buf, F, R, color, king, mv, geo)]
    moves.sort(key=lambda mv: _sort_key(mv, F, R))
    return moves


def has_legal_move(board: bytes, F: int, R: int, color: int, ep: int) -> bool:
    geo = _geometry(F, R)
    buf = bytearray(board)
    king = _king_square(board, color)
    for mv in _pseudo(board, F, R, color, ep, geo):
        if _is_legal(buf, F, R, color, king, mv, geo):
            return True
    return False


def is_attacked(board: bytes, F: int, R: int, sq: int, by: int) -> bool:
    return _attacked(board, F, R, sq, by, _geometry(F, R))


def in_check(board: bytes, F: int, R: int, color: int) -> bool:
    king = _king_square(board, color)
    return king >= 0 and _attacked(board, F, R, king, color ^ 8, _geometry(F, R))


def make_move(board: bytes, F: int, frm: int, to: int, promo: int, flags: int) -> bytes:
    buf = bytearray(board)
    piece = buf[frm]
    if flags & EN_PASSANT:
        buf[to - F if (piece & 8) == WHITE else to + F] = 0
    buf[to] = ((piece & 8) | promo) if promo else piece
    buf[frm] = 0
    return bytes(buf)


def perft(board: bytes, F: int, R: int, color: int, ep: int, depth: int) -> int:
    if depth == 0:
        return 1
    moves = legal_moves(board, F, R, color, ep)
    if depth == 1:
        return len(moves)
    total = 0
    for frm, to, promo, flags in moves:
        child = make_move(board, F, frm, to, promo, flags)
        nep = (frm + to) // 2 if flags & DOUBLE else -1
        total += perft(child, F, R, color ^ 8, nep, depth - 1)
    return total


def mating_moves(board: bytes, F: int, R: int, color: int, ep: int) -> list:
    """The subset of ``legal_moves`` that checkmate the opponent."""
    them = color ^ 8
    out = []
    for frm, to, promo, flags in legal_moves(board, F, R, color, ep):
        child = make_move(board, F, frm, to, promo, flags)
        if not in_check(child, F, R, them):
            continue
        nep = (frm + to) // 2 if flags & DOUBLE else -1
        if not has_legal_move(child, F, R, them, nep):
            out.append((frm, to, promo, flags))
    return out
