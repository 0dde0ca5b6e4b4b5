# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled move generation kernel; mirrors ``_pykernel`` exactly."""

from libc.string cimport memcpy

cdef enum:
    MAXSQ = 1664          # 26 files x 64 ranks
    MAXMOVES = 2048
    WHITE = 0
    BLACK = 8
    PAWN = 1
    KNIGHT = 2
    BISHOP = 3
    ROOK = 4
    QUEEN = 5
    KING = 6
    CAPTURE = 1
    EN_PASSANT = 2
    DOUBLE = 4

cdef int KN_DF[8]
cdef int KN_DR[8]
cdef int KG_DF[8]
cdef int KG_DR[8]
KN_DF[:] = [1, 2, 2, 1, -1, -2, -2, -1]
KN_DR[:] = [2, 1, -1, -2, -2, -1, 1, 2]
KG_DF[:] = [1, 1, 0, -1, -1, -1, 0, 1]
KG_DR[:] = [0, 1, 1, 1, 0, -1, -1, -1]
# orthogonal directions first, then diagonals
cdef int RAY_DF[8]
cdef int RAY_DR[8]
RAY_DF[:] = [1, -1, 0, 0, 1, 1, -1, -1]
RAY_DR[:] = [0, 0, 1, -1, 1, -1, 1, -1]
cdef int PROMO_ORDER[7]
PROMO_ORDER[:] = [0, 0, 4, 3, 2, 1, 0]
cdef int PROMOS[4]
PROMOS[:] = [QUEEN, ROOK, BISHOP, KNIGHT]


ctypedef struct Mv:
    int frm
    int to
    int promo
    int flags


cdef bint attacked(const unsigned char* b, int F, int R, int sq, int by) nogil:
    cdef int f = sq % F, r = sq // F
    cdef int i, nf, nr, t, d
    cdef unsigned char p
    cdef unsigned char pawn = by | PAWN
    if by == WHITE:
        if r > 0:
            if f > 0 and b[sq - F - 1] == pawn:
                return True
            if f < F - 1 and b[sq - F + 1] == pawn:
                return True
    elif r < R - 1:
        if f > 0 and b[sq + F - 1] == pawn:
            return True
        if f < F - 1 and b[sq + F + 1] == pawn:
            return True
    for i in range(8):
        nf = f + KN_DF[i]
        nr = r + KN_DR[i]
        if 0 <= nf < F and 0 <= nr < R and b[nr * F + nf] == (by | KNIGHT):
            return True
        nf = f + KG_DF[i]
        nr = r + KG_DR[i]
        if 0 <= nf < F and 0 <= nr < R and b[nr * F + nf] == (by | KING):
            return True
    for d in range(8):
        nf = f + RAY_DF[d]
        nr = r + RAY_DR[d]
        while 0 <= nf < F and 0 <= nr < R:
            p = b[nr * F + nf]
            if p:
                if p == (by | QUEEN):
                    return True
                if d < 4 and p == (by | ROOK):
                    return True
                if d >= 4 and p == (by | BISHOP):
                    return True
                break
            nf += RAY_DF[d]
            nr += RAY_DR[d]
    return False


cdef inline int push(Mv* out, int n, int frm, int to, int promo, int flags) nogil:
    if n < MAXMOVES:
        out[n].frm = frm
        out[n].to = to
        out[n].promo = promo
        out[n].flags = flags
    return n + 1


cdef int pseudo(const unsigned char* b, int F, int R, int color, int ep, Mv* out) nogil:
    cdef int them = color ^ 8
    cdef int n = 0, sq, f, r, t, t2, step, last, start, k, i, nf, nr, d, dlo, dhi, df
    cdef unsigned char p, q, kind
    cdef bint promo
    for sq in range(F * R):
        p = b[sq]
        if p == 0 or (p & 8) != color:
            continue
        kind = p & 7
        f = sq % F
        r = sq // F
        if kind == PAWN:
            if color == WHITE:
                step = F
                last = R - 1
                start = 1
            else:
                step = -F
                last = 0
                start = R - 2
            if r == last:
                continue
            t = sq + step
            promo = (t // F) == last
            if b[t] == 0:
                if promo:
                    for k in range(4):
                        n = push(out, n, sq, t, PROMOS[k], 0)
                else:
                    n = push(out, n, sq, t, 0, 0)
                    # a double step never lands on the promotion rank
                    if r == start and (t + step) // F != last:
                        t2 = t + step
                        if b[t2] == 0:
                            n = push(out, n, sq, t2, 0, DOUBLE)
            for i in range(2):
                df = -1 if i == 0 else 1
                if 0 <= f + df < F:
                    t = sq + step + df
                    q = b[t]
                    if q:
                        if (q & 8) == them and (q & 7) != KING:
                            if promo:
                                for k in range(4):
                                    n = push(out, n, sq, t, PROMOS[k], CAPTURE)
                            else:
                                n = push(out, n, sq, t, 0, CAPTURE)
                    elif t == ep:
                        n = push(out, n, sq, t, 0, CAPTURE | EN_PASSANT)
        elif kind == KNIGHT or kind == KING:
            for i in range(8):
                if kind == KNIGHT:
                    nf = f + KN_DF[i]
                    nr = r + KN_DR[i]
                else:
                    nf = f + KG_DF[i]
                    nr = r + KG_DR[i]
                if 0 <= nf < F and 0 <= nr < R:
                    t = nr * F + nf
                    q = b[t]
                    if q == 0:
                        n = push(out, n, sq, t, 0, 0)
                    elif (q & 8) == them and (q & 7) != KING:
                        n = push(out, n, sq, t, 0, CAPTURE)
        else:
            if kind == ROOK:
                dlo = 0
                dhi = 4
            elif kind == BISHOP:
                dlo = 4
                dhi = 8
            else:
                dlo = 0
                dhi = 8
            for d in range(dlo, dhi):
                nf = f + RAY_DF[d]
                nr = r + RAY_DR[d]
                while 0 <= nf < F and 0 <= nr < R:
                    t = nr * F + nf
                    q = b[t]
                    if q == 0:
                        n = push(out, n, sq, t, 0, 0)
                    else:
                        if (q & 8) == them and (q & 7) != KING:
                            n = push(out, n, sq, t, 0, CAPTURE)
                        break
                    nf += RAY_DF[d]
                    nr += RAY_DR[d]
    return n


cdef int king_square(const unsigned char* b, int nsq, int color) nogil:
    cdef int s
    for s in range(nsq):
        if b[s] == (color | KING):
            return s
    return -1


cdef bint is_legal(unsigned char* buf, int F, int R, int color, int king, Mv mv) nogil:
    cdef unsigned char piece = buf[mv.frm]
    cdef unsigned char captured = buf[mv.to]
    cdef unsigned char ep_piece = 0
    cdef int ep_sq = -1, ksq
    cdef bint ok
    if mv.flags & EN_PASSANT:
        ep_sq = mv.to - F if color == WHITE else mv.to + F
        ep_piece = buf[ep_sq]
        buf[ep_sq] = 0
    buf[mv.to] = (color | mv.promo) if mv.promo else piece
    buf[mv.frm] = 0
    ksq = mv.to if (piece & 7) == KING else king
    ok = not attacked(buf, F, R, ksq, color ^ 8)
    buf[mv.frm] = piece
    buf[mv.to] = captured
    if ep_sq >= 0:
        buf[ep_sq] = ep_piece
    return ok


cdef void check_size(int F, int R) except *:
    if F < 1 or R < 1 or F * R > MAXSQ:
        raise ValueError("board size out of range")


cdef int gen_legal(const unsigned char* b, int F, int R, int color, int ep, Mv* out) except -1:
    cdef Mv raw[MAXMOVES]
    cdef unsigned char buf[MAXSQ]
    cdef int nsq = F * R
    cdef int n = pseudo(b, F, R, color, ep, raw)
    cdef int i, m = 0, king
    if n > MAXMOVES:
        raise OverflowError("too many pseudo-legal moves")
    memcpy(buf, b, nsq)
    king = king_square(b, nsq, color)
    for i in range(n):
        if is_legal(buf, F, R, color, king, raw[i]):
            out[m] = raw[i]
            m += 1
    return m


cdef inline long long sort_key(Mv mv, int F, int R):
    cdef long long nsq = F * R
    cdef long long a = (mv.frm % F) * R + mv.frm // F
    cdef long long c = (mv.to % F) * R + mv.to // F
    return ((a * nsq) + c) * 5 + PROMO_ORDER[mv.promo]


def legal_moves(bytes board, int F, int R, int color, int ep):
    """Legal moves as ``(from, to, promo, flags)`` tuples in canonical order."""
    check_size(F, R)
    cdef Mv out[MAXMOVES]
    cdef const unsigned char* b = board
    cdef int n = gen_legal(b, F, R, color, ep, out)
    cdef int i
    keyed = [(sort_key(out[i], F, R), out[i].frm, out[i].to, out[i].promo, out[i].flags)
             for i in range(n)]
    keyed.sort()
    return [(k[1], k[2], k[3], k[4]) for k in keyed]


def has_legal_move(bytes board, int F, int R, int color, int ep):
    check_size(F, R)
    cdef Mv raw[MAXMOVES]
    cdef unsigned char buf[MAXSQ]
    cdef const unsigned char* b = board
    cdef int nsq = F * R
    cdef int n = pseudo(b, F, R, color, ep, raw)
    cdef int i, king
    memcpy(buf, b, nsq)
    king = king_square(b, nsq, color)
    if n > MAXMOVES:
        raise OverflowError("too many pseudo-legal moves")
    for i in range(n):
        if is_legal(buf, F, R, color, king, raw[i]):
            return True
    return False


def is_attacked(bytes board, int F, int R, int sq, int by):
    check_size(F, R)
    cdef const unsigned char* b = board
    return attacked(b, F, R, sq, by)


def in_check(bytes board, int F, int R, int color):
    check_size(F, R)
    cdef const unsigned char* b = board
    cdef int king = king_square(b, F * R, color)
    return king >= 0 and attacked(b, F, R, king, color ^ 8)


def make_move(bytes board, int F, int frm, int to, int promo, int flags):
    buf = bytearray(board)
    cdef unsigned char piece = buf[frm]
    if flags & EN_PASSANT:
        buf[to - F if (piece & 8) == WHITE else to + F] = 0
    buf[to] = ((piece & 8) | promo) if promo else piece
    buf[frm] = 0
    return bytes(buf)


cdef long long perft_rec(unsigned char* b, int F, int R, int color, int ep, int depth) except -1:
    cdef Mv moves[MAXMOVES]
    cdef int n = gen_legal(b, F, R, color, ep, moves)
    cdef int i, ep_sq
    cdef long long total = 0
    cdef unsigned char piece, captured, ep_piece
    if depth == 1:
        return n
    for i in range(n):
        piece = b[moves[i].frm]
        captured = b[moves[i].to]
        ep_sq = -1
        if moves[i].flags & EN_PASSANT:
            ep_sq = moves[i].to - F if color == WHITE else moves[i].to + F
            ep_piece = b[ep_sq]
            b[ep_sq] = 0
        b[moves[i].to] = (color | moves[i].promo) if moves[i].promo else piece
        b[moves[i].frm] = 0
        total += perft_rec(b, F, R, color ^ 8,
                           (moves[i].frm + moves[i].to) // 2 if moves[i].flags & DOUBLE else -1,
                           depth - 1)
        b[moves[i].frm] = piece
        b[moves[i].to] = captured
        if ep_sq >= 0:
            b[ep_sq] = ep_piece
    return total


def perft(bytes board, int F, int R, int color, int ep, int depth):
    check_size(F, R)
    if depth == 0:
        return 1
    cdef unsigned char buf[MAXSQ]
    cdef const unsigned char* b = board
    memcpy(buf, b, F * R)
    return perft_rec(buf, F, R, color, ep, depth)


cdef bint any_legal(unsigned char* buf, int F, int R, int color, int ep) except -1:
    cdef Mv raw[MAXMOVES]
    cdef int n = pseudo(buf, F, R, color, ep, raw)
    cdef int i, king
    if n > MAXMOVES:
        raise OverflowError("too many pseudo-legal moves")
    king = king_square(buf, F * R, color)
    for i in range(n):
        if is_legal(buf, F, R, color, king, raw[i]):
            return True
    return False


def mating_moves(bytes board, int F, int R, int color, int ep):
    """The subset of ``legal_moves`` that checkmate the opponent."""
    check_size(F, R)
    cdef Mv moves[MAXMOVES]
    cdef unsigned char buf[MAXSQ]
    cdef const unsigned char* b = board
    cdef int n = gen_legal(b, F, R, color, ep, moves)
    cdef int i, ep_sq, them = color ^ 8, their_king
    cdef unsigned char piece, captured, ep_piece
    cdef bint mate
    memcpy(buf, b, F * R)
    their_king = king_square(b, F * R, them)
    keyed = []
    for i in range(n):
        piece = buf[moves[i].frm]
        captured = buf[moves[i].to]
        ep_sq = -1
        if moves[i].flags & EN_PASSANT:
            ep_sq = moves[i].to - F if color == WHITE else moves[i].to + F
            ep_piece = buf[ep_sq]
            buf[ep_sq] = 0
        buf[moves[i].to] = (color | moves[i].promo) if moves[i].promo else piece
        buf[moves[i].frm] = 0
        mate = attacked(buf, F, R, their_king, color) and not any_legal(
            buf, F, R, them,
            (moves[i].frm + moves[i].to) // 2 if moves[i].flags & DOUBLE else -1)
        buf[moves[i].frm] = piece
        buf[moves[i].to] = captured
        if ep_sq >= 0:
            buf[ep_sq] = ep_piece
        if mate:
            keyed.append((sort_key(moves[i], F, R), moves[i].frm, moves[i].to,
                          moves[i].promo, moves[i].flags))
    keyed.sort()
    return [(k[1], k[2], k[3], k[4]) for k in keyed]
