"""Bounded stipulation solving: directmate, selfmate, reflexmate, semi-reflexmate.

``x#n`` is read as "the goal is reached on or before the forced side's
n-th move".  Stalemate of either side is a failure for the forcing side, and
in the reflex kinds a forcing side that is obliged to mate has lost.
"""

from __future__ import annotations

import json
import re
import threading
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from enum import Enum

from . import kernel as K
from .board import (
    Color, Move, Position, _to_move, apply_raw, is_check, legal_moves,
    serialize_xfen,
)


class Goal(str, Enum):
    DIRECT = "direct"
    SELF = "self"
    REFLEX = "reflex"
    SEMI_REFLEX = "semi_reflex"


_PREFIX = {Goal.DIRECT: "#", Goal.SELF: "s#", Goal.REFLEX: "r#", Goal.SEMI_REFLEX: "semi-r#"}
_STIP_RE = re.compile(r"(semi-r|s|r)?#(\d+)", re.IGNORECASE)

# reason tags for failed tries
FORCING_SIDE_MATES = "forcing-side-delivers-mate"
STALEMATE = "stalemate"
HORIZON = "horizon-exceeded"
REFUTED = "refuted"


@dataclass(frozen=True)
class Stipulation:
    kind: Goal
    n: int
    forcing_side: Color = Color.WHITE

    def __post_init__(self) -> None:
        if self.n < 1:
            raise ValueError("stipulation horizon must be >= 1")

    @classmethod
    def parse(cls, text: str, forcing_side: Color = Color.WHITE) -> Stipulation:
        """Parse ``#n``, ``s#n``, ``r#n`` or ``semi-r#n`` (case-insensitive)."""
        m = _STIP_RE.fullmatch(text.strip())
        if not m:
            raise ValueError(f"bad stipulation {text!r}; expected #n, s#n, r#n or semi-r#n")
        prefix = (m.group(1) or "").lower()
        kind = {"": Goal.DIRECT, "s": Goal.SELF, "r": Goal.REFLEX, "semi-r": Goal.SEMI_REFLEX}[prefix]
        return cls(kind, int(m.group(2)), forcing_side)

    def __str__(self) -> str:
        return f"{_PREFIX[self.kind]}{self.n}"


@dataclass
class SearchOptions:
    node_cap: int = 5_000_000
    deterministic: bool = True
    workers: int = 1
    full_tree: bool = False
    memoize: bool = True
    refutations: bool = True
    first_key_only: bool = False

    def __post_init__(self) -> None:
        if self.node_cap <= 0:
            raise ValueError("node_cap must be positive")
        if self.workers < 1:
            raise ValueError("workers must be >= 1")


class NodeCapExceeded(RuntimeError):
    pass


@dataclass
class VariationNode:
    move: Move
    text: str
    mark: str
    children: list[VariationNode] = field(default_factory=list)

    def to_dict(self) -> dict:
        return {"move": self.text, "mark": self.mark,
                "children": [c.to_dict() for c in self.children]}


@dataclass
class Refutation:
    """Why a tried first move fails.

    ``replies`` lists every forced-side answer that defeats the try;
    ``line`` is the first of them, checks ahead of quiet replies.
    """

    try_move: Move
    reason: str
    line: list[str]
    replies: list[str] = field(default_factory=list)


@dataclass
class SolutionTree:
    root_position: Position
    stipulation: Stipulation
    keys: list[Move]
    tree: list[VariationNode]
    refutations: dict[str, Refutation]
    status: str  # "solved", "not_solved" or "unknown"
    nodes: int = 0
    elapsed_ms: float = 0.0

    @property
    def solved(self) -> bool:
        return self.status == "solved"

    @property
    def cooked(self) -> bool:
        return len(self.keys) > 1

    @property
    def key_texts(self) -> list[str]:
        return [k.text for k in self.keys]

    def to_dict(self) -> dict:
        return {
            "stipulation": str(self.stipulation),
            "position": serialize_xfen(self.root_position),
            "status": self.status,
            "keys": self.key_texts,
            "cooked": self.cooked,
            "tree": {"move": None, "mark": "",
                     "children": [n.to_dict() for n in self.tree]},
            "refutations": {k: r.replies or [r.reason] for k, r in self.refutations.items()},
            "reasons": {k: r.reason for k, r in self.refutations.items()},
            "stats": {"nodes": self.nodes, "elapsed_ms": round(self.elapsed_ms, 3)},
        }

    def to_json(self, indent: int | None = 2) -> str:
        return json.dumps(self.to_dict(), indent=indent)

    def to_text(self) -> str:
        out = [f"{self.stipulation}  {serialize_xfen(self.root_position)}"]
        if self.status == "unknown":
            out.append("search aborted: node cap exceeded")
        elif not self.keys:
            out.append("no solution")
        for node in self.tree:
            out.append(f"1.{node.text}{node.mark}!")
            _text_lines(node.children, 1, out, "  ")
        if self.refutations:
            out.append("tries:")
            for text, ref in self.refutations.items():
                tail = " ".join(ref.line)
                out.append(f"  1.{text}? {ref.reason}" + (f": {tail}!" if tail else ""))
        out.append(f"nodes={self.nodes} elapsed_ms={self.elapsed_ms:.1f}")
        return "\n".join(out)


def _text_lines(replies: list[VariationNode], moveno: int, out: list[str], indent: str) -> None:
    for r in replies:
        if not r.children:
            out.append(f"{indent}{moveno}...{r.text}{r.mark}")
            continue
        for w in r.children:
            out.append(f"{indent}{moveno}...{r.text}{r.mark} {moveno + 1}.{w.text}{w.mark}")
            _text_lines(w.children, moveno + 1, out, indent + "  ")


def _mark(p: Position) -> str:
    if is_check(p):
        return "#" if not p.raw_moves() else "+"
    return ""


class _Searcher:
    """One bounded search; holds the memo and node counter."""

    def __init__(self, stip: Stipulation, opts: SearchOptions) -> None:
        self.stip = stip
        self.opts = opts
        self.direct = stip.kind is Goal.DIRECT
        self.forcing = stip.forcing_side
        self.memo: dict | None = {} if opts.memoize else None
        self.children: dict = {}
        self.mating: dict = {}
        self.lock = threading.Lock()
        self.nodes = 0

    def tick(self) -> None:
        self.nodes += 1
        if self.nodes > self.opts.node_cap:
            raise NodeCapExceeded(f"node cap {self.opts.node_cap} exceeded")

    def child(self, p: Position, raw) -> Position:
        if self.memo is None:
            return apply_raw(p, raw)
        key = (p.key, raw)
        c = self.children.get(key)
        if c is None:
            c = apply_raw(p, raw)
            with self.lock:
                self.children[key] = c
        return c

    def obliged(self, side: Color) -> bool:
        kind = self.stip.kind
        if kind is Goal.REFLEX:
            return True
        if kind is Goal.SEMI_REFLEX:
            return side is not self.forcing
        return False

    def playable(self, p: Position) -> list:
        moves = p.raw_moves()
        if not moves or not self.obliged(p.side_to_move):
            return moves
        mating = self.mating.get(p.key)
        if mating is None:
            mating = K.mating_moves(p.board, p.files, p.ranks,
                                    p.side_to_move.code, p.ep_index)
            with self.lock:
                self.mating[p.key] = mating
        return mating or moves

    def wins(self, p: Position, k: int) -> bool:
        """Forcing side (to move in ``p``) reaches the goal within ``k``."""
        key = (p.key, k)
        if self.memo is not None and key in self.memo:
            return self.memo[key]
        self.tick()
        result = any(self.try_move(p, w, k)[0] for w in self.playable(p))
        if self.memo is not None:
            with self.lock:
                self.memo[key] = result
        return result

    def try_move(self, p: Position, w, k: int, collect: bool = False):
        """Evaluate first move ``w``: (ok, reason, refuting replies)."""
        self.tick()
        q = self.child(p, w)
        if not q.raw_moves():
            if is_check(q):
                return (True, None, []) if self.direct else (False, FORCING_SIDE_MATES, [])
            return False, STALEMATE, []
        if self.direct and k < 2:
            return False, HORIZON, list(self.playable(q)) if collect else []
        reason, refuting = None, []
        for b in self.playable(q):
            r = self.child(q, b)
            why = self.reply_failure(r, k)
            if why is None:
                continue
            if not collect:
                return False, why, [b]
            reason = reason or why
            refuting.append(b)
        return (not refuting), reason, refuting

    def reply_failure(self, r: Position, k: int) -> str | None:
        """Reason the forcing side fails after the forced side's reply, or None."""
        if not r.raw_moves():
            if is_check(r):
                return None if not self.direct else FORCING_SIDE_MATES
            return STALEMATE
        if k < 2:
            return HORIZON
        return None if self.wins(r, k - 1) else REFUTED

    def variation(self, p: Position, w, k: int) -> VariationNode:
        """Proof tree under a successful forcing-side move ``w``."""
        q = self.child(p, w)
        node = VariationNode(_to_move(p, w), "", _mark(q))
        node.text = node.move.text
        if not q.raw_moves():
            return node
        for b in self.playable(q):
            r = self.child(q, b)
            reply = VariationNode(_to_move(q, b), "", _mark(r))
            reply.text = reply.move.text
            node.children.append(reply)
            if not r.raw_moves():
                continue
            for w2 in self.playable(r):
                if self.try_move(r, w2, k - 1)[0]:
                    reply.children.append(self.variation(r, w2, k - 1))
                    if not self.opts.full_tree:
                        break
        return node


def playable_moves(p: Position, stip: Stipulation) -> list[Move]:
    """Legal moves filtered by the reflex obligation, if it binds the mover."""
    s = _Searcher(stip, SearchOptions())
    return [_to_move(p, raw) for raw in s.playable(p)]


def _first_move_verdict(p: Position, stip: Stipulation, opts: SearchOptions, w,
                        searcher: _Searcher | None = None):
    s = searcher or _Searcher(stip, opts)
    ok, reason, refuting = s.try_move(p, w, stip.n, collect=opts.refutations)
    q = s.child(p, w)
    if ok:
        return True, s.variation(p, w, stip.n), None, s.nodes
    move = _to_move(p, w)
    replies = [_to_move(q, b).text + _mark(s.child(q, b)) for b in refuting]
    # checking replies first, canonical order otherwise
    replies.sort(key=lambda t: t[-1] not in "+#")
    ref = Refutation(move, reason, replies[:1], replies)
    return False, None, ref, s.nodes


def _worker(args):
    p, stip, opts, w = args
    try:
        return _first_move_verdict(p, stip, opts, w)
    except NodeCapExceeded:
        return None


def solve(p: Position, stip: Stipulation, opts: SearchOptions | None = None) -> SolutionTree:
    """Find every key of ``stip`` in ``p`` with proof tree and refutations."""
    opts = opts or SearchOptions()
    if p.side_to_move is not stip.forcing_side:
        raise ValueError(
            f"stipulation forcing side {stip.forcing_side.name.lower()} is not to move"
        )
    start = time.perf_counter()
    searcher = _Searcher(stip, opts)
    first = searcher.playable(p)
    keys, tree, refutations = [], [], {}
    nodes, status = 0, None
    if opts.workers > 1 and len(first) > 1:
        with ProcessPoolExecutor(max_workers=opts.workers) as pool:
            results = list(pool.map(_worker, [(p, stip, opts, w) for w in first]))
        if any(r is None for r in results):
            status = "unknown"
        else:
            for ok, node, ref, n in results:
                nodes += n
                if ok:
                    keys.append(node.move)
                    tree.append(node)
                    if opts.first_key_only:
                        break
                else:
                    refutations[ref.try_move.text] = ref
    else:
        try:
            for w in first:
                ok, node, ref, _ = _first_move_verdict(p, stip, opts, w, searcher)
                if ok:
                    keys.append(node.move)
                    tree.append(node)
                    if opts.first_key_only:
                        break
                else:
                    refutations[ref.try_move.text] = ref
        except NodeCapExceeded:
            status = "unknown"
        nodes = searcher.nodes
    if status is None:
        status = "solved" if keys else "not_solved"
    if not opts.refutations:
        refutations = {}
    return SolutionTree(p, stip, keys, tree, refutations, status, nodes,
                        (time.perf_counter() - start) * 1000)


def refute(p: Position, stip: Stipulation, try_move: Move,
           opts: SearchOptions | None = None) -> Refutation | None:
    """Refutation of ``try_move``, or ``None`` if it is a key."""
    opts = opts or SearchOptions()
    if p.side_to_move is not stip.forcing_side:
        raise ValueError("stipulation forcing side is not to move")
    s = _Searcher(stip, opts)
    for w in s.playable(p):
        if _to_move(p, w) == try_move:
            ok, _, ref, _ = _first_move_verdict(p, stip, opts, w, s)
            return None if ok else ref
    if try_move in legal_moves(p):
        raise ValueError(f"{try_move.text} is legal but not playable under {stip}")
    raise ValueError(f"{try_move.text} is not a legal move")
