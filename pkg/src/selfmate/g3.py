"""The two-player formula game G3 and an exact solver for small instances.

Player I flips one variable of X per turn, player II one of Y; a move is
legal only if it leaves the mover's LOSE formula false.  A player with no
legal move loses; infinite play is not a win for player I.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Iterable, Mapping

import numpy as np

DEFAULT_VAR_LIMIT = 20
MAX_CLAUSE_WIDTH = 12


class UnboundVariable(KeyError):
    pass


class G3Error(ValueError):
    pass


@dataclass(frozen=True)
class Literal:
    var: str
    negated: bool = False

    def value(self, assignment: Mapping[str, bool]) -> bool:
        try:
            v = assignment[self.var]
        except KeyError:
            raise UnboundVariable(self.var) from None
        return not v if self.negated else bool(v)

    def __str__(self) -> str:
        return f"~{self.var}" if self.negated else self.var


@dataclass(frozen=True)
class DnfFormula:
    clauses: tuple[tuple[Literal, ...], ...] = ()

    @classmethod
    def of(cls, clauses: Iterable[Iterable[Literal | tuple[str, bool] | str]]) -> DnfFormula:
        """Build from literals, ``(var, negated)`` pairs or ``"x"``/``"~x"`` strings."""
        out = []
        for clause in clauses:
            lits = []
            for lit in clause:
                if isinstance(lit, Literal):
                    lits.append(lit)
                elif isinstance(lit, str):
                    lits.append(Literal(lit.lstrip("~"), lit.startswith("~")))
                else:
                    lits.append(Literal(lit[0], bool(lit[1])))
            out.append(tuple(lits))
        return cls(tuple(out))

    @property
    def variables(self) -> set[str]:
        return {lit.var for clause in self.clauses for lit in clause}

    def validate(self, strict_12dnf: bool = True) -> None:
        if strict_12dnf:
            for clause in self.clauses:
                if len(clause) > MAX_CLAUSE_WIDTH:
                    raise G3Error(f"clause of width {len(clause)} exceeds {MAX_CLAUSE_WIDTH}")

    def rename(self, mapping: Mapping[str, str]) -> DnfFormula:
        return DnfFormula(tuple(
            tuple(Literal(mapping[l.var], l.negated) for l in clause) for clause in self.clauses
        ))

    def __str__(self) -> str:
        if not self.clauses:
            return "false"
        return " | ".join("(" + " & ".join(map(str, c)) + ")" if c else "true"
                          for c in self.clauses)


def eval_dnf(f: DnfFormula, assignment: Mapping[str, bool]) -> bool:
    """OR over clauses of AND over literals; the empty formula is false."""
    for clause in f.clauses:
        if all(lit.value(assignment) for lit in clause):
            return True
    # surface unbound variables even when the formula is false
    for var in f.variables:
        if var not in assignment:
            raise UnboundVariable(var)
    return False


@dataclass(frozen=True)
class G3State:
    turn: int
    i_lose: DnfFormula
    ii_lose: DnfFormula
    assignment: Mapping[str, bool] = field(hash=False)
    variables_i: tuple[str, ...] = ()
    variables_ii: tuple[str, ...] = ()

    def __post_init__(self) -> None:
        if self.turn not in (1, 2):
            raise G3Error("turn must be 1 or 2")
        x, y = set(self.variables_i), set(self.variables_ii)
        if x & y:
            raise G3Error(f"variable sets overlap: {sorted(x & y)}")
        if set(self.assignment) != x | y:
            raise G3Error("assignment must be total over X and Y")
        extra = (self.i_lose.variables | self.ii_lose.variables) - (x | y)
        if extra:
            raise G3Error(f"formula uses undeclared variables {sorted(extra)}")

    @property
    def variables(self) -> tuple[str, ...]:
        return self.variables_i + self.variables_ii

    def with_assignment(self, turn: int, assignment: Mapping[str, bool]) -> G3State:
        return G3State(turn, self.i_lose, self.ii_lose, dict(assignment),
                       self.variables_i, self.variables_ii)

    def rename(self, mapping: Mapping[str, str]) -> G3State:
        return G3State(
            self.turn, self.i_lose.rename(mapping), self.ii_lose.rename(mapping),
            {mapping[v]: b for v, b in self.assignment.items()},
            tuple(mapping[v] for v in self.variables_i),
            tuple(mapping[v] for v in self.variables_ii),
        )


def g3_moves(s: G3State) -> list[G3State]:
    """Successors of ``s``: one mover variable flipped, mover's LOSE kept false."""
    own = s.variables_i if s.turn == 1 else s.variables_ii
    lose = s.i_lose if s.turn == 1 else s.ii_lose
    out = []
    for var in own:
        a = dict(s.assignment)
        a[var] = not a[var]
        if not eval_dnf(lose, a):
            out.append(s.with_assignment(3 - s.turn, a))
    return out


# -- exact solver --------------------------------------------------------------

def _truth_table(f: DnfFormula, index: Mapping[str, int], n: int) -> np.ndarray:
    """Value of ``f`` for every assignment encoded as an n-bit integer."""
    codes = np.arange(1 << n, dtype=np.int64)
    out = np.zeros(1 << n, dtype=bool)
    for clause in f.clauses:
        pos = neg = 0
        for l in clause:  # OR, not sum: literals may repeat
            if l.negated:
                neg |= 1 << index[l.var]
            else:
                pos |= 1 << index[l.var]
        if pos & neg:
            continue
        out |= ((codes & pos) == pos) & ((codes & neg) == 0)
    return out


@dataclass
class G3Result:
    """Solver outcome.

    ``strategy`` maps each player-I-to-move assignment code in the winning
    region to the variable player I should flip.
    """

    player1_wins: bool
    root: G3State
    n_states: int
    rank: int | None
    winning: np.ndarray = field(repr=False)  # shape (2, 2**n): [turn-1][code]
    strategy: dict[int, str] = field(repr=False, default_factory=dict)

    @property
    def verdict(self) -> str:
        return "player1_forces_win" if self.player1_wins else "player1_cannot_force_win"

    def describe(self) -> str:
        return "player I forces a win" if self.player1_wins else "player I cannot force a win"

    def audit(self) -> bool:
        """Re-check the strategy move by move with ``g3_moves``."""
        return audit_strategy(self)

    def to_dict(self) -> dict:
        return {"verdict": self.verdict, "player1_wins": self.player1_wins,
                "states": self.n_states, "plies": self.rank}


def _encode(s: G3State) -> tuple[dict[str, int], int]:
    index = {v: i for i, v in enumerate(s.variables)}
    code = sum(1 << index[v] for v, b in s.assignment.items() if b)
    return index, code


def solve_g3(s: G3State, limit: int = DEFAULT_VAR_LIMIT, strict_12dnf: bool = True) -> G3Result:
    """Decide whether player I can force player II into a stuck position.

    The full graph of ``2 * 2**n`` states is solved by layered backward
    induction; ``limit`` caps ``n = |X| + |Y|``.
    """
    n = len(s.variables)
    if n > limit:
        raise G3Error(f"instance has {n} variables, limit is {limit}")
    s.i_lose.validate(strict_12dnf)
    s.ii_lose.validate(strict_12dnf)
    index, root = _encode(s)
    size = 1 << n
    codes = np.arange(size, dtype=np.int64)
    lose = (_truth_table(s.i_lose, index, n), _truth_table(s.ii_lose, index, n))
    bits = ([1 << index[v] for v in s.variables_i], [1 << index[v] for v in s.variables_ii])
    # legal[t][j][a]: mover t may flip its j-th variable at assignment a
    legal = [[~lose[t][codes ^ b] for b in bits[t]] for t in (0, 1)]
    has_move = [np.logical_or.reduce(legal[t]) if bits[t] else np.zeros(size, bool)
                for t in (0, 1)]

    win = np.zeros((2, size), dtype=bool)
    rank = np.full((2, size), -1, dtype=np.int64)
    win[1] = ~has_move[1]  # player II stuck
    rank[1][win[1]] = 0
    layer = 0
    while True:
        layer += 1
        new1 = np.zeros(size, bool)
        for j, b in enumerate(bits[0]):
            new1 |= legal[0][j] & win[1][codes ^ b]
        new1 &= ~win[0]
        win[0] |= new1
        rank[0][new1] = layer
        # player II joins once every legal reply lands in player I's region
        allw = has_move[1].copy()
        for j, b in enumerate(bits[1]):
            allw &= ~legal[1][j] | win[0][codes ^ b]
        new2 = allw & ~win[1]
        win[1] |= new2
        rank[1][new2] = layer
        if not new1.any() and not new2.any():
            break

    strategy = {}
    for a in np.flatnonzero(win[0]):
        a = int(a)
        best = None
        for j, b in enumerate(bits[0]):
            t = a ^ b
            if legal[0][j][a] and win[1][t] and (best is None or rank[1][t] < rank[1][best[1]]):
                best = (s.variables_i[j], t)
        strategy[a] = best[0]

    t = s.turn - 1
    won = bool(win[t][root])
    return G3Result(won, s, 2 * size, int(rank[t][root]) if won else None, win, strategy)


def audit_strategy(result: G3Result) -> bool:
    """Every winning player-I state has a strategy move into the winning set,
    and every player-II reply from a winning state stays winning."""
    s = result.root
    index, _ = _encode(s)
    n = len(s.variables)
    names = s.variables

    def state(turn: int, code: int) -> G3State:
        return s.with_assignment(turn, {v: bool(code >> index[v] & 1) for v in names})

    def code_of(st: G3State) -> int:
        return sum(1 << index[v] for v, b in st.assignment.items() if b)

    win = result.winning
    for a in range(1 << n):
        if win[0][a]:
            var = result.strategy.get(a)
            succ = {code_of(x): x for x in g3_moves(state(1, a))}
            target = a ^ (1 << index[var]) if var else None
            if target not in succ or not win[1][target]:
                return False
        if win[1][a]:
            for x in g3_moves(state(2, a)):
                if not win[0][code_of(x)]:
                    return False
    return True


# -- instance JSON -------------------------------------------------------------

def _formula_from_json(data) -> DnfFormula:
    return DnfFormula(tuple(
        tuple(Literal(lit["var"], bool(lit.get("neg", False))) for lit in clause)
        for clause in data
    ))


def _formula_to_json(f: DnfFormula) -> list:
    return [[{"var": l.var, "neg": l.negated} for l in clause] for clause in f.clauses]


def state_from_json(data: dict | str) -> G3State:
    if isinstance(data, str):
        data = json.loads(data)
    try:
        return G3State(
            int(data["turn"]),
            _formula_from_json(data["i_lose"]),
            _formula_from_json(data["ii_lose"]),
            {k: bool(v) for k, v in data["assignment"].items()},
            tuple(data["variables_I"]),
            tuple(data["variables_II"]),
        )
    except (KeyError, TypeError) as exc:
        raise G3Error(f"malformed G3 instance: {exc}") from None


def state_to_json(s: G3State) -> dict:
    return {
        "variables_I": list(s.variables_i),
        "variables_II": list(s.variables_ii),
        "i_lose": _formula_to_json(s.i_lose),
        "ii_lose": _formula_to_json(s.ii_lose),
        "turn": s.turn,
        "assignment": dict(s.assignment),
    }
