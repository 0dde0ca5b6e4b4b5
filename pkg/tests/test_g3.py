import itertools
import json
import random
from functools import lru_cache

import pytest
from hypothesis import given, settings, strategies as st

from selfmate import DnfFormula, G3Error, G3State, Literal, UnboundVariable, eval_dnf, g3_moves, solve_g3
from selfmate.g3 import state_from_json, state_to_json


def lit(text):
    return Literal(text.lstrip("~"), text.startswith("~"))


def formula(*clauses):
    return DnfFormula(tuple(tuple(lit(t) for t in c) for c in clauses))


def state(turn, i_lose, ii_lose, assignment, xs=("x",), ys=("y",)):
    return G3State(turn, i_lose, ii_lose, dict(assignment), tuple(xs), tuple(ys))


# -- formulas -----------------------------------------------------------------

def test_empty_formula_is_false():
    assert eval_dnf(DnfFormula(()), {}) is False


def test_empty_clause_is_true():
    assert eval_dnf(DnfFormula(((),)), {"x": False}) is True


def test_unbound_variable():
    with pytest.raises(UnboundVariable):
        eval_dnf(formula(["x", "y"]), {"x": True})
    with pytest.raises(UnboundVariable):
        eval_dnf(formula(["x"], ["z"]), {"x": False})


def test_random_dnf_matches_truth_table():
    rng = random.Random(3)
    names = ["a", "b", "c"]
    for _ in range(200):
        clauses = [[(rng.choice(names), rng.random() < 0.5) for _ in range(rng.randint(0, 3))]
                   for _ in range(rng.randint(0, 4))]
        f = DnfFormula.of(clauses)
        for bits in itertools.product([False, True], repeat=3):
            a = dict(zip(names, bits))
            expected = any(all(a[v] != neg for v, neg in c) for c in clauses)
            assert eval_dnf(f, a) is expected


def test_clause_width_limit():
    wide = DnfFormula.of([[f"x{i}" for i in range(13)]])
    s = G3State(1, wide, DnfFormula(), {f"x{i}": False for i in range(13)},
                tuple(f"x{i}" for i in range(13)), ())
    with pytest.raises(G3Error):
        solve_g3(s)
    solve_g3(s, strict_12dnf=False)


# -- moves --------------------------------------------------------------------

def test_no_move_when_flip_would_lose():
    s = state(1, formula(["x", "y"]), DnfFormula(), {"x": False, "y": True})
    assert g3_moves(s) == []


def test_single_move():
    s = state(1, formula(["x", "y"]), DnfFormula(), {"x": False, "y": False})
    (t,) = g3_moves(s)
    assert t.turn == 2 and t.assignment == {"x": True, "y": False}


def _random_instance(rng, nx=2, ny=2, max_clauses=3, width=3):
    xs = tuple(f"x{i}" for i in range(nx))
    ys = tuple(f"y{i}" for i in range(ny))
    names = xs + ys

    def f():
        return DnfFormula.of(
            [[(rng.choice(names), rng.random() < 0.5) for _ in range(rng.randint(0, width))]
             for _ in range(rng.randint(0, max_clauses))]
        )

    return G3State(rng.choice([1, 2]), f(), f(),
                   {v: rng.random() < 0.5 for v in names}, xs, ys)


def test_successor_count_matches_flip_filter():
    rng = random.Random(11)
    for _ in range(200):
        s = _random_instance(rng)
        own = s.variables_i if s.turn == 1 else s.variables_ii
        lose = s.i_lose if s.turn == 1 else s.ii_lose
        expected = 0
        for v in own:
            a = dict(s.assignment)
            a[v] = not a[v]
            expected += not eval_dnf(lose, a)
        assert len(g3_moves(s)) == expected


@settings(max_examples=200, deadline=None)
@given(st.integers(0, 2**32 - 1))
def test_moves_flip_one_own_variable(seed):
    s = _random_instance(random.Random(seed))
    own = set(s.variables_i if s.turn == 1 else s.variables_ii)
    for t in g3_moves(s):
        changed = {v for v in s.assignment if s.assignment[v] != t.assignment[v]}
        assert len(changed) == 1 and changed <= own
        assert t.turn == 3 - s.turn


# -- solver -------------------------------------------------------------------

def oracle(s):
    """Player I wins within 2 * 2**n plies, by plain memoized recursion."""
    xs, ys = list(s.variables_i), list(s.variables_ii)
    names = xs + ys

    def lose_true(clauses, a):
        return any(all(a[names.index(l.var)] != l.negated for l in c) for c in clauses)

    i_lose, ii_lose = s.i_lose.clauses, s.ii_lose.clauses

    def successors(turn, a):
        own = xs if turn == 1 else ys
        clauses = i_lose if turn == 1 else ii_lose
        out = []
        for v in own:
            b = list(a)
            k = names.index(v)
            b[k] = not b[k]
            if not lose_true(clauses, b):
                out.append(tuple(b))
        return out

    @lru_cache(maxsize=None)
    def win(turn, a, budget):
        nxt = successors(turn, a)
        if turn == 2 and not nxt:
            return True
        if budget == 0 or not nxt:
            return False
        if turn == 1:
            return any(win(2, b, budget - 1) for b in nxt)
        return all(win(1, b, budget - 1) for b in nxt)

    start = tuple(s.assignment[v] for v in names)
    return win(s.turn, start, 2 * 2 ** len(names))


def test_tautological_ii_lose():
    s = state(1, DnfFormula(), DnfFormula(((),)), {"x": False, "y": False})
    r = solve_g3(s)
    assert r.player1_wins and r.verdict == "player1_forces_win"


def test_tautological_i_lose():
    s = state(1, DnfFormula(((),)), DnfFormula(), {"x": True, "y": False})
    r = solve_g3(s)
    assert not r.player1_wins and r.verdict == "player1_cannot_force_win"


def test_endless_play_is_not_a_win():
    s = state(1, DnfFormula(), DnfFormula(), {"x": False, "y": False})
    assert not solve_g3(s).player1_wins


def test_matches_oracle_on_random_instances():
    rng = random.Random(2024)
    wins = 0
    for _ in range(1000):
        s = _random_instance(rng)
        r = solve_g3(s)
        assert r.player1_wins == oracle(s), state_to_json(s)
        wins += r.player1_wins
    assert 0 < wins < 1000


def test_renaming_invariance():
    rng = random.Random(5)
    for _ in range(100):
        s = _random_instance(rng)
        names = list(s.variables)
        fresh = [f"v{i}" for i in range(len(names))]
        rng.shuffle(fresh)
        t = s.rename(dict(zip(names, fresh)))
        assert solve_g3(t).player1_wins == solve_g3(s).player1_wins


def test_strategy_audit():
    rng = random.Random(8)
    for _ in range(200):
        r = solve_g3(_random_instance(rng, 3, 2))
        assert r.audit()


def test_larger_instances_match_oracle():
    rng = random.Random(17)
    for _ in range(30):
        s = _random_instance(rng, 3, 3, max_clauses=4)
        assert solve_g3(s).player1_wins == oracle(s)


def test_limit():
    rng = random.Random(1)
    s = _random_instance(rng, 3, 3)
    with pytest.raises(G3Error, match="limit"):
        solve_g3(s, limit=5)


def test_invalid_states():
    with pytest.raises(G3Error):
        state(3, DnfFormula(), DnfFormula(), {"x": False, "y": False})
    with pytest.raises(G3Error):
        state(1, DnfFormula(), DnfFormula(), {"x": False})
    with pytest.raises(G3Error):
        state(1, DnfFormula(), DnfFormula(), {"x": False}, xs=("x",), ys=("x",))


def test_json_round_trip():
    rng = random.Random(4)
    for _ in range(20):
        s = _random_instance(rng)
        data = json.loads(json.dumps(state_to_json(s)))
        assert state_from_json(data) == s


def test_malformed_json():
    with pytest.raises(G3Error):
        state_from_json({"variables_I": ["x"]})
