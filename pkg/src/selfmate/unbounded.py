"""Unbounded forced-win analysis by attractor computation on the state graph.

States are positions modulo move counters.  The forward graph is explored
breadth-first under the stipulation's playable-move rule up to a cap on
expanded states; unexplored frontier states count as "not won" for either
side, so a positive verdict is always sound.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass

from .board import Color, Position, is_check
from .stipulation import Goal, SearchOptions, Stipulation, _Searcher

DEFAULT_CAP = 200_000


@dataclass
class UnboundedResult:
    """Outcome of the graph analysis.

    ``decided`` is True when the verdict cannot change with more
    exploration: the root is in one side's attractor, or the reachable graph
    was explored completely.
    """

    forcing_side_wins: bool
    forced_side_wins: bool
    truncated: bool
    states: int
    expanded: int
    plies: int | None = None
    decided: bool = True

    @property
    def verdict(self) -> str:
        return "forcing_side_wins" if self.forcing_side_wins else "not_won_within_cap"

    def summary(self) -> str:
        extra = f" in {self.plies} plies" if self.plies is not None else ""
        return (f"{self.verdict}{extra}; forced_side_wins={self.forced_side_wins} "
                f"states={self.states} expanded={self.expanded} truncated={self.truncated} "
                f"decided={self.decided}")

    def to_dict(self) -> dict:
        return {
            "verdict": self.verdict,
            "forcing_side_wins": self.forcing_side_wins,
            "forced_side_wins": self.forced_side_wins,
            "plies": self.plies,
            "truncated": self.truncated,
            "decided": self.decided,
            "states": self.states,
            "expanded": self.expanded,
        }


def _attractor(player_nodes: list[bool], succ: list[list[int]], pred: list[list[int]],
               expanded: list[bool], targets: list[int]) -> dict[int, int]:
    """Nodes from which the player can force reaching ``targets``, with ranks.

    ``player_nodes[i]`` is True where the attracting player moves.
    Opponent nodes join once every successor is in; unexpanded nodes never
    join except as targets.
    """
    rank = {t: 0 for t in targets}
    remaining = [len(s) for s in succ]
    queue = deque(targets)
    while queue:
        v = queue.popleft()
        for u in pred[v]:
            if u in rank or not expanded[u]:
                continue
            if player_nodes[u]:
                rank[u] = rank[v] + 1
                queue.append(u)
            else:
                remaining[u] -= 1
                if remaining[u] == 0:
                    rank[u] = rank[v] + 1
                    queue.append(u)
    return rank


def solve_unbounded(p: Position, kind: Goal | str, forcing_side: Color = Color.WHITE,
                    opts: SearchOptions | None = None) -> UnboundedResult:
    """Decide whether ``forcing_side`` forces the ``kind`` goal from ``p``.

    Winning terminals are the forced side mated (direct) or the forcing
    side mated (self, reflex, semi-reflex).  Stalemates and cycles are not
    wins for anyone.  Exploration proceeds one ply layer at a time and stops
    early once the root lies in either side's attractor.
    """
    kind = Goal(kind)
    cap = opts.node_cap if opts else DEFAULT_CAP
    rules = _Searcher(Stipulation(kind, 1, forcing_side), SearchOptions(memoize=False))

    win_targets: list[int] = []
    loss_targets: list[int] = []

    def classify(i: int) -> bool:
        """Record a terminal state; True if ``states[i]`` is terminal."""
        pos = states[i]
        if pos.raw_moves():
            return False
        expanded[i] = True
        if is_check(pos):
            forcing_mated = pos.side_to_move is forcing_side
            if forcing_mated != (kind is Goal.DIRECT):
                win_targets.append(i)
            else:
                loss_targets.append(i)
        return True

    ids: dict = {p.key: 0}
    states: list[Position] = [p]
    succ: list[list[int]] = [[]]
    pred: list[list[int]] = [[]]
    expanded = [False]
    depth = [0]
    queue = deque() if classify(0) else deque([0])
    n_expanded = 0
    truncated = False
    layer = 0

    def analyse():
        forcing_nodes = [s.side_to_move is forcing_side for s in states]
        win = _attractor(forcing_nodes, succ, pred, expanded, win_targets)
        loss = _attractor([not f for f in forcing_nodes], succ, pred, expanded, loss_targets)
        return win, loss

    while queue:
        if depth[queue[0]] > layer:
            layer = depth[queue[0]]
            win, loss = analyse()
            if 0 in win or 0 in loss:
                truncated = True
                break
        if n_expanded >= cap:
            truncated = True
            break
        i = queue.popleft()
        pos = states[i]
        expanded[i] = True
        n_expanded += 1
        for raw in rules.playable(pos):
            child = rules.child(pos, raw)
            j = ids.get(child.key)
            if j is None:
                j = len(states)
                ids[child.key] = j
                states.append(child)
                succ.append([])
                pred.append([])
                expanded.append(False)
                depth.append(depth[i] + 1)
                if not classify(j):
                    queue.append(j)
            if j not in succ[i]:
                succ[i].append(j)
                pred[j].append(i)

    win, loss = analyse()
    return UnboundedResult(
        forcing_side_wins=0 in win,
        forced_side_wins=0 in loss,
        truncated=truncated,
        states=len(states),
        expanded=n_expanded,
        plies=win.get(0),
        decided=(0 in win) or (0 in loss) or not truncated,
    )
