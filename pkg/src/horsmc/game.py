"""Finite parity games: extraction from order-0 schemes and solvers.

Eve wins a play iff the greatest priority seen infinitely often is even.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Optional, Sequence

from .core import (
    NT,
    Node,
    ParityLabel,
    Player,
    RecursionScheme,
    SchemeError,
    Term,
    scheme_order,
)


class GameError(SchemeError):
    pass


class UnproductiveCycle(GameError):
    """Nonterminals that rewrite to each other without producing a node."""


class ChildlessConstructor(GameError):
    pass


class TooLarge(ValueError):
    pass


@dataclass(frozen=True)
class ParityGame:
    owner: tuple[Player, ...]
    priority: tuple[int, ...]
    succ: tuple[tuple[int, ...], ...]
    root: int = 0

    def __post_init__(self):
        n = len(self.owner)
        if not (len(self.priority) == len(self.succ) == n):
            raise ValueError("owner/priority/succ lengths differ")
        for v, ss in enumerate(self.succ):
            if not ss:
                raise ValueError(f"vertex {v} has no successor")
            if any(not 0 <= s < n for s in ss):
                raise ValueError(f"vertex {v} has an out-of-range successor")
        if n and not 0 <= self.root < n:
            raise ValueError("root out of range")

    def __len__(self) -> int:
        return len(self.owner)

    @property
    def max_priority(self) -> int:
        return max(self.priority, default=0)

    def predecessors(self) -> list[list[int]]:
        pred: list[list[int]] = [[] for _ in self.owner]
        for v, ss in enumerate(self.succ):
            for s in set(ss):
                pred[s].append(v)
        return pred

    def dump(self) -> str:
        """Line-based rendering ``vertex <id> <E|A> <priority> -> <ids>``."""
        lines = [f"root {self.root}"]
        for v in range(len(self)):
            succ = ",".join(str(s) for s in self.succ[v])
            lines.append(f"vertex {v} {self.owner[v].value} {self.priority[v]} -> {succ}")
        return "\n".join(lines) + "\n"


@dataclass(frozen=True)
class Solution:
    winner: tuple[Player, ...]
    strategy: dict  # vertex -> successor, for vertices owned by their winner

    def winner_at(self, v: int) -> Player:
        return self.winner[v]

    def region(self, player: Player) -> set[int]:
        return {v for v, w in enumerate(self.winner) if w is player}


# ---------------------------------------------------------------------------
# extraction


def extract_game(g: RecursionScheme) -> ParityGame:
    """Turn an order-0 parity scheme into its finite game graph.

    Every vertex is a node constructor occurring in a rule body; nonterminal
    references are dereferenced through their rules.
    """
    if scheme_order(g) != 0:
        raise GameError(f"extract_game needs an order-0 scheme, got order {scheme_order(g)}")
    resolved: dict[str, Node] = {}

    def deref(t: Term) -> Node:
        chain = []
        while isinstance(t, NT):
            if t.name in resolved:
                t = resolved[t.name]
                break
            if t.name in chain:
                raise UnproductiveCycle(
                    "nonterminal cycle without node: " + " -> ".join(chain + [t.name])
                )
            chain.append(t.name)
            t = g.rules[t.name].body
        if not isinstance(t, Node):
            raise GameError(f"unexpected term {t} in order-0 scheme")
        for name in chain:
            resolved[name] = t
        return t

    ids: dict[Node, int] = {}
    owner, prio, succ = [], [], []
    root = deref(NT(g.start))
    ids[root] = 0
    work = [root]
    owner.append(None)
    prio.append(None)
    succ.append(None)
    while work:
        node = work.pop()
        v = ids[node]
        if not isinstance(node.label, ParityLabel):
            raise GameError(f"node {node} has no parity label")
        if not node.children:
            raise ChildlessConstructor(f"node {node} has no children")
        out = []
        for c in node.children:
            cn = deref(c)
            if cn not in ids:
                ids[cn] = len(owner)
                owner.append(None)
                prio.append(None)
                succ.append(None)
                work.append(cn)
            out.append(ids[cn])
        owner[v] = node.label.owner
        prio[v] = node.label.priority
        succ[v] = tuple(out)
    return ParityGame(tuple(owner), tuple(prio), tuple(succ), 0)


# ---------------------------------------------------------------------------
# Zielonka


def _attractor(game, pred, region: set[int], target: set[int], player: Player):
    """Attractor of ``target`` for ``player`` inside the subgame ``region``.

    Returns the attractor and a strategy for ``player`` on its attracted
    vertices outside ``target``.
    """
    attr = set(target)
    strategy = {}
    count = {v: sum(1 for s in set(game.succ[v]) if s in region) for v in region}
    queue = list(target)
    while queue:
        u = queue.pop()
        for v in pred[u]:
            if v not in region or v in attr:
                continue
            if game.owner[v] is player:
                attr.add(v)
                strategy[v] = u
                queue.append(v)
            else:
                count[v] -= 1
                if count[v] == 0:
                    attr.add(v)
                    queue.append(v)
    return attr, strategy


def _zielonka(game, pred, region: set[int]):
    wins = {Player.EVE: set(), Player.ADAM: set()}
    strat: dict[int, int] = {}
    if not region:
        return wins, strat
    top = max(game.priority[v] for v in region)
    me = Player.EVE if top % 2 == 0 else Player.ADAM
    opp = me.opponent()
    region = set(region)
    while True:
        tops = {v for v in region if game.priority[v] == top}
        if not tops:
            rest_wins, rest_strat = _zielonka(game, pred, region)
            for p in wins:
                wins[p] |= rest_wins[p]
            strat.update(rest_strat)
            return wins, strat
        a, a_strat = _attractor(game, pred, region, tops, me)
        sub_wins, sub_strat = _zielonka(game, pred, region - a)
        if not sub_wins[opp]:
            wins[me] |= region
            for v in region - a:
                if game.owner[v] is me:
                    strat[v] = sub_strat[v]
            strat.update(a_strat)
            for v in tops:
                if game.owner[v] is me:
                    strat[v] = next(s for s in game.succ[v] if s in region)
            return wins, strat
        b, b_strat = _attractor(game, pred, region, sub_wins[opp], opp)
        for v in sub_wins[opp]:
            if game.owner[v] is opp:
                strat[v] = sub_strat[v]
        strat.update(b_strat)
        wins[opp] |= b
        region -= b


def solve_zielonka(game: ParityGame) -> Solution:
    """Solve with Zielonka's recursive algorithm (positional strategies)."""
    pred = game.predecessors()
    wins, strat = _zielonka(game, pred, set(range(len(game))))
    winner = tuple(Player.EVE if v in wins[Player.EVE] else Player.ADAM for v in range(len(game)))
    strat = {v: s for v, s in strat.items() if game.owner[v] is winner[v]}
    return Solution(winner, strat)


# ---------------------------------------------------------------------------
# brute force


def _closure(succ_masks: Sequence[int], allowed: int) -> list[int]:
    """reach[v] = vertices reachable from v in >= 1 step inside ``allowed``."""
    n = len(succ_masks)
    reach = [succ_masks[v] & allowed for v in range(n)]
    for k in range(n):
        if not (allowed >> k) & 1:
            continue
        bit = 1 << k
        rk = reach[k]
        for v in range(n):
            if reach[v] & bit:
                reach[v] |= rk
    return reach


def _good_for(game, player: Player, succ_masks: list[int]) -> int:
    """Vertices from which every play in the restricted graph is won by ``player``."""
    n = len(game)
    full = (1 << n) - 1
    bad_parity = 1 if player is Player.EVE else 0
    bad = 0
    for p in sorted(set(game.priority)):
        if p % 2 != bad_parity:
            continue
        allowed = 0
        for v in range(n):
            if game.priority[v] <= p:
                allowed |= 1 << v
        reach = _closure(succ_masks, allowed)
        for v in range(n):
            if game.priority[v] == p and (reach[v] >> v) & 1:
                bad |= 1 << v
    if not bad:
        return full
    reach = _closure(succ_masks, full)
    good = 0
    for v in range(n):
        if not (bad >> v) & 1 and not reach[v] & bad:
            good |= 1 << v
    return good


def _strategies(game, player: Player, region: Optional[set[int]] = None):
    """All positional strategies of ``player`` (restricted to ``region``)."""
    mine = [v for v in range(len(game)) if game.owner[v] is player]
    choices = []
    for v in mine:
        opts = tuple(dict.fromkeys(game.succ[v]))
        if region is not None and v in region:
            opts = tuple(s for s in opts if s in region) or opts
        choices.append(opts)
    for pick in itertools.product(*choices):
        yield dict(zip(mine, pick))


def _masks(game, sigma: dict) -> list[int]:
    out = []
    for v in range(len(game)):
        if v in sigma:
            out.append(1 << sigma[v])
        else:
            m = 0
            for s in game.succ[v]:
                m |= 1 << s
            out.append(m)
    return out


def _count(game, player) -> int:
    n = 1
    for v in range(len(game)):
        if game.owner[v] is player:
            n *= len(set(game.succ[v]))
    return n


def brute_force_solve(game: ParityGame, max_vertices: int = 12) -> Solution:
    """Enumerate positional strategies; independent of the Zielonka solver.

    For each strategy of the enumerated player, a vertex is won iff no cycle
    with a losing maximal priority is reachable in the restricted graph.
    """
    n = len(game)
    if n > max_vertices:
        raise TooLarge(f"{n} vertices exceed the brute-force bound {max_vertices}")
    first = min((Player.EVE, Player.ADAM), key=lambda p: _count(game, p))
    best, best_sigma = 0, {}
    for sigma in _strategies(game, first):
        good = _good_for(game, first, _masks(game, sigma))
        best |= good
    region = {v for v in range(n) if (best >> v) & 1}
    # a single positional strategy wins on the whole region
    for sigma in _strategies(game, first, region):
        good = _good_for(game, first, _masks(game, sigma))
        if good & best == best:
            best_sigma = sigma
            break
    other = first.opponent()
    rest = set(range(n)) - region
    other_sigma = {}
    if rest:
        for sigma in _strategies(game, other, rest):
            good = _good_for(game, other, _masks(game, sigma))
            mask = sum(1 << v for v in rest)
            if good & mask == mask:
                other_sigma = sigma
                break
    winner = tuple(first if v in region else other for v in range(n))
    strat = {v: s for v, s in best_sigma.items() if v in region}
    strat.update({v: s for v, s in other_sigma.items() if v in rest})
    return Solution(winner, strat)


def certify(game: ParityGame, sol: Solution) -> bool:
    """Check that each player's strategy wins on its region.

    Fixing the winner's choices, every cycle reachable inside the region must
    have a maximal priority of the winner's parity.
    """
    for player in (Player.EVE, Player.ADAM):
        region = sol.region(player)
        if not region:
            continue
        n = len(game)
        masks = []
        for v in range(n):
            if v in region and game.owner[v] is player:
                s = sol.strategy.get(v)
                if s is None or s not in region:
                    return False
                masks.append(1 << s)
            else:
                m = 0
                for s in game.succ[v]:
                    m |= 1 << s
                if v in region and m & ~sum(1 << u for u in region):
                    return False  # opponent can leave: region is not a trap
                masks.append(m)
        good = _good_for(game, player, masks)
        for v in region:
            if not (good >> v) & 1:
                return False
    return True


SOLVERS = {"zielonka": solve_zielonka, "brute": brute_force_solve}
