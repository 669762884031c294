"""Alternating parity tree automata and the removal of divergent subtrees.

Transitions map ``(state, label, number of children)`` to an ordered tuple of
moves ``(state, direction)``; direction 0 stays at the current node.  The
label ``_omega`` with 0 children describes what happens in a divergent
subtree.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping, Optional

from .core import (
    EPS,
    OMEGA,
    Node,
    ParityLabel,
    Player,
    RecursionScheme,
    Rule,
    SchemeError,
)
from .game import ParityGame, solve_zielonka
from .oracle import CUTOFF, OMEGA_LEAF, TNode, Tree


class AutomatonError(SchemeError):
    pass


class MissingTransition(AutomatonError):
    pass


class DirectionOutOfRange(AutomatonError):
    pass


class ArityExceedsMax(AutomatonError):
    pass


Move = tuple[str, int]


@dataclass(frozen=True)
class Apt:
    alphabet: Mapping[str, int]  # label -> declared maximal arity
    max_arity: int
    states: tuple[str, ...]
    existential: frozenset[str]
    initial: str
    delta: Mapping[tuple[str, str, int], tuple[Move, ...]]
    eta: Mapping[tuple[str, str], int]

    __hash__ = None  # type: ignore[assignment]

    def __post_init__(self):
        object.__setattr__(self, "states", tuple(self.states))
        object.__setattr__(self, "existential", frozenset(self.existential))
        if len(set(self.states)) != len(self.states):
            raise AutomatonError("duplicate state")
        if self.initial not in self.states:
            raise AutomatonError(f"initial state {self.initial!r} is not a state")
        if not self.existential <= set(self.states):
            raise AutomatonError("existential states must be states")
        for (q, a, ell), moves in self.delta.items():
            if q not in self.states:
                raise AutomatonError(f"transition from unknown state {q!r}")
            if not moves:
                raise MissingTransition(f"empty transition set for ({q}, {a}, {ell})")
            for p, c in moves:
                if p not in self.states:
                    raise AutomatonError(f"transition to unknown state {p!r}")
                if not 0 <= c <= ell:
                    raise DirectionOutOfRange(
                        f"direction {c} in delta({q}, {a}, {ell}) exceeds {ell}"
                    )
            if ell > self.max_arity:
                raise ArityExceedsMax(f"arity {ell} of {a} exceeds {self.max_arity}")
        for (q, a), p in self.eta.items():
            if p < 1:
                raise AutomatonError(f"priority {p} of ({q}, {a}) is not positive")

    @property
    def size(self) -> int:
        return len(self.states)

    @property
    def max_priority(self) -> int:
        return max(self.eta.values(), default=1)

    def owner(self, q: str) -> Player:
        return Player.EVE if q in self.existential else Player.ADAM

    def moves(self, q: str, a: str, ell: int) -> tuple[Move, ...]:
        try:
            return self.delta[(q, a, ell)]
        except KeyError:
            raise MissingTransition(f"no transition for ({q}, {a}, {ell})") from None

    def priority(self, q: str, a: str) -> int:
        try:
            return self.eta[(q, a)]
        except KeyError:
            raise MissingTransition(f"no priority for ({q}, {a})") from None


def scheme_label_arities(g: RecursionScheme) -> set[tuple[str, int]]:
    return {(lab, n) for lab, n in g.labels() if isinstance(lab, str)}


def validate(a: Apt, g: Optional[RecursionScheme] = None) -> None:
    """Check that ``a`` can run on every node the scheme can produce.

    Raises MissingTransition, DirectionOutOfRange or ArityExceedsMax.
    """
    needed = {(OMEGA, 0)}
    if g is not None:
        for lab, n in scheme_label_arities(g):
            if lab == OMEGA or lab not in a.alphabet:
                raise AutomatonError(f"label {lab!r} is not in the automaton's alphabet")
            if n > a.max_arity:
                raise ArityExceedsMax(f"node {lab} with {n} children exceeds {a.max_arity}")
            needed.add((lab, n))
    for q in a.states:
        for lab, n in sorted(needed):
            a.moves(q, lab, n)
            a.priority(q, lab)


# ---------------------------------------------------------------------------
# run trees


def bounded_run_tree(a: Apt, q: str, t: Tree, depth: int) -> Tree:
    """Prefix of the run tree of ``a`` from state ``q`` on the tree ``t``."""
    if depth <= 0 or t is CUTOFF:
        return CUTOFF
    if t is OMEGA_LEAF:
        label, kids = OMEGA, ()
    elif isinstance(t, TNode):
        label, kids = t.label, t.children
    else:
        raise AutomatonError(f"cannot run an automaton on {t!r}")
    children = []
    for p, c in a.moves(q, label, len(kids)):
        sub = t if c == 0 else kids[c - 1]
        children.append(bounded_run_tree(a, p, sub, depth - 1))
    return TNode(ParityLabel(a.owner(q), a.priority(q, label)), tuple(children))


# ---------------------------------------------------------------------------
# divergence


def omega_game(a: Apt) -> ParityGame:
    """The game played by ``a`` on the single-node tree ``omega``."""
    index = {q: i for i, q in enumerate(a.states)}
    succ = []
    for q in a.states:
        moves = a.moves(q, OMEGA, 0)
        succ.append(tuple(index[p] for p, _ in moves))
    return ParityGame(
        tuple(a.owner(q) for q in a.states),
        tuple(a.priority(q, OMEGA) for q in a.states),
        tuple(succ),
        index[a.initial],
    )


def compute_qacc(a: Apt) -> frozenset[str]:
    """States from which ``a`` accepts the divergent tree ``omega``."""
    sol = solve_zielonka(omega_game(a))
    return frozenset(q for i, q in enumerate(a.states) if sol.winner[i] is Player.EVE)


def epsilon_eliminate(g: RecursionScheme, a: Apt) -> tuple[RecursionScheme, Apt]:
    """Guard every rule body with an ``_eps`` node and adapt the automaton.

    Afterwards every rewriting step produces a node, so the generated tree
    has no ``omega``; the automaton skips ``_eps`` nodes with priority 2
    (from accepting-on-omega states) or 1, and all old priorities move up
    by 2.
    """
    validate(a, g)
    rules = {x: Rule(r.params, Node(EPS, (r.body,))) for x, r in g.rules.items()}
    g2 = RecursionScheme(dict(g.types), rules, g.start, g.max_priority)
    qacc = compute_qacc(a)
    max_arity = max(a.max_arity, 1)
    delta = dict(a.delta)
    eta = {k: p + 2 for k, p in a.eta.items()}
    for q in a.states:
        delta[(q, EPS, 0)] = ((q, 0),)
        for ell in range(1, max_arity + 1):
            delta[(q, EPS, ell)] = ((q, 1),)
        eta[(q, EPS)] = 2 if q in qacc else 1
    alphabet = {**a.alphabet, EPS: 1}
    return g2, Apt(alphabet, max_arity, a.states, a.existential, a.initial, delta, eta)


def uses_only_nodes_at_top(g: RecursionScheme) -> bool:
    """Every rule body starts with a node constructor."""
    return all(isinstance(r.body, Node) for r in g.rules.values())
