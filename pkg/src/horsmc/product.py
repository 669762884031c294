"""Product of a scheme with an alternating parity automaton.

The product scheme generates the run tree of the automaton on the tree of
the scheme, so Eve wins its parity game iff the automaton accepts.  Every
nonterminal and parameter is copied once per automaton state (``X@q``).
"""

from __future__ import annotations

from functools import lru_cache
from typing import Sequence

from .automaton import Apt, validate
from .core import (
    NT,
    App,
    Node,
    ParityLabel,
    RecursionScheme,
    Rule,
    SchemeError,
    SimpleType,
    Term,
    Var,
    app,
    fun_type,
    params_of,
)
from .normalize import is_strong_simple_form


class NodeConstructorInPr(SchemeError):
    """A node constructor below the top of a rule body."""


def state_name(base: str, q: str) -> str:
    return f"{base}@{q}"


@lru_cache(maxsize=None)
def ddag_type(t: SimpleType, num_states: int) -> SimpleType:
    """Repeat every parameter ``num_states`` times, recursively."""
    if num_states < 1:
        raise ValueError("need at least one state")
    ps = []
    for p in params_of(t):
        ps.extend([ddag_type(p, num_states)] * num_states)
    return fun_type(ps)


def pr_term(q: str, m: Term, states: Sequence[str]) -> Term:
    """Copy ``m`` for state ``q``; arguments are fanned out over all states."""
    if isinstance(m, NT):
        return NT(state_name(m.name, q))
    if isinstance(m, Var):
        return Var(state_name(m.name, q))
    if isinstance(m, App):
        head = pr_term(q, m.fun, states)
        for p in states:
            head = App(head, pr_term(p, m.arg, states))
        return head
    raise NodeConstructorInPr(f"node constructor {m} inside an application")


def _dup_params(params: Sequence[str], states: Sequence[str]) -> tuple[str, ...]:
    return tuple(state_name(y, p) for y in params for p in states)


def build_product(g: RecursionScheme, a: Apt) -> RecursionScheme:
    """The parity scheme generating the run tree of ``a`` on ``g``'s tree.

    ``g`` must be in strong simple form and ``a`` must be total on ``g``'s
    labels (normally both come out of ``epsilon_eliminate``).
    """
    validate(a, g)
    if not is_strong_simple_form(g):
        raise SchemeError("build_product needs a scheme in strong simple form")
    for name, rule in g.rules.items():
        for n in (name, *rule.params):
            if "@" in n:
                raise SchemeError(f"name {n!r} contains '@'")
    states = a.states
    n = len(states)
    types: dict[str, SimpleType] = {}
    rules: dict[str, Rule] = {}
    for name, rule in g.rules.items():
        t = ddag_type(g.types[name], n)
        params = _dup_params(rule.params, states)
        for q in states:
            new = state_name(name, q)
            types[new] = t
            body = rule.body
            if not isinstance(body, Node):
                rules[new] = Rule(params, pr_term(q, body, states))
                continue
            kids = body.children
            children = []
            for p, c in a.moves(q, body.label, len(kids)):
                if c >= 1:
                    children.append(pr_term(p, kids[c - 1], states))
                else:
                    children.append(app(NT(state_name(name, p)), *map(Var, params)))
            label = ParityLabel(a.owner(q), a.priority(q, body.label))
            rules[new] = Rule(params, Node(label, tuple(children)))
    return RecursionScheme(types, rules, state_name(g.start, a.initial), a.max_priority)
