"""Simple form (application depth <= 2) and strong simple form.

Both conversions hoist offending subterms into fresh nonterminals that take
all parameters of the host rule, in their original order.  A hoisted term
of non-ground type is eta-expanded with fresh trailing variables so that the
new rule body is ground.  Fresh nonterminals are named ``<host>#h<n>``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

from .core import (
    NT,
    App,
    Node,
    RecursionScheme,
    Rule,
    Term,
    Var,
    app,
    application_depth,
    fun_type,
    max_arity,
    params_of,
    scheme_size,
    spine,
    type_of,
)


@dataclass(frozen=True)
class NormalizationReport:
    fresh_nonterminals: int
    size_before: int
    size_after: int
    arity_before: int
    arity_after: int


class _Hoister:
    """Per-rule state: host name, parameters, and the rules created so far."""

    def __init__(self, g: RecursionScheme, taken: set[str], name: str):
        self.g = g
        self.taken = taken
        self.host = name
        self.params = g.rules[name].params
        self.env = g.env(name)
        self.counter = 0
        self.new_types: dict = {}
        self.new_rules: dict = {}

    def _fresh(self) -> str:
        while True:
            self.counter += 1
            cand = f"{self.host}#h{self.counter}"
            if cand not in self.taken:
                self.taken.add(cand)
                return cand

    def hoist(self, k: Term) -> Term:
        types = {**self.g.types, **self.new_types}
        kt = type_of(k, self.env, types)
        extra = params_of(kt)
        ws = []
        for i in range(len(extra)):
            w = f"w{i + 1}"
            while w in self.env or w in types:
                w += "'"
            ws.append(w)
        name = self._fresh()
        self.new_types[name] = fun_type(
            [self.env[p] for p in self.params] + list(extra)
        )
        self.new_rules[name] = Rule(
            self.params + tuple(ws), app(k, *[Var(w) for w in ws])
        )
        return app(NT(name), *[Var(p) for p in self.params])


def _lift_deep_args(t: Term, h: _Hoister) -> Term:
    """Innermost-first, left-to-right: hoist every argument of depth >= 2."""
    if isinstance(t, Node):
        return Node(t.label, tuple(_lift_deep_args(c, h) for c in t.children))
    head, args = spine(t)
    if not args:
        return t
    new_args = []
    for a in args:
        a = _lift_deep_args(a, h)
        if application_depth(a) >= 2:
            a = h.hoist(a)
        new_args.append(a)
    return app(head, *new_args)


def _lift_inner_nodes(t: Term, h: _Hoister, outermost: bool = True) -> Term:
    """Hoist every node constructor that is a proper subterm."""
    if isinstance(t, Node):
        new = Node(t.label, tuple(_lift_inner_nodes(c, h, False) for c in t.children))
        return new if outermost else h.hoist(new)
    if isinstance(t, App):
        return App(_lift_inner_nodes(t.fun, h, False), _lift_inner_nodes(t.arg, h, False))
    return t


def _rewrite(g: RecursionScheme, step: Callable[[Term, _Hoister], Term]):
    taken = set(g.types)
    for r in g.rules.values():
        taken.update(r.params)
    types, rules = {}, {}
    fresh = 0
    for name, rule in g.rules.items():
        h = _Hoister(g, taken, name)
        body = step(rule.body, h)
        types[name] = g.types[name]
        rules[name] = Rule(rule.params, body)
        types.update(h.new_types)
        rules.update(h.new_rules)
        fresh += len(h.new_rules)
    return RecursionScheme(types, rules, g.start, g.max_priority), fresh


def _report(g, out, fresh) -> NormalizationReport:
    return NormalizationReport(
        fresh, scheme_size(g), scheme_size(out), max_arity(g), max_arity(out)
    )


def to_simple_form(g: RecursionScheme) -> tuple[RecursionScheme, NormalizationReport]:
    """Return an equivalent scheme whose rule bodies have application depth <= 2."""
    out, fresh = _rewrite(g, _lift_deep_args)
    if fresh == 0:
        out = g
    return out, _report(g, out, fresh)


def to_strong_simple_form(
    g: RecursionScheme,
) -> tuple[RecursionScheme, NormalizationReport]:
    """Simple form in which node constructors occur only at the top of bodies."""
    mid, fresh1 = _rewrite(g, _lift_inner_nodes)
    out, fresh2 = _rewrite(mid, _lift_deep_args)
    if fresh1 + fresh2 == 0:
        out = g
    return out, _report(g, out, fresh1 + fresh2)


def is_strong_simple_form(g: RecursionScheme) -> bool:
    for rule in g.rules.values():
        if application_depth(rule.body) > 2:
            return False
        body = rule.body
        inner = body.children if isinstance(body, Node) else (body,)
        for t in inner:
            stack = [t]
            while stack:
                s = stack.pop()
                if isinstance(s, Node):
                    return False
                if isinstance(s, App):
                    stack += [s.fun, s.arg]
    return True
