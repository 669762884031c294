"""The order-reducing transformation of parity recursion schemes.

Eve declares, for every order-0 argument that is about to be postponed, the
worst priority she will see before reaching it (``2d`` meaning "never").
Trailing order-0 arguments disappear from types; every remaining argument is
replicated once per declaration map for its own trailing arguments.

Declaration maps are tuples ``(A(1), .., A(l))``; index 1 is the *last*
trailing argument.  ``X$[A(l),..,A(1)]`` names the copy of ``X`` for ``A``,
so the rendered list reads left to right like the parameters it annotates.
"""

from __future__ import annotations

import itertools
from functools import lru_cache
from typing import Mapping, Optional

from .core import (
    NT,
    O,
    App,
    Node,
    ParityLabel,
    RecursionScheme,
    Rule,
    SchemeError,
    SimpleType,
    Term,
    Var,
    adam,
    eve,
    free_vars,
    fun_type,
    gar,
    is_simple_form,
    scheme_order,
    split_ground_suffix,
    type_of,
)

BOT = "Bot"
TOP = "Top"


class NotSimpleForm(SchemeError):
    pass


class NotParityScheme(SchemeError):
    pass


# ---------------------------------------------------------------------------
# declarations and priorities


def declarations(d: int) -> tuple[int, ...]:
    """D_d in canonical order ``1 < 2 < .. < d < 2d``."""
    return tuple(range(1, d + 1)) + (2 * d,)


def rank(p: int) -> int:
    """Sort key of the priority order: odd numbers descending, then evens."""
    return -p if p % 2 else p


def worse_or_equal(r: int, s: int) -> bool:
    return rank(r) <= rank(s)


def shift(r: int, p: int) -> int:
    """The declaration left over from ``r`` after priority ``p`` is seen."""
    if p % 2 == 1 and p > r:
        return p + 1
    if p % 2 == 0 and p >= r:
        return p - 1
    return r


def leader(seq) -> int:
    return max(seq, default=1)


def fulfils(seq, r: int) -> bool:
    return worse_or_equal(r, leader(seq))


@lru_cache(maxsize=None)
def enumerate_decl_maps(ground_arity: int, d: int) -> tuple[tuple[int, ...], ...]:
    """All maps ``[1..ground_arity] -> D_d``, lexicographic from index 1."""
    return tuple(itertools.product(declarations(d), repeat=ground_arity))


def render_decls(decls: tuple[int, ...]) -> str:
    return "[" + ",".join(map(str, decls[::-1])) + "]"


@lru_cache(maxsize=1 << 16)
def dag_name(base: str, decls: tuple[int, ...]) -> str:
    return f"{base}${render_decls(decls)}"


def shift_env(zenv: Mapping[str, int], p: int) -> dict[str, int]:
    return {z: shift(r, p) for z, r in zenv.items()}


# ---------------------------------------------------------------------------
# types


@lru_cache(maxsize=None)
def dag_type(t: SimpleType, d: int) -> SimpleType:
    """Drop trailing ``o`` arguments, replicate (and transform) the others."""
    leading, _ = split_ground_suffix(t)
    n = len(declarations(d))
    ps = []
    for a in leading:
        ps.extend([dag_type(a, d)] * n ** gar(a))
    return fun_type(ps)


# ---------------------------------------------------------------------------
# terms


class _Context:
    def __init__(self, types: Mapping[str, SimpleType], env: Mapping[str, SimpleType], d: int):
        self.types = types
        self.env = env
        self.d = d
        self._tcache: dict[Term, SimpleType] = {}
        self._fv: dict[Term, tuple[str, ...]] = {}
        self.memo: dict = {}

    def ground_vars(self, t: Term, zenv) -> tuple[str, ...]:
        try:
            fv = self._fv[t]
        except KeyError:
            fv = self._fv[t] = tuple(sorted(free_vars(t)))
        return tuple(z for z in fv if z in zenv)

    def tp(self, t: Term) -> SimpleType:
        try:
            return self._tcache[t]
        except KeyError:
            r = self._tcache[t] = type_of(t, self.env, self.types)
            return r


def tr_term(
    decls: tuple[int, ...],
    zenv: Mapping[str, int],
    term: Term,
    d: int,
    types: Mapping[str, SimpleType] | RecursionScheme,
    env: Optional[Mapping[str, SimpleType]] = None,
) -> Term:
    """Transform ``term`` under trailing-argument declarations ``decls``.

    ``zenv`` maps order-0 variables to Eve's declarations for them; ``env``
    gives the types of all free variables of ``term``.
    """
    if isinstance(types, RecursionScheme):
        types = types.types
    return _tr(tuple(decls), dict(zenv), term, _Context(types, env or {}, d))


def _tr(decls, zenv, m: Term, ctx: _Context) -> Term:
    # the result only depends on the declarations of variables occurring in m
    key = (decls, m, tuple(zenv[z] for z in ctx.ground_vars(m, zenv)))
    try:
        return ctx.memo[key]
    except KeyError:
        out = ctx.memo[key] = _tr_uncached(decls, zenv, m, ctx)
        return out


def _tr_uncached(decls, zenv, m: Term, ctx: _Context) -> Term:
    d = ctx.d
    if isinstance(m, NT):
        return NT(dag_name(m.name, decls))
    if isinstance(m, Var):
        if m.name not in zenv:
            return Var(dag_name(m.name, decls))
        if decls:
            raise SchemeError(f"ground variable {m.name} given declarations {decls}")
        return NT(TOP) if zenv[m.name] % 2 else NT(BOT)
    if isinstance(m, Node):
        if not isinstance(m.label, ParityLabel):
            raise NotParityScheme(f"plain label {m.label!r} in parity transformation")
        z2 = shift_env(zenv, m.label.priority)
        return Node(m.label, tuple(_tr((), z2, c, ctx) for c in m.children))
    k, l = m.fun, m.arg
    kt = ctx.tp(k)
    leading, ell = split_ground_suffix(kt)
    if not leading:
        # k : o^(ell) -> o with ell = len(decls) + 1
        k_r = {r: _tr(decls + (r,), zenv, k, ctx) for r in declarations(d)}
        children = []
        for r in range(1, d + 1):
            arg = _tr((), shift_env(zenv, r), l, ctx)
            children.append(adam(1, k_r[r], eve(r, arg)))
        children.append(k_r[2 * d])
        return eve(1, *children)
    head = _tr(decls, zenv, k, ctx)
    lt = ctx.tp(l)
    for b in enumerate_decl_maps(gar(lt), d):
        head = App(head, _tr(b, zenv, l, ctx))
    return head


# ---------------------------------------------------------------------------
# schemes


def transform_rule(g: RecursionScheme, name: str, d: int) -> dict[str, tuple[SimpleType, Rule]]:
    """All copies ``name$A`` of one rule, with their types."""
    t = g.types[name]
    rule = g.rules[name]
    leading, ell = split_ground_suffix(t)
    k = len(leading)
    ys, zs = rule.params[:k], rule.params[k:]
    env = g.env(name)
    params = []
    for y, yt in zip(ys, leading):
        params.extend(dag_name(y, b) for b in enumerate_decl_maps(gar(yt), d))
    new_type = dag_type(t, d)
    ctx = _Context(g.types, env, d)
    out = {}
    for a in enumerate_decl_maps(ell, d):
        zenv = {z: a[ell - 1 - i] for i, z in enumerate(zs)}
        body = _tr((), zenv, rule.body, ctx)
        out[dag_name(name, a)] = (new_type, Rule(tuple(params), body))
    return out


def transform_scheme(g: RecursionScheme) -> RecursionScheme:
    """Order-reducing transformation: order n >= 1 in, order n-1 out.

    The input must be a parity scheme in simple form; the output is again in
    simple form and generates a tree with the same winner.
    """
    if not g.is_parity:
        raise NotParityScheme("transform_scheme needs a parity scheme")
    if scheme_order(g) < 1:
        raise SchemeError("transform_scheme needs a scheme of order >= 1")
    if not is_simple_form(g):
        raise NotSimpleForm("transform_scheme needs a scheme in simple form")
    d = g.max_priority
    types: dict[str, SimpleType] = {}
    rules: dict[str, Rule] = {}
    for name in g.rules:
        for new_name, (t, r) in transform_rule(g, name, d).items():
            types[new_name] = t
            rules[new_name] = r
    for name, prio in ((BOT, 1), (TOP, 2)):
        if name in types:
            raise SchemeError(f"reserved gadget name {name} clashes with a nonterminal")
        types[name] = O
        rules[name] = Rule((), eve(prio, NT(name)))
    return RecursionScheme(types, rules, dag_name(g.start, ()), max(d, 2))
