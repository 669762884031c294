"""Simple types, applicative terms and recursion schemes.

Terms contain no binders: the only variables are rule parameters, so
substitution is plain structural replacement.  All values are immutable and
hash structurally (hashes are cached, extraction memoizes on terms).
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Iterable, Iterator, Mapping, Optional, Union

OMEGA = "_omega"
EPS = "_eps"
RESERVED_LABELS = frozenset({OMEGA, EPS})


class SchemeError(ValueError):
    """Base class for ill-formed schemes and ill-typed terms."""


class UnboundName(SchemeError):
    pass


class ArityMismatch(SchemeError):
    pass


class TypeMismatch(SchemeError):
    pass


# ---------------------------------------------------------------------------
# types


@dataclass(frozen=True)
class Ground:
    def __str__(self) -> str:
        return "o"


@dataclass(frozen=True)
class Arrow:
    param: "SimpleType"
    result: "SimpleType"

    def __str__(self) -> str:
        left = str(self.param)
        if isinstance(self.param, Arrow):
            left = f"({left})"
        return f"{left} -> {self.result}"


SimpleType = Union[Ground, Arrow]
O = Ground()


def arrow(*types: SimpleType) -> SimpleType:
    """``arrow(a, b, c)`` is ``a -> b -> c``; ``arrow(t)`` is ``t``."""
    if not types:
        raise ValueError("arrow() needs at least the result type")
    result = types[-1]
    for t in reversed(types[:-1]):
        result = Arrow(t, result)
    return result


def fun_type(params: Iterable[SimpleType]) -> SimpleType:
    """The type ``params[0] -> ... -> o``."""
    return arrow(*params, O)


def params_of(t: SimpleType) -> tuple[SimpleType, ...]:
    out = []
    while isinstance(t, Arrow):
        out.append(t.param)
        t = t.result
    return tuple(out)


def arity(t: SimpleType) -> int:
    return len(params_of(t))


def order_of_type(t: SimpleType) -> int:
    return max([0] + [order_of_type(p) + 1 for p in params_of(t)])


def split_ground_suffix(t: SimpleType) -> tuple[tuple[SimpleType, ...], int]:
    """Decompose ``t`` as ``a1 -> .. -> ak => o^l -> o``.

    Returns ``((a1, .., ak), l)`` where ``ak`` (if any) is not ground.
    """
    ps = params_of(t)
    k = len(ps)
    while k > 0 and ps[k - 1] == O:
        k -= 1
    return ps[:k], len(ps) - k


def gar(t: SimpleType) -> int:
    """Ground arity: the number of trailing ``o`` parameters."""
    return split_ground_suffix(t)[1]


def types_in_definition(t: SimpleType) -> Iterator[SimpleType]:
    yield t
    if isinstance(t, Arrow):
        yield from types_in_definition(t.param)
        yield from types_in_definition(t.result)


# ---------------------------------------------------------------------------
# labels


class Player(enum.Enum):
    EVE = "E"
    ADAM = "A"

    def opponent(self) -> "Player":
        return Player.ADAM if self is Player.EVE else Player.EVE

    def __str__(self) -> str:
        return self.name.capitalize()


@dataclass(frozen=True)
class ParityLabel:
    owner: Player
    priority: int

    def __str__(self) -> str:
        return f"{self.owner.value} {self.priority}"


# plain labels are strings
Label = Union[ParityLabel, str]


# ---------------------------------------------------------------------------
# terms


class Term:
    __slots__ = ()

    def __str__(self) -> str:
        return render_term(self)


def _cache_hash(obj, *parts) -> None:
    object.__setattr__(obj, "_hash", hash((type(obj).__name__,) + parts))


@dataclass(frozen=True, repr=False)
class NT(Term):
    name: str
    _hash: int = field(init=False, compare=False, repr=False)

    def __post_init__(self):
        _cache_hash(self, self.name)

    def __hash__(self):
        return self._hash

    def __repr__(self):
        return f"NT({self.name!r})"


@dataclass(frozen=True, repr=False)
class Var(Term):
    name: str
    _hash: int = field(init=False, compare=False, repr=False)

    def __post_init__(self):
        _cache_hash(self, self.name)

    def __hash__(self):
        return self._hash

    def __repr__(self):
        return f"Var({self.name!r})"


@dataclass(frozen=True, repr=False)
class Node(Term):
    label: Label
    children: tuple[Term, ...] = ()
    _hash: int = field(init=False, compare=False, repr=False)

    def __post_init__(self):
        if not isinstance(self.children, tuple):
            object.__setattr__(self, "children", tuple(self.children))
        _cache_hash(self, self.label, self.children)

    def __hash__(self):
        return self._hash

    def __repr__(self):
        return f"Node({self.label!r}, {self.children!r})"


@dataclass(frozen=True, repr=False)
class App(Term):
    fun: Term
    arg: Term
    _hash: int = field(init=False, compare=False, repr=False)

    def __post_init__(self):
        _cache_hash(self, self.fun, self.arg)

    def __hash__(self):
        return self._hash

    def __eq__(self, other):
        if self is other:
            return True
        if not isinstance(other, App) or self._hash != other._hash:
            return False
        return self.fun == other.fun and self.arg == other.arg

    def __repr__(self):
        return f"App({self.fun!r}, {self.arg!r})"


def app(head: Term, *args: Term) -> Term:
    for a in args:
        head = App(head, a)
    return head


def spine(t: Term) -> tuple[Term, list[Term]]:
    """Split ``h K1 .. Kk`` into ``(h, [K1, .., Kk])``."""
    args = []
    while isinstance(t, App):
        args.append(t.arg)
        t = t.fun
    args.reverse()
    return t, args


def eve(p: int, *children: Term) -> Node:
    return Node(ParityLabel(Player.EVE, p), children)


def adam(p: int, *children: Term) -> Node:
    return Node(ParityLabel(Player.ADAM, p), children)


def subterms(t: Term) -> Iterator[Term]:
    stack = [t]
    while stack:
        s = stack.pop()
        yield s
        if isinstance(s, App):
            stack.append(s.arg)
            stack.append(s.fun)
        elif isinstance(s, Node):
            stack.extend(reversed(s.children))


def free_vars(t: Term) -> set[str]:
    return {s.name for s in subterms(t) if isinstance(s, Var)}


def render_term(t: Term) -> str:
    if isinstance(t, (NT, Var)):
        return t.name
    if isinstance(t, Node):
        head = str(t.label)
        if not t.children:
            return f"[{head}]"
        return "[" + ", ".join([head] + [render_term(c) for c in t.children]) + "]"
    head, args = spine(t)
    parts = [render_term(head)]
    for a in args:
        s = render_term(a)
        parts.append(f"({s})" if isinstance(a, App) else s)
    return " ".join(parts)


# ---------------------------------------------------------------------------
# schemes


@dataclass(frozen=True)
class Rule:
    params: tuple[str, ...]
    body: Term

    def __post_init__(self):
        if not isinstance(self.params, tuple):
            object.__setattr__(self, "params", tuple(self.params))


@dataclass(frozen=True, eq=True)
class RecursionScheme:
    """A recursion scheme ``(nonterminals, start, alphabet, rules)``.

    ``types`` and ``rules`` share the declaration order of the nonterminals.
    ``max_priority`` is the bound ``d`` of a parity scheme and ``None`` for
    schemes over plain labels.
    """

    types: Mapping[str, SimpleType]
    rules: Mapping[str, Rule]
    start: str
    max_priority: Optional[int] = None

    __hash__ = None  # type: ignore[assignment]

    @property
    def is_parity(self) -> bool:
        return self.max_priority is not None

    def env(self, name: str) -> dict[str, SimpleType]:
        """Parameter types of the rule for ``name``."""
        rule = self.rules[name]
        return dict(zip(rule.params, params_of(self.types[name])))

    def labels(self) -> set[tuple[Label, int]]:
        """Pairs ``(label, number of children)`` used by node constructors."""
        out = set()
        for rule in self.rules.values():
            for s in subterms(rule.body):
                if isinstance(s, Node):
                    out.add((s.label, len(s.children)))
        return out

    def check(self) -> "RecursionScheme":
        check_scheme(self)
        return self


def type_of(
    term: Term,
    env: Mapping[str, SimpleType],
    scheme: Union[RecursionScheme, Mapping[str, SimpleType]],
) -> SimpleType:
    """Synthesize the simple type of ``term``.

    Raises UnboundName, ArityMismatch or TypeMismatch naming the offending
    subterm.
    """
    nts = scheme.types if isinstance(scheme, RecursionScheme) else scheme
    return _type_of(term, env, nts)


def _type_of(term: Term, env, nts) -> SimpleType:
    if isinstance(term, Var):
        try:
            return env[term.name]
        except KeyError:
            raise UnboundName(f"unbound variable {term.name!r}") from None
    if isinstance(term, NT):
        try:
            return nts[term.name]
        except KeyError:
            raise UnboundName(f"unknown nonterminal {term.name!r}") from None
    if isinstance(term, Node):
        for c in term.children:
            if _type_of(c, env, nts) != O:
                raise TypeMismatch(
                    f"child {render_term(c)!r} of {render_term(term)!r} is not of type o"
                )
        return O
    if isinstance(term, App):
        ft = _type_of(term.fun, env, nts)
        if not isinstance(ft, Arrow):
            raise TypeMismatch(
                f"{render_term(term.fun)!r} has type o and cannot be applied "
                f"(in {render_term(term)!r})"
            )
        at = _type_of(term.arg, env, nts)
        if at != ft.param:
            raise TypeMismatch(
                f"argument {render_term(term.arg)!r} has type {at}, expected "
                f"{ft.param} (in {render_term(term)!r})"
            )
        return ft.result
    raise TypeError(f"not a term: {term!r}")


def check_scheme(g: RecursionScheme) -> None:
    if g.start not in g.types:
        raise UnboundName(f"start symbol {g.start!r} is not declared")
    if g.types[g.start] != O:
        raise TypeMismatch(f"start symbol {g.start!r} must have type o")
    if set(g.types) != set(g.rules):
        missing = sorted(set(g.types) - set(g.rules))
        extra = sorted(set(g.rules) - set(g.types))
        if missing:
            raise SchemeError(f"no rule for nonterminal(s) {', '.join(missing)}")
        raise UnboundName(f"rule(s) for undeclared {', '.join(extra)}")
    kinds = set()
    for name, rule in g.rules.items():
        ps = params_of(g.types[name])
        if len(rule.params) != len(ps):
            raise ArityMismatch(
                f"rule for {name} has {len(rule.params)} parameter(s), "
                f"type {g.types[name]} needs {len(ps)}"
            )
        if len(set(rule.params)) != len(rule.params):
            raise SchemeError(f"repeated parameter in rule for {name}")
        for p in rule.params:
            if p in g.types:
                raise SchemeError(f"parameter {p!r} of {name} shadows a nonterminal")
        env = dict(zip(rule.params, ps))
        try:
            bt = type_of(rule.body, env, g)
        except SchemeError as e:
            raise type(e)(f"in rule for {name}: {e}") from None
        if bt != O:
            raise TypeMismatch(f"body of {name} has type {bt}, expected o")
        for s in subterms(rule.body):
            if isinstance(s, Node):
                kinds.add(isinstance(s.label, ParityLabel))
                if isinstance(s.label, ParityLabel):
                    if g.max_priority is None:
                        raise SchemeError(f"parity label in non-parity scheme ({name})")
                    if not 1 <= s.label.priority <= g.max_priority:
                        raise SchemeError(
                            f"priority {s.label.priority} in rule for {name} "
                            f"outside [1, {g.max_priority}]"
                        )
                elif g.max_priority is not None:
                    raise SchemeError(f"plain label {s.label!r} in parity scheme ({name})")
    if len(kinds) > 1:
        raise SchemeError("scheme mixes parity and plain labels")


# ---------------------------------------------------------------------------
# metrics


def scheme_order(g: RecursionScheme) -> int:
    return max((order_of_type(t) for t in g.types.values()), default=0)


def term_size(t: Term) -> int:
    n = 0
    for s in subterms(t):
        n += 1
    return n


def scheme_size(g: RecursionScheme) -> int:
    return sum(term_size(r.body) + len(r.params) for r in g.rules.values())


def application_depth(t: Term) -> int:
    if isinstance(t, Node):
        return max((application_depth(c) for c in t.children), default=0)
    _, args = spine(t)
    return max([0] + [application_depth(a) + 1 for a in args])


def max_arity(g: RecursionScheme) -> int:
    return max(
        (arity(s) for t in g.types.values() for s in types_in_definition(t)),
        default=0,
    )


def is_simple_form(g: RecursionScheme) -> bool:
    return all(application_depth(r.body) <= 2 for r in g.rules.values())


# ---------------------------------------------------------------------------
# substitution and reduction


def substitute(body: Term, bindings: Mapping[str, Term]) -> Term:
    """Simultaneously replace variables according to ``bindings``."""
    if not bindings:
        return body
    return _subst(body, bindings)


def _subst(t: Term, b: Mapping[str, Term]) -> Term:
    if isinstance(t, Var):
        return b.get(t.name, t)
    if isinstance(t, NT):
        return t
    if isinstance(t, App):
        f, a = _subst(t.fun, b), _subst(t.arg, b)
        if f is t.fun and a is t.arg:
            return t
        return App(f, a)
    new = tuple(_subst(c, b) for c in t.children)
    if all(x is y for x, y in zip(new, t.children)):
        return t
    return Node(t.label, new)


def head_step(t: Term, g: RecursionScheme) -> Optional[Term]:
    """One step of the (deterministic) rewriting relation, or None."""
    head, args = spine(t)
    if not isinstance(head, NT):
        return None
    rule = g.rules[head.name]
    if len(args) != len(rule.params):
        return None
    return substitute(rule.body, dict(zip(rule.params, args)))


__all__ = [
    "OMEGA", "EPS", "SchemeError", "UnboundName", "ArityMismatch", "TypeMismatch",
    "Ground", "Arrow", "SimpleType", "O", "arrow", "fun_type", "params_of", "arity",
    "order_of_type", "split_ground_suffix", "gar", "Player", "ParityLabel", "Label",
    "Term", "NT", "Var", "Node", "App", "app", "spine", "eve", "adam", "subterms",
    "free_vars", "render_term", "Rule", "RecursionScheme", "type_of", "check_scheme",
    "scheme_order", "term_size", "scheme_size", "application_depth", "max_arity",
    "is_simple_form", "substitute", "head_step",
]
