"""Bounded semantics for testing: truncated trees, extended trees, a brute-force winner.

Nothing here is used by the decision procedure itself.  Trees are finite
prefixes; ``CUTOFF`` marks where truncation (depth or step budget) stopped,
and comparisons only look at regions that both sides resolved.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Mapping, Optional

from .core import (
    NT,
    Label,
    Node,
    ParityLabel,
    Player,
    RecursionScheme,
    SchemeError,
    Term,
    Var,
    gar,
    head_step,
    spine,
    substitute,
)
from .game import (
    ChildlessConstructor,
    ParityGame,
    UnproductiveCycle,
    brute_force_solve,
    solve_zielonka,
)
from .reduce import shift

# ---------------------------------------------------------------------------
# bounded trees


class Tree:
    __slots__ = ()

    def __str__(self) -> str:
        return render_tree(self)


@dataclass(frozen=True)
class TNode(Tree):
    label: Label
    children: tuple[Tree, ...] = ()


@dataclass(frozen=True)
class VarLeaf(Tree):
    name: str


@dataclass(frozen=True)
class ExplSubst(Tree):
    """``body[bound/binder]``."""

    body: Tree
    binder: str
    bound: Tree


@dataclass(frozen=True)
class _Cutoff(Tree):
    pass


@dataclass(frozen=True)
class _Omega(Tree):
    pass


CUTOFF = _Cutoff()
OMEGA_LEAF = _Omega()


class FreeVariable(SchemeError):
    pass


class UnboundVariable(SchemeError):
    pass


def render_tree(t: Tree, indent: int = 0) -> str:
    """Indented debug rendering; substitutions print as ``[z := ...]``."""
    pad = "  " * indent
    if t is CUTOFF:
        return pad + "..."
    if t is OMEGA_LEAF:
        return pad + "omega"
    if isinstance(t, VarLeaf):
        return pad + t.name
    if isinstance(t, TNode):
        lines = [pad + str(t.label)]
        lines += [render_tree(c, indent + 1) for c in t.children]
        return "\n".join(lines)
    return "\n".join(
        [
            render_tree(t.body, indent),
            f"{pad}[{t.binder} :=",
            render_tree(t.bound, indent + 1),
            pad + "]",
        ]
    )


def tree_depth(t: Tree) -> int:
    if isinstance(t, TNode):
        return 1 + max((tree_depth(c) for c in t.children), default=0)
    if isinstance(t, ExplSubst):
        return max(tree_depth(t.body), 1 + tree_depth(t.bound))
    return 0


def compare_resolved(a: Tree, b: Tree) -> tuple[bool, int]:
    """Do ``a`` and ``b`` agree wherever both are resolved?

    Returns ``(agree, n)`` with ``n`` the number of resolved positions both
    trees share, so callers can reject vacuous agreement.
    """
    stack = [(a, b)]
    shared = 0
    while stack:
        x, y = stack.pop()
        if x is CUTOFF or y is CUTOFF:
            continue
        shared += 1
        if type(x) is not type(y):
            return False, shared
        if isinstance(x, TNode):
            if x.label != y.label or len(x.children) != len(y.children):
                return False, shared
            stack.extend(zip(x.children, y.children))
        elif isinstance(x, VarLeaf):
            if x.name != y.name:
                return False, shared
        elif isinstance(x, ExplSubst):
            if x.binder != y.binder:
                return False, shared
            stack.append((x.body, y.body))
            stack.append((x.bound, y.bound))
    return True, shared


def is_prefix(a: Tree, b: Tree) -> bool:
    """Every resolved position of ``a`` is resolved identically in ``b``."""
    if a is CUTOFF:
        return True
    if type(a) is not type(b):
        return False
    if isinstance(a, TNode):
        return (
            a.label == b.label
            and len(a.children) == len(b.children)
            and all(is_prefix(x, y) for x, y in zip(a.children, b.children))
        )
    if isinstance(a, ExplSubst):
        return a.binder == b.binder and is_prefix(a.body, b.body) and is_prefix(a.bound, b.bound)
    return a == b


def is_cutoff_free(t: Tree) -> bool:
    if t is CUTOFF:
        return False
    if isinstance(t, TNode):
        return all(is_cutoff_free(c) for c in t.children)
    if isinstance(t, ExplSubst):
        return is_cutoff_free(t.body) and is_cutoff_free(t.bound)
    return True


# ---------------------------------------------------------------------------
# plain Böhm trees


def _whnf(g: RecursionScheme, m: Term, budget: int) -> Optional[Term]:
    """Rewrite ``m`` at the head until a constructor or variable is exposed."""
    for _ in range(budget + 1):
        head, _args = spine(m)
        if not isinstance(head, NT):
            return m
        nxt = head_step(m, g)
        if nxt is None:
            return m
        m = nxt
    return None


def bounded_bt(g: RecursionScheme, m: Term, depth: int, step_budget: int = 200) -> Tree:
    """Depth-``depth`` prefix of the tree generated from the closed term ``m``."""
    if depth <= 0:
        return CUTOFF
    r = _whnf(g, m, step_budget)
    if r is None:
        return CUTOFF
    if isinstance(r, Node):
        return TNode(r.label, tuple(bounded_bt(g, c, depth - 1, step_budget) for c in r.children))
    head, args = spine(r)
    if isinstance(head, Var) and not args:
        return VarLeaf(head.name)
    raise SchemeError(f"cannot generate a tree from {r}")


# ---------------------------------------------------------------------------
# extended terms


@dataclass(frozen=True)
class ExtendedTerm:
    """``core[L1/z1]..[Ln/zn]``; ``substs`` lists ``(z, L)`` innermost first."""

    core: Term
    substs: tuple[tuple[str, Term], ...] = ()


class _Fresh:
    def __init__(self):
        self._it = itertools.count(1)

    def __call__(self) -> str:
        return f"%z{next(self._it)}"


def ext_step(e: ExtendedTerm, g: RecursionScheme, fresh=None) -> Optional[ExtendedTerm]:
    """One ext-reduction step on the core; trailing ground arguments are postponed.

    ``X K1..Kk L1..Ll`` becomes ``R[K/y, z'/z][L1/z'1]..[Ll/z'l]``.  The new
    substitutions sit inside the existing ones, since the ``Li`` may mention
    variables those bind.
    """
    fresh = fresh or _Fresh()
    head, args = spine(e.core)
    if not isinstance(head, NT):
        return None
    rule = g.rules[head.name]
    if len(args) != len(rule.params):
        return None
    ell = gar(g.types[head.name])
    k = len(args) - ell
    binders = [fresh() for _ in range(ell)]
    bindings = dict(zip(rule.params[:k], args[:k]))
    bindings.update({z: Var(b) for z, b in zip(rule.params[k:], binders)})
    core = substitute(rule.body, bindings)
    new = tuple(zip(binders, args[k:]))
    return ExtendedTerm(core, new + e.substs)


def _bt_ext(g, core: Term, depth: int, budget: int, fresh) -> Tree:
    if depth <= 0:
        return CUTOFF
    pending: list[tuple[str, Term]] = []  # innermost first
    e = ExtendedTerm(core)
    result: Tree = CUTOFF
    for _ in range(budget + 1):
        head, args = spine(e.core)
        if isinstance(head, Node):
            result = TNode(
                head.label,
                tuple(_bt_ext(g, c, depth - 1, budget, fresh) for c in head.children),
            )
            break
        if isinstance(head, Var):
            if args:
                raise SchemeError(f"non-ground variable head in {e.core}")
            result = VarLeaf(head.name)
            break
        nxt = ext_step(ExtendedTerm(e.core), g, fresh)
        if nxt is None:
            raise SchemeError(f"stuck term {e.core}")
        pending[:0] = nxt.substs
        e = ExtendedTerm(nxt.core)
    for z, l in pending:
        result = ExplSubst(result, z, _bt_ext(g, l, depth - 1, budget, fresh))
    return result


def bounded_bt_ext(
    g: RecursionScheme, e: Term | ExtendedTerm, depth: int, step_budget: int = 200
) -> Tree:
    """Prefix of the extended Böhm tree, binders renamed ``z'1, z'2, ..``.

    Depth is consumed by constructors and by entering the bound side of an
    explicit substitution; the body side of a substitution keeps its depth.
    """
    fresh = _Fresh()
    if isinstance(e, Term):
        e = ExtendedTerm(e)
    t = _bt_ext(g, e.core, depth, step_budget, fresh)
    for z, l in e.substs:
        t = ExplSubst(t, z, _bt_ext(g, l, depth - 1, step_budget, fresh))
    return canonical_binders(t)


def canonical_binders(t: Tree) -> Tree:
    """Rename binders to ``z'1, z'2, ..`` in pre-order (body before bound)."""
    counter = itertools.count(1)

    def go(t: Tree, scope: Mapping[str, str]) -> Tree:
        if isinstance(t, TNode):
            return TNode(t.label, tuple(go(c, scope) for c in t.children))
        if isinstance(t, VarLeaf):
            return VarLeaf(scope.get(t.name, t.name))
        if isinstance(t, ExplSubst):
            new = f"z'{next(counter)}"
            body = go(t.body, {**scope, t.binder: new})
            return ExplSubst(body, new, go(t.bound, scope))
        return t

    return go(t, {})


# ---------------------------------------------------------------------------
# simplification of extended trees


def expand(t: Tree, depth: int) -> Tree:
    """Prefix of the tree obtained by carrying out all explicit substitutions."""

    def go(t: Tree, env, depth: int) -> Tree:
        while True:
            if t is CUTOFF or t is OMEGA_LEAF:
                return t
            if isinstance(t, ExplSubst):
                env = {**env, t.binder: (t.bound, env)}
                t = t.body
            elif isinstance(t, VarLeaf):
                if t.name not in env:
                    raise FreeVariable(f"free variable {t.name} in extended tree")
                t, env = env[t.name]
            else:
                if depth <= 0:
                    return CUTOFF
                return TNode(t.label, tuple(go(c, env, depth - 1) for c in t.children))

    return go(t, {}, depth)


# ---------------------------------------------------------------------------
# tree-level transformation


def _node(owner: Player, p: int, children, depth: int) -> Tree:
    return TNode(ParityLabel(owner, p), tuple(children)) if depth > 0 else CUTOFF


def _loop(priority: int, depth: int) -> Tree:
    t: Tree = CUTOFF
    for _ in range(max(depth, 0)):
        t = TNode(ParityLabel(Player.EVE, priority), (t,))
    return t


def tr_tree(zenv: Mapping[str, int], t: Tree, d: int, depth: int) -> Tree:
    """Apply the declaration transformation to an extended tree, to ``depth``."""
    if depth <= 0 or t is CUTOFF:
        return CUTOFF
    if isinstance(t, VarLeaf):
        if t.name not in zenv:
            raise UnboundVariable(f"no declaration for {t.name}")
        return _loop(2 if zenv[t.name] % 2 else 1, depth)
    if isinstance(t, TNode):
        if not isinstance(t.label, ParityLabel):
            raise SchemeError(f"plain label {t.label!r} in parity tree")
        p = t.label.priority
        z2 = {z: shift(r, p) for z, r in zenv.items()}
        return TNode(t.label, tuple(tr_tree(z2, c, d, depth - 1) for c in t.children))
    if isinstance(t, ExplSubst):
        children = []
        for r in range(1, d + 1):
            body = tr_tree({**zenv, t.binder: r}, t.body, d, depth - 2)
            z2 = {z: shift(s, r) for z, s in zenv.items()}
            bound = tr_tree(z2, t.bound, d, depth - 3)
            guard = _node(Player.EVE, r, (bound,), depth - 2)
            children.append(_node(Player.ADAM, 1, (body, guard), depth - 1))
        children.append(tr_tree({**zenv, t.binder: 2 * d}, t.body, d, depth - 1))
        return TNode(ParityLabel(Player.EVE, 1), tuple(children))
    raise SchemeError(f"unexpected tree {t!r}")


# ---------------------------------------------------------------------------
# finite-configuration winner oracle


def finite_game_oracle(
    g: RecursionScheme, node_budget: int = 5000, solver: str = "zielonka"
) -> Optional[Player]:
    """Winner at the root, computed without any order reduction.

    Closed ground terms are rewritten to head-normal form and memoized; if the
    set of reachable constructor terms closes within ``node_budget`` the game
    is solved directly.  Returns None when the budget is exceeded.
    """
    resolved: dict[Term, Node] = {}
    seen_terms = 0

    def resolve(m: Term) -> Optional[Node]:
        nonlocal seen_terms
        chain: list[Term] = []
        on_chain: set[Term] = set()
        while not isinstance(m, Node):
            if m in resolved:
                m = resolved[m]
                break
            if m in on_chain:
                raise UnproductiveCycle(f"term {m} rewrites to itself without a node")
            chain.append(m)
            on_chain.add(m)
            seen_terms += 1
            if seen_terms > node_budget:
                return None
            nxt = head_step(m, g)
            if nxt is None:
                raise SchemeError(f"stuck term {m}")
            m = nxt
        for c in chain:
            resolved[c] = m
        return m

    root = resolve(NT(g.start))
    if root is None:
        return None
    ids: dict[Node, int] = {root: 0}
    order = [root]
    succ: list[tuple[int, ...]] = []
    i = 0
    while i < len(order):
        node = order[i]
        i += 1
        if not node.children:
            raise ChildlessConstructor(f"node {node} has no children")
        out = []
        for c in node.children:
            cn = resolve(c)
            if cn is None:
                return None
            if cn not in ids:
                if len(ids) >= node_budget:
                    return None
                ids[cn] = len(order)
                order.append(cn)
            out.append(ids[cn])
        succ.append(tuple(out))
    game = ParityGame(
        tuple(n.label.owner for n in order),
        tuple(n.label.priority for n in order),
        tuple(succ),
        0,
    )
    if solver == "brute" and len(game) <= 12:
        sol = brute_force_solve(game)
    else:
        sol = solve_zielonka(game)
    return sol.winner[0]
