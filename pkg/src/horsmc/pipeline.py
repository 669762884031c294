"""The decision procedure end to end, plus bounded cross-checks.

Parity mode: simple form, then one order reduction per order, then the
finite game.  Automaton mode first builds the product scheme.
"""

from __future__ import annotations

import time
from dataclasses import dataclass
from pathlib import Path
from typing import Callable, Optional

from .automaton import Apt, bounded_run_tree, epsilon_eliminate
from .core import (
    NT,
    Player,
    RecursionScheme,
    max_arity,
    scheme_order,
    scheme_size,
    is_simple_form,
)
from .game import SOLVERS, ParityGame, extract_game
from .normalize import to_simple_form, to_strong_simple_form
from .oracle import (
    bounded_bt,
    bounded_bt_ext,
    compare_resolved,
    expand,
    finite_game_oracle,
    tr_tree,
)
from .product import build_product
from .reduce import transform_scheme
from .syntax import parse_automaton, parse_scheme, render_scheme


class InvariantViolation(RuntimeError):
    pass


class StageError(Exception):
    def __init__(self, stage: str, cause: Exception):
        super().__init__(f"{stage}: {cause}")
        self.stage = stage
        self.cause = cause


@dataclass(frozen=True)
class StageStats:
    iteration: int
    order: int
    size: int
    arity: int
    d: int
    rules: int
    ms: float

    def line(self) -> str:
        return "\t".join(
            str(x)
            for x in (self.iteration, self.order, self.size, self.arity, self.d,
                      self.rules, f"{self.ms:.1f}")
        )


@dataclass
class PipelineConfig:
    scheme_path: str
    mode: str = "parity"
    automaton_path: Optional[str] = None
    dump_dir: Optional[str] = None
    oracle_depth: int = 6
    oracle_budget: int = 5000
    solver: str = "zielonka"
    stats_out: Optional[str] = None

    def __post_init__(self):
        if self.mode not in ("parity", "apt"):
            raise ValueError(f"unknown mode {self.mode!r}")
        if self.mode == "apt" and not self.automaton_path:
            raise ValueError("apt mode needs an automaton file")
        if self.solver not in SOLVERS:
            raise ValueError(f"unknown solver {self.solver!r}")


@dataclass
class PipelineResult:
    winner: Player
    verdict: str
    stats: list[StageStats]
    stages: list[tuple[str, RecursionScheme]]
    game: ParityGame


def _stats(i: int, g: RecursionScheme, ms: float) -> StageStats:
    return StageStats(i, scheme_order(g), scheme_size(g), max_arity(g),
                      g.max_priority or 0, len(g.rules), ms)


def _stage(name: str, fn, *args):
    try:
        return fn(*args)
    except (InvariantViolation, StageError):
        raise
    except Exception as e:  # noqa: BLE001 - re-raised with the stage name
        raise StageError(name, e) from e


def decide_parity(
    g: RecursionScheme,
    solver: str = "zielonka",
    transform: Callable[[RecursionScheme], RecursionScheme] = transform_scheme,
    stages: Optional[list] = None,
) -> tuple[Player, list[StageStats], ParityGame]:
    """Winner of the parity game on the tree generated by ``g``."""
    stages = stages if stages is not None else []
    t0 = time.perf_counter()
    g, _ = _stage("simple form", to_simple_form, g)
    stats = [_stats(0, g, (time.perf_counter() - t0) * 1000)]
    stages.append(("simple", g))
    n = scheme_order(g)
    for i in range(1, n + 1):
        t0 = time.perf_counter()
        before = scheme_order(g)
        g = _stage(f"reduction {i}", transform, g)
        ms = (time.perf_counter() - t0) * 1000
        if scheme_order(g) != before - 1:
            raise InvariantViolation(
                f"reduction {i} went from order {before} to {scheme_order(g)}"
            )
        if not is_simple_form(g):
            raise InvariantViolation(f"reduction {i} left simple form")
        stats.append(_stats(i, g, ms))
        stages.append((f"reduce{i}", g))
    game = _stage("extraction", extract_game, g)
    sol = _stage("solving", SOLVERS[solver], game)
    return sol.winner[game.root], stats, game


def product_scheme(g: RecursionScheme, a: Apt, stages: Optional[list] = None) -> RecursionScheme:
    """Product of ``g`` with ``a``: Eve wins its tree iff ``a`` accepts ``g``'s tree."""
    stages = stages if stages is not None else []
    g1, a1 = _stage("epsilon elimination", epsilon_eliminate, g, a)
    stages.append(("epsilon", g1))
    g2, _ = _stage("strong simple form", to_strong_simple_form, g1)
    stages.append(("strong", g2))
    prod = _stage("product", build_product, g2, a1)
    stages.append(("product", prod))
    return prod


def decide(
    g: RecursionScheme, automaton: Optional[Apt] = None, solver: str = "zielonka"
) -> PipelineResult:
    stages: list = [("input", g)]
    if automaton is None:
        if not g.is_parity:
            raise StageError("input", ValueError("parity mode needs [E p, ..]/[A p, ..] nodes"))
        winner, stats, game = decide_parity(g, solver, stages=stages)
        verdict = str(winner)
    else:
        if g.is_parity:
            raise StageError("input", ValueError("automaton mode needs plain labels"))
        prod = product_scheme(g, automaton, stages)
        winner, stats, game = decide_parity(prod, solver, stages=stages)
        verdict = "Accepted" if winner is Player.EVE else "Rejected"
    return PipelineResult(winner, verdict, stats, stages, game)


def dump_stage(g: RecursionScheme, path: str | Path) -> None:
    Path(path).write_text(render_scheme(g))


def run_pipeline(config: PipelineConfig) -> PipelineResult:
    g = parse_scheme(Path(config.scheme_path).read_text())
    a = None
    if config.mode == "apt":
        a = parse_automaton(Path(config.automaton_path).read_text())
    res = decide(g, a, config.solver)
    if config.dump_dir:
        out = Path(config.dump_dir)
        out.mkdir(parents=True, exist_ok=True)
        for i, (name, s) in enumerate(res.stages):
            dump_stage(s, out / f"{i:02d}-{name}.hors")
    if config.stats_out:
        header = "iter\torder\tsize\tarity\td\trules\tms"
        Path(config.stats_out).write_text(
            "\n".join([header] + [s.line() for s in res.stats]) + "\n"
        )
    return res


# ---------------------------------------------------------------------------
# cross-checks


@dataclass(frozen=True)
class Check:
    name: str
    passed: bool
    detail: str = ""


def _tree_check(name: str, a, b) -> Check:
    ok, shared = compare_resolved(a, b)
    if shared == 0:
        return Check(name, False, "no resolved positions in common")
    return Check(name, ok, f"{shared} shared positions")


def cross_check(
    g: RecursionScheme,
    automaton: Optional[Apt] = None,
    depth: int = 6,
    budget: int = 5000,
    transform: Callable[[RecursionScheme], RecursionScheme] = transform_scheme,
) -> list[Check]:
    """Bounded semantic checks of every stage plus oracle agreement."""
    checks: list[Check] = []
    if automaton is not None:
        stages: list = []
        prod = product_scheme(g, automaton, stages)
        g2 = dict(stages)["strong"]
        a1 = epsilon_eliminate(g, automaton)[1]
        run = bounded_run_tree(a1, a1.initial, bounded_bt(g2, NT(g2.start), depth), depth)
        checks.append(_tree_check("product run tree", bounded_bt(prod, NT(prod.start), depth), run))
        g = prod
    simple, _ = to_simple_form(g)
    checks.append(
        _tree_check(
            "simple form",
            bounded_bt(g, NT(g.start), depth),
            bounded_bt(simple, NT(simple.start), depth),
        )
    )
    cur = simple
    level = 0
    while scheme_order(cur) >= 1:
        level += 1
        start = NT(cur.start)
        ext = bounded_bt_ext(cur, start, 3 * depth)
        checks.append(
            _tree_check(f"ext expansion {level}", bounded_bt(cur, start, depth), expand(ext, depth))
        )
        nxt = transform(cur)
        ext = bounded_bt_ext(cur, start, depth)
        checks.append(
            _tree_check(
                f"ext transform {level}",
                tr_tree({}, ext, cur.max_priority, depth),
                bounded_bt(nxt, NT(nxt.start), depth),
            )
        )
        cur = nxt
    expected = finite_game_oracle(g, budget)
    if expected is not None:
        winner, _, _ = decide_parity(g, transform=transform)
        checks.append(
            Check("oracle winner", winner is expected, f"oracle {expected}, pipeline {winner}")
        )
    else:
        checks.append(Check("oracle winner", True, "oracle budget exceeded, skipped"))
    return checks
