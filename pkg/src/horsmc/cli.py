"""Command-line driver.

Exit codes: 0 Eve wins / accepted, 1 Adam wins / rejected, 2 input error,
3 internal invariant violation (including failed ``--check``).
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path
from typing import Optional, Sequence

from .core import Player, SchemeError
from .game import SOLVERS
from .pipeline import (
    InvariantViolation,
    PipelineConfig,
    StageError,
    cross_check,
    run_pipeline,
)
from .syntax import parse_automaton, parse_scheme

EXIT_WIN, EXIT_LOSE, EXIT_INPUT, EXIT_INVARIANT = 0, 1, 2, 3


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="horsmc",
        description="Decide parity games and automaton acceptance on trees "
        "generated by higher-order recursion schemes.",
    )
    p.add_argument("scheme", help="scheme file")
    p.add_argument("--mode", choices=("parity", "apt"), default=None,
                   help="parity (default) or apt; apt is implied by --automaton")
    p.add_argument("--automaton", help="automaton file (apt mode)")
    p.add_argument("--dump-stages", metavar="DIR", help="write every intermediate scheme to DIR")
    p.add_argument("--oracle-depth", type=int, default=6, metavar="N")
    p.add_argument("--oracle-budget", type=int, default=5000, metavar="N")
    p.add_argument("--solver", choices=sorted(SOLVERS), default="zielonka")
    p.add_argument("--stats", metavar="FILE", help="per-stage statistics (tab-separated)")
    p.add_argument("--dump-game", metavar="FILE", help="write the final parity game")
    p.add_argument("--check", action="store_true",
                   help="also run bounded cross-checks against the oracle")
    return p


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    mode = args.mode or ("apt" if args.automaton else "parity")
    try:
        config = PipelineConfig(
            scheme_path=args.scheme,
            mode=mode,
            automaton_path=args.automaton,
            dump_dir=args.dump_stages,
            oracle_depth=args.oracle_depth,
            oracle_budget=args.oracle_budget,
            solver=args.solver,
            stats_out=args.stats,
        )
        result = run_pipeline(config)
    except InvariantViolation as e:
        print(f"invariant violation: {e}", file=sys.stderr)
        return EXIT_INVARIANT
    except (StageError, SchemeError, ValueError, OSError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_INPUT
    print(result.verdict)
    if args.dump_game:
        Path(args.dump_game).write_text(result.game.dump())
    if args.check:
        g = parse_scheme(Path(args.scheme).read_text())
        a = parse_automaton(Path(args.automaton).read_text()) if mode == "apt" else None
        checks = cross_check(g, a, args.oracle_depth, args.oracle_budget)
        for c in checks:
            print(f"{'PASS' if c.passed else 'FAIL'} {c.name}: {c.detail}")
        if not all(c.passed for c in checks):
            return EXIT_INVARIANT
    return EXIT_WIN if result.winner is Player.EVE else EXIT_LOSE


if __name__ == "__main__":
    sys.exit(main())
