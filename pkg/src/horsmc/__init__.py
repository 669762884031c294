"""Model checking of higher-order recursion schemes by order reduction."""

from .automaton import Apt, compute_qacc, epsilon_eliminate, validate
from .core import (
    NT,
    O,
    App,
    Arrow,
    Node,
    ParityLabel,
    Player,
    RecursionScheme,
    Rule,
    Var,
    app,
    adam,
    eve,
)
from .game import ParityGame, brute_force_solve, extract_game, solve_zielonka
from .normalize import to_simple_form, to_strong_simple_form
from .pipeline import decide, run_pipeline
from .product import build_product
from .reduce import transform_scheme
from .syntax import parse_automaton, parse_scheme, render_scheme

__all__ = [
    "Apt", "compute_qacc", "epsilon_eliminate", "validate",
    "NT", "O", "App", "Arrow", "Node", "ParityLabel", "Player", "RecursionScheme",
    "Rule", "Var", "app", "adam", "eve",
    "ParityGame", "brute_force_solve", "extract_game", "solve_zielonka",
    "to_simple_form", "to_strong_simple_form", "decide", "run_pipeline",
    "build_product", "transform_scheme", "parse_automaton", "parse_scheme",
    "render_scheme",
]
