import functools
import re
from pathlib import Path

import pytest

from horsmc.syntax import parse_automaton, parse_scheme

CORPUS = Path(__file__).parent / "corpus"

PARITY_FILES = sorted((CORPUS / "parity").glob("*.hors"))
APT_SCHEMES = {p.stem: p for p in (CORPUS / "apt").glob("*.hors")}
APT_AUTOMATA = {p.stem: p for p in (CORPUS / "apt").glob("*.apt")}
QACC_FILES = sorted((CORPUS / "qacc").glob("*.apt")) + sorted(APT_AUTOMATA.values())

# (scheme, automaton, verdict) -- verdicts worked out by hand, see the
# comments in the corpus files.
APT_PAIRS = [
    ("c_left_right", "some_branch_inf_a", "Accepted"),
    ("c_only_b", "some_branch_inf_a", "Rejected"),
    ("c_left_right", "all_branches_inf_a", "Rejected"),
    ("c_only_a", "all_branches_inf_a", "Accepted"),
    ("diverge", "some_branch_inf_a", "Rejected"),
    ("diverge", "some_branch_inf_a_or_diverge", "Accepted"),
    ("ab_order1", "b_after_a", "Accepted"),
    ("c_left_right", "b_after_a", "Rejected"),
    ("c_only_b", "b_after_a", "Accepted"),
    ("diverge", "b_after_a", "Rejected"),
    ("ab_two_args", "some_branch_inf_a", "Accepted"),
]


@functools.lru_cache(maxsize=None)
def load_scheme(path):
    return parse_scheme(Path(path).read_text())


@functools.lru_cache(maxsize=None)
def load_automaton(path):
    return parse_automaton(Path(path).read_text())


def expected_winner(path):
    m = re.search(r"-- expect: (\w+)", Path(path).read_text())
    return m.group(1) if m else None


@functools.lru_cache(maxsize=None)
def reduction_chain(path):
    """Simple form followed by every reduction round, computed once per run."""
    from horsmc.core import scheme_order
    from horsmc.normalize import to_simple_form
    from horsmc.reduce import transform_scheme

    g, _ = to_simple_form(load_scheme(path))
    chain = [g]
    while scheme_order(chain[-1]) > 0:
        chain.append(transform_scheme(chain[-1]))
    return tuple(chain)


def ids(paths):
    return [Path(p).stem for p in paths]


@pytest.fixture(params=PARITY_FILES, ids=ids(PARITY_FILES))
def corpus_path(request):
    return request.param
