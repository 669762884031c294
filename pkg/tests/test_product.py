import pytest

from horsmc.automaton import Apt, epsilon_eliminate
from horsmc.core import (
    NT,
    O,
    OMEGA,
    App,
    Node,
    ParityLabel,
    Player,
    SchemeError,
    Var,
    app,
    arrow,
    check_scheme,
    max_arity,
    scheme_order,
    scheme_size,
)
from horsmc.normalize import is_strong_simple_form, to_strong_simple_form
from horsmc.product import NodeConstructorInPr, build_product, ddag_type, pr_term
from horsmc.syntax import parse_scheme

from conftest import APT_AUTOMATA, APT_PAIRS, APT_SCHEMES, load_automaton, load_scheme

# largest size ratio seen on the corpus is about 2.6
PRODUCT_SIZE_CONSTANT = 3

OO = arrow(O, O)


def automaton(existential=True, moves=(("q", 1),), states=("q",)):
    delta = {(q, "a", 1): tuple(moves) for q in states}
    delta.update({(q, OMEGA, 0): ((q, 0),) for q in states})
    eta = {(q, "a"): 4 for q in states}
    eta.update({(q, OMEGA): 2 for q in states})
    return Apt({"a": 1}, 1, states, set(states) if existential else set(), states[0], delta, eta)


def product_of(scheme, auto):
    g1, a1 = epsilon_eliminate(scheme, auto)
    g2, _ = to_strong_simple_form(g1)
    return g2, build_product(g2, a1)


class TestTypes:
    def test_examples(self):
        assert ddag_type(O, 3) == O
        assert ddag_type(OO, 2) == arrow(O, O, O)
        doubled = arrow(O, O, O)
        assert ddag_type(arrow(OO, O), 2) == arrow(doubled, doubled, O)

    def test_needs_a_state(self):
        with pytest.raises(ValueError):
            ddag_type(O, 0)


class TestPrTerm:
    def test_nonterminal_and_variable(self):
        assert pr_term("q0", NT("X"), ("q0", "q1")) == NT("X@q0")
        assert pr_term("q1", Var("y"), ("q0", "q1")) == Var("y@q1")

    def test_application_fans_out(self):
        out = pr_term("q0", App(NT("F"), NT("K")), ("q0", "q1"))
        assert out == app(NT("F@q0"), NT("K@q0"), NT("K@q1"))

    def test_node_rejected(self):
        with pytest.raises(NodeConstructorInPr):
            pr_term("q0", Node("a", ()), ("q0",))


class TestBuildProduct:
    def test_single_rule(self):
        g = parse_scheme("S : o. S -> [a, S].")
        out = build_product(g, automaton())
        assert out.rules == {"S@q": out.rules["S@q"]}
        assert out.rules["S@q"].body == Node(ParityLabel(Player.EVE, 4), (NT("S@q"),))
        assert out.start == "S@q"
        assert out.max_priority == 4

    def test_stay_move_restarts_rule(self):
        g = parse_scheme("S : o. F : o -> o. S -> F S. F x -> [a, x].")
        a = automaton(moves=(("q", 0), ("p", 1)), states=("q", "p"))
        out = build_product(g, a)
        rule = out.rules["F@q"]
        assert rule.params == ("x@q", "x@p")
        stay, down = rule.body.children
        assert stay == app(NT("F@q"), Var("x@q"), Var("x@p"))
        assert down == Var("x@p")
        check_scheme(out)

    def test_universal_state_is_adam(self):
        g = parse_scheme("S : o. S -> [a, S].")
        out = build_product(g, automaton(existential=False))
        assert out.rules["S@q"].body.label.owner is Player.ADAM

    def test_needs_strong_simple_form(self):
        g = parse_scheme("S : o. S -> [a, [a, S]].")
        with pytest.raises(SchemeError):
            build_product(g, automaton())

    @pytest.mark.parametrize("scheme, auto, _", APT_PAIRS, ids=[f"{s}-{a}" for s, a, _ in APT_PAIRS])
    def test_corpus_properties(self, scheme, auto, _):
        g = load_scheme(APT_SCHEMES[scheme])
        a = load_automaton(APT_AUTOMATA[auto])
        g2, prod = product_of(g, a)
        check_scheme(prod)
        assert prod.is_parity
        assert scheme_order(prod) == scheme_order(g2)
        assert is_strong_simple_form(prod)
        bound = PRODUCT_SIZE_CONSTANT * max(1, max_arity(g)) * scheme_size(g) * a.size ** 3
        assert scheme_size(prod) <= bound
