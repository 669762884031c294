import itertools

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from horsmc.core import (
    NT,
    O,
    App,
    Arrow,
    RecursionScheme,
    Rule,
    SchemeError,
    Var,
    adam,
    arrow,
    check_scheme,
    eve,
    is_simple_form,
    order_of_type,
    scheme_order,
)
from horsmc.reduce import (
    BOT,
    TOP,
    NotParityScheme,
    NotSimpleForm,
    dag_name,
    dag_type,
    declarations,
    enumerate_decl_maps,
    fulfils,
    leader,
    rank,
    shift,
    tr_term,
    transform_scheme,
)
from horsmc.syntax import parse_scheme

from conftest import PARITY_FILES, ids, reduction_chain

OO = arrow(O, O)


def xyz():
    return parse_scheme(
        """
        X : o. Y : o -> o. Z : o.
        X -> Y Z.
        Y z -> [E 1, z, [E 2, z]].
        Z -> [E 2, Z].
        """
    )


def sty():
    return parse_scheme(
        """
        S : o. T : (o -> o) -> o. Y : o -> o. Z : o.
        S -> T Y.
        T y -> y Z.
        Y z -> [E 1, z].
        Z -> [E 2, Z].
        """
    )


class TestDeclarations:
    def test_declaration_sets(self):
        assert declarations(1) == (1, 2)
        assert declarations(2) == (1, 2, 4)
        assert declarations(3) == (1, 2, 3, 6)

    def test_rank_orders_odd_descending_then_even(self):
        assert sorted(range(1, 7), key=rank) == [5, 3, 1, 2, 4, 6]

    @pytest.mark.parametrize(
        "r, p, expected", [(3, 5, 6), (4, 4, 3), (2, 1, 2), (4, 2, 4), (1, 1, 1), (2, 2, 1)]
    )
    def test_shift(self, r, p, expected):
        assert shift(r, p) == expected

    def test_leader(self):
        assert leader(()) == 1
        assert leader((1, 4, 2)) == 4
        assert leader((1, 1, 1)) == 1

    def test_fulfils(self):
        assert fulfils((1, 4, 2), 3)
        assert not fulfils((1, 5, 4), 3)
        assert not fulfils((), 2)
        assert fulfils((), 1)

    @pytest.mark.parametrize("d", [1, 2, 3, 4])
    def test_nothing_fulfils_never(self, d):
        for n in range(4):
            for seq in itertools.product(range(1, d + 1), repeat=n):
                assert not fulfils(seq, 2 * d)

    @pytest.mark.parametrize("d", [1, 2, 3, 4])
    def test_shift_outside_declarations_means_never(self, d):
        # shift(r, d) can give d + 1; an even value above d acts like 2d
        for r in declarations(d):
            for p in range(1, d + 1):
                s = shift(r, p)
                if s not in declarations(d):
                    assert s % 2 == 0 and s > d
                    for n in range(3):
                        for seq in itertools.product(range(1, d + 1), repeat=n):
                            assert fulfils(seq, s) == fulfils(seq, 2 * d)

    def test_decl_maps(self):
        assert enumerate_decl_maps(0, 2) == ((),)
        assert enumerate_decl_maps(1, 2) == ((1,), (2,), (4,))
        assert enumerate_decl_maps(2, 1) == ((1, 1), (1, 2), (2, 1), (2, 2))

    def test_dag_name_lists_last_index_first(self):
        assert dag_name("X", ()) == "X$[]"
        assert dag_name("X", (1, 4)) == "X$[4,1]"


def types(max_leaves=6):
    return st.recursive(st.just(O), lambda t: st.builds(Arrow, t, t), max_leaves=max_leaves)


class TestDagType:
    def test_examples(self):
        assert dag_type(OO, 2) == O
        assert dag_type(arrow(OO, O), 2) == arrow(O, O, O, O)
        assert dag_type(O, 3) == O
        # (o -> o) -> o -> o: the trailing o goes, the leading one is tripled
        assert dag_type(arrow(OO, O, O), 2) == arrow(O, O, O, O)

    @settings(max_examples=200)
    @given(types(), st.integers(1, 3))
    def test_order_drops_by_one(self, t, d):
        assert order_of_type(dag_type(t, d)) == max(0, order_of_type(t) - 1)


class TestWorkedExamples:
    def test_xyz(self):
        out = transform_scheme(xyz())
        rules = {n: r.body for n, r in out.rules.items()}
        zp = NT("Z$[]")
        assert rules["X$[]"] == eve(
            1,
            adam(1, NT("Y$[1]"), eve(1, zp)),
            adam(1, NT("Y$[2]"), eve(2, zp)),
            NT("Y$[4]"),
        )
        top, bot = NT(TOP), NT(BOT)
        assert rules["Y$[1]"] == eve(1, top, eve(2, top))
        assert rules["Y$[2]"] == eve(1, bot, eve(2, top))
        assert rules["Y$[4]"] == eve(1, bot, eve(2, bot))
        assert rules["Z$[]"] == eve(2, zp)
        assert rules[BOT] == eve(1, NT(BOT))
        assert rules[TOP] == eve(2, NT(TOP))
        assert out.start == "X$[]"
        assert scheme_order(out) == 0

    def test_sty(self):
        out = transform_scheme(sty())
        ys = [NT(f"Y$[{r}]") for r in (1, 2, 4)]
        assert out.rules["S$[]"].body == App(App(App(NT("T$[]"), ys[0]), ys[1]), ys[2])
        t_rule = out.rules["T$[]"]
        assert t_rule.params == ("y$[1]", "y$[2]", "y$[4]")
        zp = NT("Z$[]")
        assert t_rule.body == eve(
            1,
            adam(1, Var("y$[1]"), eve(1, zp)),
            adam(1, Var("y$[2]"), eve(2, zp)),
            Var("y$[4]"),
        )
        assert out.types["T$[]"] == arrow(O, O, O, O)
        assert out.rules["Y$[1]"].body == eve(1, NT(TOP))

    def test_tr_term_directly(self):
        body = eve(1, Var("z"), eve(2, Var("z")))
        g = xyz()
        assert tr_term((), {"z": 1}, body, 2, g) == eve(1, NT(TOP), eve(2, NT(TOP)))
        assert tr_term((), {"z": 2}, body, 2, g) == eve(1, NT(BOT), eve(2, NT(TOP)))
        assert tr_term((), {"z": 4}, body, 2, g) == eve(1, NT(BOT), eve(2, NT(BOT)))


class TestRejections:
    def test_not_simple(self):
        g = parse_scheme(
            """
            S : o. F : o -> o.
            S -> F (F (F S)).
            F x -> [E 1, x].
            """
        )
        with pytest.raises(NotSimpleForm):
            transform_scheme(g)

    def test_not_parity(self):
        g = parse_scheme("S : o. F : o -> o. S -> F S. F x -> [a, x].")
        with pytest.raises(NotParityScheme):
            transform_scheme(g)

    def test_order_zero(self):
        with pytest.raises(SchemeError):
            transform_scheme(parse_scheme("S : o. S -> [E 1, S]."))

    def test_reserved_names(self):
        g = RecursionScheme(
            {"S": O, "Top": OO},
            {"S": Rule((), App(NT("Top"), NT("S"))), "Top": Rule(("x",), eve(1, Var("x")))},
            "S",
            1,
        )
        # Top$[..] never collides, only a literal Top would
        out = transform_scheme(g)
        assert "Top$[]" not in out.rules and TOP in out.rules


class TestCorpus:
    @pytest.mark.parametrize("path", PARITY_FILES, ids=ids(PARITY_FILES))
    def test_rounds(self, path):
        chain = reduction_chain(path)
        for before, after in zip(chain, chain[1:]):
            assert scheme_order(after) == scheme_order(before) - 1
            assert is_simple_form(after)
            check_scheme(after)
            assert after.max_priority == max(before.max_priority, 2)
