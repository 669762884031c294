import pytest

from horsmc.core import Player
from horsmc.game import (
    ChildlessConstructor,
    GameError,
    ParityGame,
    Solution,
    TooLarge,
    UnproductiveCycle,
    brute_force_solve,
    certify,
    extract_game,
    solve_zielonka,
)
from horsmc.reduce import transform_scheme
from horsmc.syntax import parse_scheme

from games import exhaustive_games, random_games

E, A = Player.EVE, Player.ADAM


class TestExtraction:
    def test_self_loop(self):
        game = extract_game(parse_scheme("S : o. S -> [E 2, S]."))
        assert game == ParityGame((E,), (2,), ((0,),), 0)

    def test_unproductive_cycle(self):
        with pytest.raises(UnproductiveCycle):
            extract_game(parse_scheme("S : o. T : o. S -> T. T -> S."))

    def test_childless(self):
        with pytest.raises(ChildlessConstructor):
            extract_game(parse_scheme("S : o. S -> [E 2]."))

    def test_higher_order_rejected(self):
        with pytest.raises(GameError):
            extract_game(parse_scheme("S : o. F : o -> o. S -> F S. F x -> [E 1, x]."))

    def test_dereference_chains_collapse(self):
        g = parse_scheme("S : o. T : o. U : o. S -> T. T -> U. U -> [A 1, S, [E 2, T]].")
        game = extract_game(g)
        assert len(game) == 2
        assert game.succ[0] == (0, 1)

    def test_transformed_example(self):
        g = parse_scheme(
            """
            X : o. Y : o -> o. Z : o.
            X -> Y Z.
            Y z -> [E 1, z, [E 2, z]].
            Z -> [E 2, Z].
            """
        )
        game = extract_game(transform_scheme(g))
        # Eve declares 2 for Z and then keeps visiting priority 2
        assert solve_zielonka(game).winner[game.root] is E
        assert brute_force_solve(game).winner[game.root] is E

    def test_deterministic(self):
        g = parse_scheme("S : o. T : o. S -> [A 1, T, [E 2, S]]. T -> [E 1, S].")
        assert extract_game(g).dump() == extract_game(g).dump()


class TestSolvers:
    @pytest.mark.parametrize("solve", [solve_zielonka, brute_force_solve])
    def test_self_loops(self, solve):
        assert solve(ParityGame((A,), (2,), ((0,),))).winner == (E,)
        assert solve(ParityGame((E,), (1,), ((0,),))).winner == (A,)

    @pytest.mark.parametrize("solve", [solve_zielonka, brute_force_solve])
    def test_alternation(self, solve):
        assert solve(ParityGame((E, A), (1, 2), ((1,), (0,)))).winner == (E, E)

    def test_choice(self):
        # Eve at 0 can go to a good or a bad loop; Adam at 1 cannot avoid 3
        game = ParityGame((E, A, E, E), (1, 1, 3, 2), ((2, 3), (2,), (2,), (3,)))
        sol = solve_zielonka(game)
        assert sol.winner == (E, A, A, E)
        assert sol.strategy[0] == 3
        assert certify(game, sol)

    def test_too_large(self):
        game = ParityGame((E,) * 13, (2,) * 13, tuple((i,) for i in range(13)))
        with pytest.raises(TooLarge):
            brute_force_solve(game)
        assert brute_force_solve(game, max_vertices=13).winner == (E,) * 13

    def test_bad_games_rejected(self):
        with pytest.raises(ValueError):
            ParityGame((E,), (1,), ((),))
        with pytest.raises(ValueError):
            ParityGame((E,), (1,), ((1,),))

    def test_certify_rejects_wrong_answers(self):
        game = ParityGame((E, E), (2, 1), ((0, 1), (1,)))
        good = solve_zielonka(game)
        assert certify(game, good)
        assert not certify(game, Solution((A, A), {1: 1}))
        assert not certify(game, Solution((E, E), {0: 1}))

    @pytest.mark.parametrize("n", [1, 2])
    def test_exhaustive_small(self, n):
        for game in exhaustive_games(n):
            z = solve_zielonka(game)
            assert z.winner == brute_force_solve(game).winner
            assert certify(game, z)

    def test_random_agree_and_certify(self):
        for game in random_games(7, 300, range(3, 10), max_priority=5, max_out=3):
            z = solve_zielonka(game)
            b = brute_force_solve(game)
            assert z.winner == b.winner
            assert certify(game, z) and certify(game, b)
