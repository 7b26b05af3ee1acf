import threading

import numpy as np
import pytest

from classes.Catalog import builtin, trivial
from classes.Errors import BudgetExceeded, HypothesisViolated, SearchCancelled, StepBudget
from classes.KrExpansion import (
    check_oracle, induced_hom, induced_squares_commute, kr_expand, kr_tower, oracle_classes, signature, words_up_to,
)
from classes.Analysis import check_almost_equidivisibility, is_V_morphism
from classes.OmegaTerms import XYZ_EQ_XZ
from classes.Semigroup import GeneratingMap, Homomorphism, is_group
from conftest import CORPUS, SMALL_CORPUS

# Exhaustive word checks stay below this many words
WORD_LIMIT = 100_000


def longest_length(alphabet_size: int, wanted: int) -> int:
    length = 1
    while length < wanted and alphabet_size ** (length + 1) <= WORD_LIMIT:
        length += 1
    return length


class TestSmallExpansions:
    def test_trivial_one_letter(self, trivial_a):
        S, gmap = trivial_a
        exp = kr_expand(S, gmap)
        assert exp.order == 2
        assert exp.result.names == ("[a]", "[aa]")
        assert exp.class_of_word((0, 0, 0)) == exp.class_of_word((0, 0))
        report = check_oracle(exp, 4)
        assert report.match
        assert report.oracle_classes == 2

    def test_trivial_two_letters(self, trivial_ab):
        S, gmap = trivial_ab
        exp = kr_expand(S, gmap)
        assert exp.order == 6
        # words of length >= 2 are classified by their first and last letters
        assert exp.class_of_word(gmap.parse_word("abba")) == exp.class_of_word(gmap.parse_word("aba"))
        assert exp.class_of_word(gmap.parse_word("ab")) != exp.class_of_word(gmap.parse_word("ba"))

    def test_signature_equality(self, trivial_a):
        S, gmap = trivial_a
        exp = kr_expand(S, gmap)
        c = exp.class_of_word((0, 0))
        assert exp.signature_of(c) == signature(exp.graph, (0, 0))

    def test_empty_word_is_identity(self, trivial_a):
        S, gmap = trivial_a
        exp = kr_expand(S, gmap)
        assert exp.class_of_word(()) == exp.result.I

    def test_semilattice_projection(self, sl):
        S, gmap = sl
        exp = kr_expand(S, gmap)
        assert exp.projection.is_surjective()
        assert is_V_morphism(exp.projection, [XYZ_EQ_XZ]).verdict


class TestBudget:
    def test_budget_exceeded(self, trivial_a):
        S, gmap = trivial_a
        with pytest.raises(BudgetExceeded):
            kr_expand(S, gmap, StepBudget(1))

    def test_cancellation(self, sl):
        event = threading.Event()
        event.set()
        S, gmap = sl
        with pytest.raises(SearchCancelled):
            kr_expand(S, gmap, StepBudget(1000, event))


@pytest.mark.parametrize("name", SMALL_CORPUS)
def test_oracle_equivalence(name):
    S, gmap = builtin(name)
    exp = kr_expand(S, gmap)
    L = longest_length(len(gmap), exp.order + 1)
    report = check_oracle(exp, L)
    assert report.match, report.witness
    if L >= max(len(w) for w in exp.representatives):
        assert report.oracle_classes == exp.order


@pytest.mark.parametrize("name", SMALL_CORPUS)
def test_projection_commutes_with_letter_maps(name):
    S, gmap = builtin(name)
    exp = kr_expand(S, gmap)
    L = longest_length(len(gmap), 6)
    for word in words_up_to(len(gmap), L):
        assert exp.projection(exp.class_of_word(word)) == gmap.evaluate(S, word)
    assert is_V_morphism(exp.projection, [XYZ_EQ_XZ]).verdict


@pytest.mark.parametrize("name", CORPUS)
def test_almost_equidivisibility(name):
    S, gmap = builtin(name)
    exp = kr_expand(S, gmap)
    if exp.order > 60:
        pytest.skip(f"expansion of order {exp.order}")
    report = check_almost_equidivisibility(exp)
    assert report.verdict, report.witness


def test_oracle_classes_group_words(trivial_ab):
    S, gmap = trivial_ab
    classes = oracle_classes(S, gmap, 3)
    assert len(classes) == 6
    assert sum(len(c) for c in classes) == 2 + 4 + 8


def test_words_up_to():
    assert words_up_to(2, 2) == [(0,), (1,), (0, 0), (0, 1), (1, 0), (1, 1)]
    assert words_up_to(1, 2, include_empty=True) == [(), (0,), (0, 0)]


class TestInducedHom:
    def test_identity(self, sl):
        S, gmap = sl
        exp = kr_expand(S, gmap)
        Lambda = induced_hom(exp, exp, Homomorphism.identity(S), {"a": "a", "b": "b"})
        assert np.array_equal(Lambda.map, np.arange(exp.order))

    def test_collapse_to_trivial(self, sl, trivial_ab):
        S, gmap = sl
        T, psi = trivial_ab
        exp_S = kr_expand(S, gmap)
        exp_T = kr_expand(T, psi)
        lam = Homomorphism(S, T, [0, 0])
        Lambda = induced_hom(exp_S, exp_T, lam, {"a": "a", "b": "b"})
        assert Lambda.is_surjective()
        assert induced_squares_commute(Lambda, exp_S, exp_T, lam, [(0,), (1,)])

    def test_hypothesis_checked(self):
        G, gmap = builtin("z2")
        exp = kr_expand(G, gmap)
        T = trivial()
        exp_T = kr_expand(T, GeneratingMap(("a",), (0,)))
        lam = Homomorphism(G, T, [0, 0])
        Lambda = induced_hom(exp, exp_T, lam, {"g": "a"})
        assert Lambda.source is exp.result
        with pytest.raises(HypothesisViolated):
            induced_hom(exp_T, exp, Homomorphism(T, G, [0]), {"a": "g"})


class TestTower:
    def test_semilattice_tower(self, sl):
        S, gmap = sl
        tower = kr_tower(S, gmap, 2)
        assert tower.complete
        assert tower.depth == 2
        assert tower.is_coherent()
        assert all(rho.is_surjective() for rho in tower.connecting)
        orders = tower.orders()
        assert orders[0] == 2 and orders[1] <= orders[2]

    def test_rho_and_compatible_tuples(self, sl):
        S, gmap = sl
        tower = kr_tower(S, gmap, 2)
        assert tower.rho(1, 1).equals(Homomorphism.identity(tower.semigroup(1)))
        word = gmap.parse_word("abab")
        t = tower.compatible_tuple(word)
        for n in range(1, tower.depth + 1):
            assert tower.rho(n, n - 1)(t[n]) == t[n - 1]
        assert tower.rho(2, 0)(t[2]) == t[0]

    def test_depth_zero(self, sl):
        S, gmap = sl
        tower = kr_tower(S, gmap, 0)
        assert tower.complete and tower.depth == 0

    def test_partial_tower_on_budget(self, sl):
        S, gmap = sl
        first = kr_expand(S, gmap)
        # exactly enough signature evaluations for the first level
        budget = StepBudget(len(gmap) * (first.order + 1))
        tower = kr_tower(S, gmap, 3, budget)
        assert not tower.complete
        assert tower.depth == 1
        assert tower.exhausted_at == 2
        assert tower.is_coherent()

    def test_group_expansion_is_not_a_group(self):
        G, gmap = builtin("z2")
        exp = kr_expand(G, gmap)
        assert not is_group(exp.result)
