import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from classes.Catalog import builtin, chain, cyclic_group, null_semigroup, rectangular_band, semilattice, zero_group
from classes.Errors import (
    IndexOutOfRange, NonAssociative, NotACongruence, NotAGroup, NotAHomomorphism, NotAnIdeal, NotASubsemigroup,
    NotGenerating, NotWellDefined, ParseError, UnknownLetter,
)
from classes.Semigroup import (
    GeneratingMap, Homomorphism, adjoin_identity, adjoin_zero, find_identity, from_table, greens,
    hom_from_generator_images, idempotent_exponent, idempotents, identity_generating_map,
    irredundant_generating_map, is_aperiodic, is_band, is_completely_simple, is_group, is_monoid,
    is_union_of_groups, minimal_ideal, omega_power, quotient, rees_matrix, rees_quotient, subsemigroup,
)
from conftest import CORPUS


def brute_force_ideal(S, x):
    mt = S.monoid_table
    return {int(mt[mt[l, x], r]) for l in range(S.order + 1) for r in range(S.order + 1)}


class TestFromTable:
    def test_valid_table(self):
        S = from_table([[0, 1], [1, 1]], ["a", "b"])
        assert S.order == 2
        assert S.name(S.I) == "I"
        assert S.mul(0, 1) == 1
        assert S.index("b") == 1

    def test_not_square(self):
        with pytest.raises(ParseError):
            from_table([[0, 1], [1, 0], [0, 0]])

    def test_entry_out_of_range(self):
        with pytest.raises(IndexOutOfRange) as exc:
            from_table([[0, 2], [1, 1]])
        assert exc.value.witness == (0, 1, 2)

    def test_non_associative_witness(self):
        with pytest.raises(NonAssociative) as exc:
            from_table([[1, 0], [0, 0]])
        x, y, z = exc.value.witness
        t = np.array([[1, 0], [0, 0]])
        assert t[t[x, y], z] != t[x, t[y, z]]

    def test_duplicate_names(self):
        with pytest.raises(ParseError):
            from_table([[0, 1], [1, 1]], ["a", "a"])

    def test_unknown_name(self):
        S = semilattice()
        with pytest.raises(IndexOutOfRange):
            S.index("zz")


class TestConstructions:
    def test_adjoin_identity_on_a_monoid_is_fresh(self):
        G = cyclic_group(2)
        GI = adjoin_identity(G)
        assert GI.order == 3
        assert GI.identity_index == 2
        assert GI.names[2] == "I"
        assert find_identity(GI) == 2
        assert GI.mul(0, 2) == 0

    def test_adjoin_zero(self):
        S = adjoin_zero(cyclic_group(3))
        assert S.names == ("1", "g", "g2", "0")
        assert all(S.mul(3, x) == 3 and S.mul(x, 3) == 3 for x in range(4))

    def test_rees_matrix_requires_a_group(self):
        with pytest.raises(NotAGroup):
            rees_matrix(semilattice(), [[0]])

    def test_rees_matrix_is_completely_simple(self):
        S, _ = builtin("rm_z2")
        assert S.order == 8
        assert is_completely_simple(S)
        assert not is_band(S)
        assert is_union_of_groups(S)

    def test_rectangular_band(self):
        S = rectangular_band(2, 3)
        assert S.order == 6
        assert is_band(S)
        assert S.mul(S.index("(0,1)"), S.index("(1,2)")) == S.index("(0,2)")


class TestPredicates:
    def test_group_and_monoid(self):
        assert is_group(cyclic_group(3))
        assert not is_group(zero_group(2))
        assert is_monoid(zero_group(2))
        assert not is_monoid(null_semigroup())

    def test_aperiodic(self):
        assert is_aperiodic(chain(3))
        assert not is_aperiodic(cyclic_group(2))

    def test_idempotents(self):
        assert idempotents(zero_group(2)) == [0, 2]
        assert idempotents(null_semigroup()) == [1]


class TestOmegaPowers:
    def test_cyclic_group(self):
        G = cyclic_group(3)
        assert omega_power(G, 1) == 0
        assert omega_power(G, 1, 1) == 1
        assert omega_power(G, 1, 2) == 2
        assert omega_power(G, 1, -1) == 2

    def test_virtual_identity_is_fixed(self):
        G = cyclic_group(2)
        assert omega_power(G, G.I, 3) == G.I

    def test_null_semigroup(self):
        S = null_semigroup()
        assert omega_power(S, 0) == 1
        assert S.power(0, 1) == 0
        assert S.power(0, 2) == 1

    @settings(max_examples=60, deadline=None)
    @given(name=st.sampled_from(CORPUS), data=st.data())
    def test_omega_laws(self, name, data):
        S, _ = builtin(name)
        s = data.draw(st.integers(0, S.order - 1))
        k = data.draw(st.integers(1, 6))
        e = omega_power(S, s)
        assert S.mul(e, e) == e
        assert S.power(s, idempotent_exponent(S)) == e
        assert omega_power(S, s, k) == S.mul(e, S.power(s, k))
        assert S.mul(omega_power(S, s, 1), e) == omega_power(S, s, 1)

    @settings(max_examples=60, deadline=None)
    @given(name=st.sampled_from(CORPUS), data=st.data())
    def test_negative_exponents_invert(self, name, data):
        S, _ = builtin(name)
        s = data.draw(st.integers(0, S.order - 1))
        k = data.draw(st.integers(-6, 6))
        e = omega_power(S, s)
        product = S.mul(omega_power(S, s, k), omega_power(S, s, -k))
        assert product == e
        assert S.mul(product, e) == e


class TestGreens:
    def test_zero_group(self):
        S = zero_group(2)
        g = greens(S)
        assert g.j_classes == [[0, 1], [2]]
        assert g.regular == [True, True]
        assert g.is_j_below(2, 0) and not g.is_j_below(0, 2)
        assert g.check_invariants()

    def test_minimal_ideal(self):
        assert minimal_ideal(semilattice()) == [1]
        assert minimal_ideal(rectangular_band(2, 2)) == [0, 1, 2, 3]
        assert minimal_ideal(zero_group(3)) == [3]

    @settings(max_examples=30, deadline=None)
    @given(name=st.sampled_from(CORPUS))
    def test_j_classes_match_brute_force(self, name):
        S, _ = builtin(name)
        g = greens(S)
        ideals = [frozenset(brute_force_ideal(S, x)) for x in range(S.order)]
        for x in range(S.order):
            for y in range(S.order):
                assert (g.j_of[x] == g.j_of[y]) == (ideals[x] == ideals[y])
                assert bool(g.divides[x, y]) == (y in ideals[x])
        assert g.check_invariants()


class TestSubsemigroupsAndQuotients:
    def test_subsemigroup(self):
        S = zero_group(2)
        sub, incl = subsemigroup(S, [0, 2])
        assert sub.names == ("1", "0")
        assert list(incl.map) == [0, 2]

    def test_not_a_subsemigroup(self):
        with pytest.raises(NotASubsemigroup) as exc:
            subsemigroup(zero_group(2), [1])
        assert exc.value.witness == (1, 1)

    def test_quotient_rejects_non_congruence(self):
        with pytest.raises(NotACongruence):
            quotient(zero_group(2), [[1, 2], [0]])

    def test_quotient_onto_trivial(self):
        S = zero_group(2)
        Q, q = quotient(S, [[0, 1, 2]])
        assert Q.order == 1
        assert q.is_surjective()

    def test_rees_quotient(self):
        S = chain(3)
        Q, q = rees_quotient(S, [1, 2])
        assert Q.names == ("a", "0")
        assert list(q.map) == [0, 1, 1]
        assert Q.mul(0, 1) == 1

    def test_rees_quotient_needs_an_ideal(self):
        with pytest.raises(NotAnIdeal) as exc:
            rees_quotient(chain(3), [0])
        assert exc.value.witness == (0, 1)


class TestHomomorphisms:
    def test_not_well_defined(self):
        Z2, Z3 = cyclic_group(2), cyclic_group(3)
        gmap = GeneratingMap(("g",), (1,))
        with pytest.raises(NotWellDefined):
            hom_from_generator_images(Z2, gmap, Z3, {"g": "g"})

    def test_collapse_to_trivial(self):
        S, gmap = builtin("sl")
        T, _ = builtin("trivial")
        h = hom_from_generator_images(S, gmap, T, {"a": "e", "b": "e"})
        assert list(h.map) == [0, 0]

    def test_group_hom(self):
        Z2 = cyclic_group(2)
        Z2_0 = zero_group(2)
        h = hom_from_generator_images(Z2, GeneratingMap(("g",), (1,)), Z2_0, [1])
        assert list(h.map) == [0, 1]
        assert h.is_injective()

    def test_not_generating(self):
        S = zero_group(2)
        with pytest.raises(NotGenerating):
            hom_from_generator_images(S, GeneratingMap(("g",), (1,)), S, [1])

    @settings(max_examples=30, deadline=None)
    @given(name=st.sampled_from(CORPUS))
    def test_quotient_by_j_order_ideal_is_a_homomorphism(self, name):
        S, _ = builtin(name)
        ideal = minimal_ideal(S)
        Q, q = rees_quotient(S, ideal)
        for x in range(S.order):
            for y in range(S.order):
                assert q(S.mul(x, y)) == Q.mul(q(x), q(y))
        composed = Homomorphism.identity(Q).compose(q)
        assert composed.equals(q)

    def test_compose_needs_matching_semigroups(self):
        with pytest.raises(NotAHomomorphism):
            Homomorphism.identity(cyclic_group(2)).compose(Homomorphism.identity(chain(2)))
        composed = Homomorphism.identity(semilattice()).compose(Homomorphism.identity(semilattice()))
        assert composed.map.tolist() == [0, 1]


class TestGeneratingMaps:
    def test_parse_and_format(self):
        gmap = GeneratingMap(("a", "b"), (0, 1))
        assert gmap.parse_word("abba") == (0, 1, 1, 0)
        assert gmap.parse_word("a b") == (0, 1)
        assert gmap.format_word((1, 0)) == "ba"
        assert gmap.format_word(()) == "I"

    def test_unknown_letter(self):
        gmap = GeneratingMap(("a",), (0,))
        with pytest.raises(UnknownLetter):
            gmap.parse_word("ab")

    def test_evaluate(self):
        S = semilattice()
        gmap = GeneratingMap(("a", "b"), (0, 1))
        assert gmap.evaluate(S, (0, 0)) == 0
        assert gmap.evaluate(S, (0, 1, 0)) == 1
        assert gmap.evaluate(S, ()) == S.I

    def test_validate(self):
        S = zero_group(2)
        with pytest.raises(NotGenerating):
            GeneratingMap(("g",), (1,)).validate(S)
        GeneratingMap(("g", "z"), (1, 2)).validate(S)

    def test_irredundant(self):
        S = zero_group(2)
        gmap = irredundant_generating_map(S)
        assert gmap.alphabet == ("g", "0")
        assert identity_generating_map(S).alphabet == ("1", "g", "0")
