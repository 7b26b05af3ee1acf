import pytest

from classes.Catalog import trivial
from classes.Errors import UnknownLetter
from classes.KrExpansion import kr_tower, words_up_to
from classes.Semigroup import GeneratingMap, minimal_ideal
from classes.TowerAnalysis import check_absorption, check_tower_lsc


@pytest.fixture
def sl_tower(sl):
    S, gmap = sl
    return kr_tower(S, gmap, 2)


class TestAbsorption:
    def test_minimum_absorbs_short_words(self, sl_tower):
        report = check_absorption(sl_tower, "b", 6)
        assert report.passed
        assert [level.level for level in report.levels] == [0, 1, 2]
        for level in report.levels:
            assert level.absorbs and level.in_minimal_ideal
            assert level.words_checked >= 2
            assert level.idempotent in minimal_ideal(sl_tower.semigroup(level.level))

    def test_top_element_does_not_absorb(self, sl_tower):
        report = check_absorption(sl_tower, "a", 3)
        assert not report.passed
        base = report.levels[0]
        # [a]^ω = a, and a·b·a = b
        assert not base.absorbs
        assert base.witness == (1,)
        assert not base.in_minimal_ideal

    def test_unknown_letter(self, sl_tower):
        with pytest.raises(UnknownLetter):
            check_absorption(sl_tower, "c", 3)


class TestTowerCancellation:
    def test_counts_drop_above_the_base(self, sl_tower):
        report = check_tower_lsc(sl_tower, 2)
        counts = report.counts()
        assert len(counts) == 3
        assert counts[0] > 0
        assert all(c < counts[0] for c in counts[1:])
        assert report.approximate

    def test_base_example_is_a_collision(self, sl_tower):
        report = check_tower_lsc(sl_tower, 2)
        side, u, a, v, b = report.levels[0].example
        S, gmap = sl_tower.levels[0]
        word_u = u + (a,) if side == "right" else (a,) + u
        word_v = v + (b,) if side == "right" else (b,) + v
        assert gmap.evaluate(S, word_u) == gmap.evaluate(S, word_v)
        assert a != b or gmap.evaluate(S, u) != gmap.evaluate(S, v)

    def test_level_orders(self, sl_tower):
        report = check_tower_lsc(sl_tower, 1)
        assert [level.order for level in report.levels] == sl_tower.orders()

    def test_counts_match_pairwise_comparison(self, sl_tower):
        report = check_tower_lsc(sl_tower, 3)
        for level in report.levels:
            S, gmap = sl_tower.levels[level.level]
            words = words_up_to(len(gmap), 3, include_empty=True)
            pairs = [(sl_tower.class_of_word(level.level, w) if w else S.I, a)
                     for w in words for a in range(len(gmap))]
            mt = S.monoid_table
            right = left = 0
            for c, a in pairs:
                for d, b in pairs:
                    if (c, a) == (d, b):
                        continue
                    right += mt[c, gmap.images[a]] == mt[d, gmap.images[b]]
                    left += mt[gmap.images[a], c] == mt[gmap.images[b], d]
            assert (level.right_violations, level.left_violations) == (right, left)

    def test_wide_alphabet_at_default_length(self):
        S = trivial()
        gmap = GeneratingMap(("a", "b", "c", "d"), (0, 0, 0, 0))
        report = check_tower_lsc(kr_tower(S, gmap, 0), 6)
        # 5461 words: the empty one lands in class I, the rest in 0; every product is 0
        pairs, empty, nonempty = 5461 * 4, 1, 5460
        expected = pairs ** 2 - 4 * empty ** 2 - 4 * nonempty ** 2
        assert report.levels[0].right_violations == expected
        assert report.levels[0].left_violations == expected
        assert report.levels[0].example == ("right", (), 0, (), 1)
