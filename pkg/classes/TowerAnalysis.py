import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import List, Optional, Tuple

import numpy as np

from .KrExpansion import KrTower, words_up_to
from .Semigroup import Word, minimal_ideal, omega_power
from .globals import timing_decorator

logger = logging.getLogger('TowerAnalysis')

# levels run side by side; each holds only its word classes
LSC_WORKERS = 2


@dataclass(frozen=True)
class AbsorptionLevel:
    level: int
    idempotent: int
    words_checked: int
    absorbs: bool
    in_minimal_ideal: bool
    witness: Optional[Word] = None

    @property
    def passed(self) -> bool:
        return self.absorbs and self.in_minimal_ideal


@dataclass(frozen=True)
class AbsorptionReport:
    letter: str
    max_length: int
    levels: List[AbsorptionLevel]

    @property
    def passed(self) -> bool:
        return all(level.passed for level in self.levels)


def _short_word_classes(tower: KrTower, n: int, max_length: int) -> List[Tuple[int, Word]]:
    """Distinct classes of words with |w| <= max_length at level n, with the first word found."""
    S, gmap = tower.levels[n]
    table = S.monoid_table
    found = {S.I: ()}
    frontier = [(S.I, ())]
    for _ in range(max_length):
        next_frontier = []
        for c, w in frontier:
            for a, g in enumerate(gmap.images):
                d = int(table[c, g])
                if d not in found:
                    found[d] = w + (a,)
                    next_frontier.append((d, w + (a,)))
        frontier = next_frontier
    return sorted(found.items(), key=lambda item: (len(item[1]), item[1]))


@timing_decorator
def check_absorption(tower: KrTower, letter: str, max_length: int) -> AbsorptionReport:
    """
    At every level n, with z the ω-power of the class of `letter`, check
    z·[w]·z = z for all words |w| <= max_length (the empty word included)
    and that z lies in the minimal ideal.
    """
    b = tower.gmap.letter_index(letter)
    levels = []
    for n in range(tower.depth + 1):
        S, gmap = tower.levels[n]
        z = omega_power(S, gmap.images[b])
        classes = _short_word_classes(tower, n, max_length)
        witness = None
        for c, w in classes:
            if S.mul(S.mul(z, c), z) != z:
                witness = w
                break
        in_ideal = z in set(minimal_ideal(S))
        levels.append(AbsorptionLevel(n, z, len(classes), witness is None, in_ideal, witness))
        if witness is not None:
            logger.warning(f"Level {n}: [{letter}]^ω does not absorb {gmap.format_word(witness)}")
    return AbsorptionReport(letter, max_length, levels)


@dataclass(frozen=True)
class LscLevel:
    level: int
    order: int
    right_violations: int
    left_violations: int
    example: Optional[Tuple[str, Word, int, Word, int]] = None

    @property
    def total(self) -> int:
        return self.right_violations + self.left_violations


@dataclass(frozen=True)
class TowerLscReport:
    max_length: int
    levels: List[LscLevel]
    # word-bounded probe of a property of the limit
    approximate: bool = True

    def counts(self) -> List[int]:
        return [level.total for level in self.levels]


def _lsc_level(tower: KrTower, n: int, max_length: int) -> LscLevel:
    """
    Pairs (word, letter) are bucketed by (class, letter). Two pairs collide
    when their products agree and their buckets differ, so a product group
    of size m split into buckets b_i contributes m² - Σ b_i² ordered tuples.
    """
    S, gmap = tower.levels[n]
    mt = S.monoid_table
    words = words_up_to(len(gmap), max_length, include_empty=True)
    cls = np.array([tower.class_of_word(n, w) if w else S.I for w in words], dtype=np.int64)
    letters = np.array(gmap.images, dtype=np.int64)
    k = len(letters)
    keys = cls[:, None] * k + np.arange(k)[None, :]
    buckets, first_pair, sizes = np.unique(keys.ravel(), return_index=True, return_counts=True)
    bucket_cls, bucket_letter = buckets // k, buckets % k
    counts = {}
    example = None
    for side in ("right", "left"):
        if side == "right":
            product = mt[bucket_cls, letters[bucket_letter]]
        else:
            product = mt[letters[bucket_letter], bucket_cls]
        _, group = np.unique(product, return_inverse=True)
        group = group.ravel()
        group_size = np.bincount(group, weights=sizes).astype(np.int64)
        group_buckets = np.bincount(group)
        counts[side] = int((group_size ** 2).sum() - (sizes.astype(np.int64) ** 2).sum())
        if example is None and counts[side]:
            colliding = np.nonzero(group_buckets[group] > 1)[0]
            i = colliding[np.argmin(first_pair[colliding])]
            others = colliding[(group[colliding] == group[i]) & (colliding != i)]
            j = others[np.argmin(first_pair[others])]
            u, a = divmod(int(first_pair[i]), k)
            v, b = divmod(int(first_pair[j]), k)
            example = (side, words[u], a, words[v], b)
    return LscLevel(n, S.order, counts["right"], counts["left"], example)


@timing_decorator
def check_tower_lsc(tower: KrTower, max_length: int) -> TowerLscReport:
    """
    Count, at every level, the ordered tuples (u, a, v, b) of words
    |u|, |v| <= max_length (empty included) and letters a, b with
    [ua] = [vb] but a != b or [u] != [v], plus the left-sided dual.
    """
    with ThreadPoolExecutor(max_workers=LSC_WORKERS) as pool:
        levels = list(pool.map(lambda n: _lsc_level(tower, n, max_length), range(tower.depth + 1)))
    for level in levels:
        logger.debug(f"Level {level.level}: {level.total} cancellation violations")
    return TowerLscReport(max_length, levels)
