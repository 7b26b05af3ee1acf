import itertools
import logging
from collections import deque
from dataclasses import dataclass
from typing import Dict, FrozenSet, List, Optional, Sequence, Tuple, Union

import numpy as np

from .CayleyGraph import TwoSidedCayleyGraph, build
from .Errors import BudgetExceeded, HypothesisViolated, NotAHomomorphism, StepBudget
from .PerformanceMonitor import performance_monitor
from .Semigroup import FiniteSemigroup, GeneratingMap, Homomorphism, Word, from_table
from .globals import DEFAULT_BUDGET, timing_decorator

logger = logging.getLogger('KrExpansion')


@dataclass(frozen=True)
class KrSignature:
    """(φ(u), T(p_u)); two words are ≡_φ-equivalent iff their signatures agree."""
    image: int
    tset: FrozenSet[int]


def signature(graph: TwoSidedCayleyGraph, word: Sequence[int]) -> KrSignature:
    return KrSignature(graph.gmap.evaluate(graph.S, word), graph.transition_set(word))


def _signature_key(graph: TwoSidedCayleyGraph, word: Sequence[int]) -> Tuple[int, int]:
    return graph.gmap.evaluate(graph.S, word), graph.transition_bits(word)


class KrExpansion:
    """
    Finite quotient S_φ^KR = A+/≡_φ.

    Elements are classes in BFS discovery order; `representatives[c]` is the
    word that discovered class c and `right[c, a]` is the class of
    representatives[c]·a.
    """

    def __init__(self, graph: TwoSidedCayleyGraph, result: FiniteSemigroup, letter_map: Sequence[int],
                 projection: Homomorphism, representatives: List[Word], keys: List[Tuple[int, int]],
                 right: np.ndarray):
        self.graph = graph
        self.base = graph.S
        self.gmap = graph.gmap
        self.result = result
        self.letter_map = tuple(int(c) for c in letter_map)
        self.projection = projection
        self.representatives = representatives
        self._keys = keys
        self.right = right
        self.right.setflags(write=False)

    @property
    def order(self) -> int:
        return self.result.order

    @property
    def generating_map(self) -> GeneratingMap:
        """φ^KR on letters, as a generating map of the expansion."""
        return GeneratingMap(self.gmap.alphabet, self.letter_map)

    def signature_of(self, c: int) -> KrSignature:
        image, bits = self._keys[c]
        return KrSignature(image, self.graph.edges_of_bits(bits))

    def class_of_word(self, word: Sequence[int]) -> int:
        """φ^KR(u); the empty word gives the virtual identity."""
        word = tuple(int(a) for a in word)
        if not word:
            return self.result.order
        c = self.letter_map[word[0]]
        for a in word[1:]:
            c = int(self.right[c, a])
        return c

    def representative_text(self, c: int) -> str:
        return self.gmap.format_word(self.representatives[c])

    def __repr__(self):
        return f"KrExpansion(order={self.order}, base={self.base.order}, letters={len(self.gmap)})"


@timing_decorator
def kr_expand(S: FiniteSemigroup, gmap: GeneratingMap, budget: Optional[StepBudget] = None,
              graph: Optional[TwoSidedCayleyGraph] = None) -> KrExpansion:
    """
    Compute S_φ^KR by breadth-first search over signatures, starting from
    the letters. Each step evaluates the signature of a representative
    extended by one letter; every evaluation spends one budget step.

    Raises:
        NotGenerating: the letters do not generate S
        BudgetExceeded: the step budget ran out
    """
    graph = graph if graph is not None else build(S, gmap)
    budget = budget if budget is not None else StepBudget(DEFAULT_BUDGET)

    index: Dict[Tuple[int, int], int] = {}
    keys: List[Tuple[int, int]] = []
    representatives: List[Word] = []
    queue = deque()
    evaluations = 0

    def intern(word: Word) -> int:
        nonlocal evaluations
        budget.spend()
        evaluations += 1
        key = _signature_key(graph, word)
        c = index.get(key)
        if c is None:
            c = len(keys)
            index[key] = c
            keys.append(key)
            representatives.append(word)
            queue.append(c)
        return c

    try:
        letter_map = [intern((a,)) for a in range(len(gmap))]
        right_rows = []
        while queue:
            c = queue.popleft()
            right_rows.append([intern(representatives[c] + (a,)) for a in range(len(gmap))])
    finally:
        performance_monitor.add_signatures(evaluations)

    right = np.array(right_rows, dtype=np.int64)
    N = len(keys)
    table = np.empty((N, N), dtype=np.int64)
    for d, word in enumerate(representatives):
        col = np.arange(N)
        for a in word:
            col = right[col, a]
        table[:, d] = col

    names = [f"[{gmap.format_word(w)}]" for w in representatives]
    result = from_table(table, names, generators=letter_map)
    projection = Homomorphism(result, S, [image for image, _ in keys])
    logger.info(f"KR expansion: {N} classes over a semigroup of order {S.order} "
                f"with {len(gmap)} letters ({evaluations} signatures)")
    return KrExpansion(graph, result, letter_map, projection, representatives, keys, right)


def words_up_to(alphabet_size: int, max_length: int, include_empty: bool = False) -> List[Word]:
    """All words of length <= max_length, shortest first, then lexicographic."""
    words = [()] if include_empty else []
    for length in range(1, max_length + 1):
        words.extend(itertools.product(range(alphabet_size), repeat=length))
    return words


def oracle_classes(S: FiniteSemigroup, gmap: GeneratingMap, max_length: int,
                   graph: Optional[TwoSidedCayleyGraph] = None) -> List[List[Word]]:
    """Words of length <= max_length grouped by signature, computed word by word."""
    if max_length < 1:
        raise ValueError("max_length must be at least 1")
    graph = graph if graph is not None else build(S, gmap)
    groups: Dict[Tuple[int, int], List[Word]] = {}
    for word in words_up_to(len(gmap), max_length):
        groups.setdefault(_signature_key(graph, word), []).append(word)
    return list(groups.values())


@dataclass(frozen=True)
class OracleReport:
    match: bool
    max_length: int
    words_checked: int
    oracle_classes: int
    witness: Optional[Tuple[Word, Word]] = None


def check_oracle(expansion: KrExpansion, max_length: int) -> OracleReport:
    """Compare the expansion's partition of short words with oracle_classes."""
    classes = oracle_classes(expansion.base, expansion.gmap, max_length, expansion.graph)
    seen: Dict[int, Word] = {}
    checked = 0
    for group in classes:
        c = expansion.class_of_word(group[0])
        if c in seen:
            return OracleReport(False, max_length, checked, len(classes), (seen[c], group[0]))
        seen[c] = group[0]
        for word in group:
            checked += 1
            if expansion.class_of_word(word) != c:
                return OracleReport(False, max_length, checked, len(classes), (group[0], word))
    return OracleReport(True, max_length, checked, len(classes))


def _alpha_words(alpha: Dict[str, Union[str, Sequence[int]]], source: GeneratingMap,
                 target: GeneratingMap) -> List[Word]:
    words = []
    for letter in source.alphabet:
        if letter not in alpha:
            raise HypothesisViolated(f"no image for letter {letter!r}", witness=letter)
        value = alpha[letter]
        word = target.parse_word(value) if isinstance(value, str) else target.check_word(value)
        words.append(word)
    return words


def induced_squares_commute(Lambda: Homomorphism, exp_S: KrExpansion, exp_T: KrExpansion,
                            lam: Homomorphism, alpha_words: Sequence[Word]) -> bool:
    """π_ψ∘Λ = λ∘π_φ on elements and Λ∘φ^KR = ψ^KR∘α on letters."""
    lower = np.array_equal(exp_T.projection.map[Lambda.map], lam.map[exp_S.projection.map])
    upper = all(Lambda(exp_S.letter_map[a]) == exp_T.class_of_word(w) for a, w in enumerate(alpha_words))
    return bool(lower and upper)


@timing_decorator
def induced_hom(exp_S: KrExpansion, exp_T: KrExpansion, lam: Homomorphism,
                alpha: Dict[str, Union[str, Sequence[int]]]) -> Homomorphism:
    """
    The homomorphism Λ: S_φ^KR -> T_ψ^KR induced by λ: S -> T and a letter
    map α: A -> B+ with λ∘φ = ψ∘α. Λ sends the class of w to the class of α(w).

    Raises:
        HypothesisViolated: witness letter a with λ(φ(a)) != ψ(α(a))
    """
    words = _alpha_words(alpha, exp_S.gmap, exp_T.gmap)
    for a, w in enumerate(words):
        lhs = lam(exp_S.gmap.images[a])
        rhs = exp_T.gmap.evaluate(exp_T.base, w)
        if lhs != rhs:
            raise HypothesisViolated(f"λ∘φ and ψ∘α differ on letter {exp_S.gmap.alphabet[a]!r}",
                                     witness=exp_S.gmap.alphabet[a])
    mapping = []
    for rep in exp_S.representatives:
        image = tuple(itertools.chain.from_iterable(words[a] for a in rep))
        mapping.append(exp_T.class_of_word(image))
    Lambda = Homomorphism(exp_S.result, exp_T.result, mapping)
    if not induced_squares_commute(Lambda, exp_S, exp_T, lam, words):
        raise NotAHomomorphism("induced map does not commute with the projections")
    return Lambda


class KrTower:
    """
    Levels (S, φ), (S^KR, φ^KR), ... with connecting maps ρ_{n+1,n}.
    `complete` is False when the budget ran out before the requested depth.
    """

    def __init__(self, S: FiniteSemigroup, gmap: GeneratingMap, requested_depth: int):
        self.logger = logging.getLogger('KrTower')
        self.levels: List[Tuple[FiniteSemigroup, GeneratingMap]] = [(S, gmap)]
        self.expansions: List[KrExpansion] = []
        self.connecting: List[Homomorphism] = []
        self.requested_depth = requested_depth
        self.complete = requested_depth == 0
        self.exhausted_at: Optional[int] = None

    @property
    def depth(self) -> int:
        return len(self.levels) - 1

    @property
    def gmap(self) -> GeneratingMap:
        return self.levels[0][1]

    def semigroup(self, n: int) -> FiniteSemigroup:
        return self.levels[n][0]

    def orders(self) -> List[int]:
        return [S.order for S, _ in self.levels]

    def add_level(self, expansion: KrExpansion):
        self.expansions.append(expansion)
        self.levels.append((expansion.result, expansion.generating_map))
        self.connecting.append(expansion.projection)

    def rho(self, m: int, n: int) -> Homomorphism:
        """ρ_{m,n}: level m -> level n for m >= n, a composite of connecting maps."""
        if not 0 <= n <= m <= self.depth:
            raise ValueError(f"need 0 <= n <= m <= {self.depth}, got m={m}, n={n}")
        h = Homomorphism.identity(self.semigroup(m))
        for k in range(m - 1, n - 1, -1):
            h = self.connecting[k].compose(h)
        return h

    def class_of_word(self, n: int, word: Sequence[int]) -> int:
        if n == 0:
            S, gmap = self.levels[0]
            return gmap.evaluate(S, word)
        return self.expansions[n - 1].class_of_word(word)

    def compatible_tuple(self, word: Sequence[int]) -> Tuple[int, ...]:
        """Classes of the word at every built level, an element of the limit up to depth."""
        return tuple(self.class_of_word(n, word) for n in range(self.depth + 1))

    def is_coherent(self) -> bool:
        for n, rho in enumerate(self.connecting):
            if not rho.is_surjective():
                self.logger.warning(f"ρ_{n + 1},{n} is not onto")
                return False
            upper = self.levels[n + 1][1].images
            lower = self.levels[n][1].images
            if any(rho(c) != x for c, x in zip(upper, lower)):
                self.logger.warning(f"ρ_{n + 1},{n} does not commute with the letter maps")
                return False
        for m in range(self.depth + 1):
            for n in range(m + 1):
                rho = self.rho(m, n)
                if any(rho(c) != x for c, x in zip(self.levels[m][1].images, self.levels[n][1].images)):
                    return False
        return True

    def __repr__(self):
        return f"KrTower(orders={self.orders()}, complete={self.complete})"


@timing_decorator
def kr_tower(S: FiniteSemigroup, gmap: GeneratingMap, depth: int,
             budget: Optional[StepBudget] = None) -> KrTower:
    """
    Iterate the expansion `depth` times. One budget is shared by all levels;
    when it runs out the tower built so far is returned with complete=False.
    """
    if depth < 0:
        raise ValueError("tower depth must be nonnegative")
    budget = budget if budget is not None else StepBudget(DEFAULT_BUDGET)
    tower = KrTower(S, gmap, depth)
    for n in range(depth):
        current, current_map = tower.levels[n]
        try:
            tower.add_level(kr_expand(current, current_map, budget))
        except BudgetExceeded as e:
            tower.exhausted_at = n + 1
            logger.warning(f"Budget exhausted while building level {n + 1}: {e}")
            return tower
        logger.info(f"Tower level {n + 1}: order {tower.semigroup(n + 1).order}")
    tower.complete = True
    return tower
