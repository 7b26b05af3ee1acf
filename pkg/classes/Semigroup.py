import logging
import math
from collections import deque
from dataclasses import dataclass
from functools import cached_property
from typing import Dict, Iterable, List, Optional, Sequence, Tuple, Union

import numpy as np

from .Errors import (
    IndexOutOfRange, NonAssociative, NotAGroup, NotAHomomorphism, NotACongruence,
    NotAnIdeal, NotASubsemigroup, NotGenerating, NotWellDefined, ParseError, UnknownLetter,
)
from .globals import FULL_ASSOCIATIVITY_LIMIT, IDENTITY_SYMBOL

logger = logging.getLogger('Semigroup')

# A word is a nonempty sequence of letter indices of a GeneratingMap
Word = Tuple[int, ...]


def _fresh_name(names: Sequence[str], wanted: str) -> str:
    name = wanted
    while name in names:
        name += "'"
    return name


class FiniteSemigroup:
    """
    Finite semigroup given by its multiplication table.

    Elements are the indices 0..order-1. Formulas quantifying over S^I use
    the virtual identity index `order` (see `monoid_table`), never an
    existing identity of S. `identity_index` flags an identity that was
    adjoined by `adjoin_identity`.

    Instances are immutable; build them with `from_table` so the table is
    validated.
    """

    def __init__(self, table: np.ndarray, names: Optional[Sequence[str]] = None,
                 identity_index: Optional[int] = None):
        table = np.array(table, dtype=np.int64)
        table.setflags(write=False)
        self.table = table
        self.order = int(table.shape[0])
        if names is None:
            names = [str(i) for i in range(self.order)]
        self.names = tuple(str(name) for name in names)
        self.identity_index = identity_index
        self._index = {name: i for i, name in enumerate(self.names)}

    @property
    def I(self) -> int:
        """Index of the virtual identity of S^I."""
        return self.order

    def name(self, x: int) -> str:
        if x == self.order:
            return IDENTITY_SYMBOL
        return self.names[x]

    def index(self, name: Union[str, int]) -> int:
        if isinstance(name, (int, np.integer)):
            if not 0 <= int(name) < self.order:
                raise IndexOutOfRange(f"element index {name} out of range 0..{self.order - 1}", witness=int(name))
            return int(name)
        if name == IDENTITY_SYMBOL and name not in self._index:
            return self.order
        try:
            return self._index[name]
        except KeyError:
            raise IndexOutOfRange(f"unknown element name {name!r}", witness=name) from None

    def mul(self, x: int, y: int) -> int:
        return int(self.monoid_table[x, y])

    def product(self, elements: Iterable[int]) -> int:
        acc = self.order
        for x in elements:
            acc = int(self.monoid_table[acc, x])
        return acc

    @cached_property
    def monoid_table(self) -> np.ndarray:
        """(order+1)x(order+1) table of S^I, virtual identity at index `order`."""
        n = self.order
        mt = np.empty((n + 1, n + 1), dtype=np.int64)
        mt[:n, :n] = self.table
        mt[n, :] = np.arange(n + 1)
        mt[:, n] = np.arange(n + 1)
        mt.setflags(write=False)
        return mt

    @cached_property
    def idempotent_mask(self) -> np.ndarray:
        diag = self.table[np.arange(self.order), np.arange(self.order)]
        return diag == np.arange(self.order)

    @cached_property
    def cycles(self) -> Tuple[np.ndarray, np.ndarray, List[List[int]]]:
        """Per element: index i, period p and the powers x^1..x^(i+p-1)."""
        n = self.order
        index = np.zeros(n, dtype=np.int64)
        period = np.zeros(n, dtype=np.int64)
        powers = []
        for x in range(n):
            seen = {x: 1}
            row = [x]
            cur = x
            k = 1
            while True:
                k += 1
                cur = int(self.table[cur, x])
                if cur in seen:
                    index[x] = seen[cur]
                    period[x] = k - seen[cur]
                    break
                seen[cur] = k
                row.append(cur)
            powers.append(row)
        return index, period, powers

    def power(self, x: int, k: int) -> int:
        if k < 1:
            raise ValueError("positive exponent required")
        if x == self.order:
            return x
        index, period, powers = self.cycles
        i, p = int(index[x]), int(period[x])
        if k >= i:
            k = i + (k - i) % p
        return powers[x][k - 1]

    def __len__(self):
        return self.order

    def __repr__(self):
        return f"FiniteSemigroup(order={self.order})"


class Homomorphism:
    """
    Map between finite semigroups, validated to be multiplicative.

    Args:
        source: domain semigroup
        target: codomain semigroup
        mapping: target index per source element
        validate: check range and multiplicativity (default True)
    """

    def __init__(self, source: FiniteSemigroup, target: FiniteSemigroup, mapping: Sequence[int],
                 validate: bool = True):
        mapping = np.array(mapping, dtype=np.int64)
        mapping.setflags(write=False)
        self.source = source
        self.target = target
        self.map = mapping
        if validate:
            self._validate()

    def _validate(self):
        m = self.map
        if m.shape != (self.source.order,):
            raise NotAHomomorphism(f"mapping has {m.shape[0] if m.ndim else 0} entries, expected {self.source.order}")
        bad = np.nonzero((m < 0) | (m >= self.target.order))[0]
        if bad.size:
            x = int(bad[0])
            raise IndexOutOfRange(f"image of {x} out of range", witness=(x, int(m[x])))
        lhs = m[self.source.table]
        rhs = self.target.table[m[:, None], m[None, :]]
        diff = np.argwhere(lhs != rhs)
        if diff.size:
            x, y = (int(v) for v in diff[0])
            raise NotAHomomorphism(
                f"map({self.source.name(x)}*{self.source.name(y)}) != map({self.source.name(x)})*map({self.source.name(y)})",
                witness=(x, y))

    @classmethod
    def identity(cls, S: FiniteSemigroup) -> "Homomorphism":
        return cls(S, S, np.arange(S.order), validate=False)

    def __call__(self, x: int) -> int:
        if x == self.source.order:
            return self.target.order
        return int(self.map[x])

    def compose(self, inner: "Homomorphism") -> "Homomorphism":
        """self ∘ inner"""
        if inner.target is not self.source and not np.array_equal(inner.target.table, self.source.table):
            raise NotAHomomorphism("cannot compose: codomain and domain differ")
        return Homomorphism(inner.source, self.target, self.map[inner.map], validate=False)

    def image(self) -> List[int]:
        return sorted(set(int(v) for v in self.map))

    def is_surjective(self) -> bool:
        return len(np.unique(self.map)) == self.target.order

    def is_injective(self) -> bool:
        return len(np.unique(self.map)) == self.source.order

    def fiber(self, t: int) -> List[int]:
        return [int(v) for v in np.nonzero(self.map == t)[0]]

    def fibers(self) -> Dict[int, List[int]]:
        result = {t: [] for t in range(self.target.order)}
        for x, t in enumerate(self.map):
            result[int(t)].append(x)
        return result

    def equals(self, other: "Homomorphism") -> bool:
        return self.map.shape == other.map.shape and bool(np.array_equal(self.map, other.map))

    def __repr__(self):
        return f"Homomorphism({self.source.order} -> {self.target.order})"


@dataclass(frozen=True)
class GeneratingMap:
    """
    Letter map φ: A -> S. `images[i]` is the element of letter `alphabet[i]`.
    """
    alphabet: Tuple[str, ...]
    images: Tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, 'alphabet', tuple(str(a) for a in self.alphabet))
        object.__setattr__(self, 'images', tuple(int(x) for x in self.images))
        if not self.alphabet:
            raise ParseError("empty alphabet")
        if len(self.alphabet) != len(self.images):
            raise ParseError("alphabet and images differ in length")
        if len(set(self.alphabet)) != len(self.alphabet):
            raise ParseError(f"repeated letter in alphabet {self.alphabet}")

    @classmethod
    def from_dict(cls, S: FiniteSemigroup, mapping: Dict[str, Union[int, str]]) -> "GeneratingMap":
        letters = list(mapping.keys())
        return cls(tuple(letters), tuple(S.index(mapping[a]) for a in letters))

    def to_dict(self) -> Dict[str, int]:
        return dict(zip(self.alphabet, self.images))

    def __len__(self):
        return len(self.alphabet)

    def letter_index(self, letter: str) -> int:
        try:
            return self.alphabet.index(letter)
        except ValueError:
            raise UnknownLetter(f"letter {letter!r} not in alphabet {''.join(self.alphabet)}", witness=letter) from None

    @property
    def single_char(self) -> bool:
        return all(len(a) == 1 for a in self.alphabet)

    def parse_word(self, text: str) -> Word:
        text = text.strip()
        if not text:
            raise ParseError("empty word")
        if any(c.isspace() for c in text) or not self.single_char:
            tokens = text.split()
        else:
            tokens = list(text)
        return tuple(self.letter_index(t) for t in tokens)

    def format_word(self, word: Sequence[int]) -> str:
        if not word:
            return IDENTITY_SYMBOL
        sep = "" if self.single_char else " "
        return sep.join(self.alphabet[a] for a in word)

    def check_word(self, word: Sequence[int]) -> Word:
        word = tuple(int(a) for a in word)
        if not word:
            raise ParseError("words are nonempty")
        for a in word:
            if not 0 <= a < len(self.alphabet):
                raise UnknownLetter(f"letter index {a} out of range", witness=a)
        return word

    def evaluate(self, S: FiniteSemigroup, word: Sequence[int]) -> int:
        """φ extended to words; the empty word evaluates to the virtual identity."""
        acc = S.order
        mt = S.monoid_table
        for a in word:
            acc = int(mt[acc, self.images[a]])
        return acc

    def generated(self, S: FiniteSemigroup) -> List[int]:
        return generated_subsemigroup(S, self.images)

    def validate(self, S: FiniteSemigroup, strict: bool = False):
        """
        Raise NotGenerating unless the images generate S. An adjoined
        identity is exempt unless `strict`.
        """
        for a, x in zip(self.alphabet, self.images):
            if not 0 <= x < S.order:
                raise IndexOutOfRange(f"image of letter {a!r} out of range", witness=(a, x))
        missing = set(range(S.order)) - set(self.generated(S))
        if not strict and S.identity_index is not None:
            missing.discard(S.identity_index)
        if missing:
            x = min(missing)
            raise NotGenerating(f"letters do not generate {S.name(x)}", witness=x)

    def extended(self, letter: str, image: int) -> "GeneratingMap":
        if letter in self.alphabet:
            raise ParseError(f"letter {letter!r} already in alphabet")
        return GeneratingMap(self.alphabet + (letter,), self.images + (image,))


@dataclass(frozen=True)
class GreenData:
    """Green's classes, each list sorted and classes ordered by least element."""
    r_classes: List[List[int]]
    l_classes: List[List[int]]
    j_classes: List[List[int]]
    h_classes: List[List[int]]
    regular: List[bool]
    r_of: np.ndarray
    l_of: np.ndarray
    j_of: np.ndarray
    h_of: np.ndarray
    # divides[x, y] iff y ∈ S^I x S^I
    divides: np.ndarray

    def j_class(self, x: int) -> List[int]:
        return self.j_classes[int(self.j_of[x])]

    def ideal_size(self, j: int) -> int:
        return int(self.divides[self.j_classes[j][0]].sum())

    def is_j_below(self, y: int, x: int) -> bool:
        return bool(self.divides[x, y])

    def check_invariants(self) -> bool:
        for cls_list, of in ((self.r_classes, self.r_of), (self.l_classes, self.l_of)):
            for cls in cls_list:
                if len({int(self.j_of[x]) for x in cls}) != 1:
                    return False
        for h in self.h_classes:
            if len({int(self.r_of[x]) for x in h}) != 1 or len({int(self.l_of[x]) for x in h}) != 1:
                return False
        pairs = {(int(self.r_of[x]), int(self.l_of[x])) for x in range(len(self.h_of))}
        return len(pairs) == len(self.h_classes)


def check_associativity(table: np.ndarray, generators: Optional[Sequence[int]] = None) -> Optional[Tuple[int, int, int]]:
    """
    First triple (x, y, z) with (xy)z != x(yz), or None.

    With `generators` and a table larger than FULL_ASSOCIATIVITY_LIMIT, uses
    Light's test: the elements g with (xg)y = x(gy) for all x, y form a
    subsemigroup, so checking the generators suffices.
    """
    n = table.shape[0]
    if generators is not None and n > FULL_ASSOCIATIVITY_LIMIT:
        gens = sorted(set(int(g) for g in generators))
        if len(_closure(table, gens)) == n:
            for g in gens:
                left = table[table[:, g]]
                right = table[:, table[g]]
                diff = np.argwhere(left != right)
                if diff.size:
                    x, y = (int(v) for v in diff[0])
                    return x, g, y
            return None
        logger.debug("Light's test skipped: generators do not generate the table")
    for x in range(n):
        left = table[table[x]]
        right = table[x][table]
        diff = np.argwhere(left != right)
        if diff.size:
            y, z = (int(v) for v in diff[0])
            return x, y, z
    return None


def from_table(matrix, names: Optional[Sequence[str]] = None, identity_index: Optional[int] = None,
               generators: Optional[Sequence[int]] = None) -> FiniteSemigroup:
    """
    Validated semigroup from a square table of 0-based element indices.

    Raises:
        ParseError: the matrix is not square or not integral
        IndexOutOfRange: an entry is outside 0..n-1
        NonAssociative: witness triple (x, y, z)
    """
    try:
        table = np.array(matrix)
    except (ValueError, TypeError) as e:
        raise ParseError(f"table is not a matrix: {e}") from None
    if table.ndim != 2 or table.shape[0] != table.shape[1] or table.shape[0] == 0:
        raise ParseError(f"table must be a nonempty square matrix, got shape {table.shape}")
    if not np.issubdtype(table.dtype, np.integer):
        raise ParseError("table entries must be integers")
    n = table.shape[0]
    table = table.astype(np.int64)
    bad = np.argwhere((table < 0) | (table >= n))
    if bad.size:
        x, y = (int(v) for v in bad[0])
        raise IndexOutOfRange(f"entry table[{x}][{y}] = {int(table[x, y])} out of range 0..{n - 1}",
                              witness=(x, y, int(table[x, y])))
    if names is not None:
        names = [str(name) for name in names]
        if len(names) != n:
            raise ParseError(f"{len(names)} names for {n} elements")
        if len(set(names)) != n:
            raise ParseError("element names must be distinct")
    witness = check_associativity(table, generators)
    if witness is not None:
        x, y, z = witness
        raise NonAssociative(f"({x}*{y})*{z} != {x}*({y}*{z})", witness=witness)
    S = FiniteSemigroup(table, names, identity_index)
    if identity_index is not None:
        e = identity_index
        if not (np.all(S.table[e] == np.arange(n)) and np.all(S.table[:, e] == np.arange(n))):
            raise ParseError(f"flagged element {S.name(e)} is not an identity")
    return S


def adjoin_identity(S: FiniteSemigroup) -> FiniteSemigroup:
    """S^I: a new identity, even when S is a monoid. The new element is last."""
    n = S.order
    table = np.array(S.monoid_table)
    names = list(S.names) + [_fresh_name(S.names, IDENTITY_SYMBOL)]
    return FiniteSemigroup(table, names, identity_index=n)


def adjoin_zero(S: FiniteSemigroup) -> FiniteSemigroup:
    """S^0: a new absorbing element, appended last."""
    n = S.order
    table = np.full((n + 1, n + 1), n, dtype=np.int64)
    table[:n, :n] = S.table
    names = list(S.names) + [_fresh_name(S.names, "0")]
    return FiniteSemigroup(table, names, identity_index=S.identity_index)


def omega_power(S: FiniteSemigroup, s: int, k: int = 0) -> int:
    """
    s^(ω+k): the cycle element of the powers of s that is k steps beyond
    the idempotent s^ω. The virtual and adjoined identities are fixed.
    """
    if s == S.order:
        return s
    if not 0 <= s < S.order:
        raise IndexOutOfRange(f"element {s} out of range", witness=s)
    index, period, powers = S.cycles
    i, p = int(index[s]), int(period[s])
    return powers[s][i + (k - i) % p - 1]


def omega_powers(S: FiniteSemigroup, k: int = 0) -> np.ndarray:
    return np.array([omega_power(S, s, k) for s in range(S.order)], dtype=np.int64)


def idempotents(S: FiniteSemigroup) -> List[int]:
    return [int(x) for x in np.nonzero(S.idempotent_mask)[0]]


def is_band(S: FiniteSemigroup) -> bool:
    return bool(S.idempotent_mask.all())


def find_identity(S: FiniteSemigroup) -> Optional[int]:
    n = S.order
    ar = np.arange(n)
    for e in range(n):
        if np.array_equal(S.table[e], ar) and np.array_equal(S.table[:, e], ar):
            return e
    return None


def is_monoid(S: FiniteSemigroup) -> bool:
    return find_identity(S) is not None


def is_group(S: FiniteSemigroup) -> bool:
    """A finite semigroup is a group iff it is left and right cancellative."""
    t = np.sort(S.table, axis=1)
    u = np.sort(S.table, axis=0)
    ar = np.arange(S.order)
    return bool(np.all(t == ar[None, :]) and np.all(u == ar[:, None]))


def is_union_of_groups(S: FiniteSemigroup) -> bool:
    return bool(np.all(omega_powers(S, 1) == np.arange(S.order)))


def is_aperiodic(S: FiniteSemigroup) -> bool:
    _, period, _ = S.cycles
    return bool(np.all(period == 1))


def idempotent_exponent(S: FiniteSemigroup) -> int:
    """Least n >= 1 with x^n = x^ω for every x."""
    index, period, _ = S.cycles
    lcm = 1
    for p in set(int(p) for p in period):
        lcm = lcm * p // math.gcd(lcm, p)
    top = int(index.max()) if S.order else 1
    return lcm * max(1, -(-top // lcm))


def _classes_from_rows(mat: np.ndarray) -> Tuple[List[List[int]], np.ndarray]:
    groups = {}
    of = np.empty(mat.shape[0], dtype=np.int64)
    classes = []
    for x in range(mat.shape[0]):
        key = mat[x].tobytes()
        if key not in groups:
            groups[key] = len(classes)
            classes.append([])
        of[x] = groups[key]
        classes[groups[key]].append(x)
    return classes, of


def greens(S: FiniteSemigroup) -> GreenData:
    """Green's relations from mutual divisibility in S^I."""
    n = S.order
    rows = np.arange(n)[:, None]
    right = np.zeros((n, n), dtype=bool)
    right[rows, S.table] = True
    right[np.arange(n), np.arange(n)] = True
    left = np.zeros((n, n), dtype=bool)
    left[rows, S.table.T] = True
    left[np.arange(n), np.arange(n)] = True
    # J(x) = { v : v ∈ u S^I for some u ∈ S^I x }
    divides = (left.astype(np.float32) @ right.astype(np.float32)) > 0

    r_classes, r_of = _classes_from_rows(right)
    l_classes, l_of = _classes_from_rows(left)
    j_classes, j_of = _classes_from_rows(divides)
    h_classes, h_of = _classes_from_rows(np.stack([r_of, l_of], axis=1))
    idem = S.idempotent_mask
    regular = [bool(idem[cls].any()) for cls in j_classes]
    divides.setflags(write=False)
    return GreenData(r_classes, l_classes, j_classes, h_classes, regular, r_of, l_of, j_of, h_of, divides)


def minimal_ideal(S: FiniteSemigroup) -> List[int]:
    """S^I p S^I for p the product of all elements, which lies in the minimal ideal."""
    p = S.product(range(S.order))
    mt = S.monoid_table
    left = np.unique(mt[:, p])
    ideal = np.unique(mt[left][:, :])
    return [int(x) for x in ideal if x != S.order]


def is_completely_simple(S: FiniteSemigroup) -> bool:
    return len(minimal_ideal(S)) == S.order


def rees_matrix(G: FiniteSemigroup, P, names: Optional[Sequence[str]] = None) -> FiniteSemigroup:
    """
    Rees matrix semigroup M[G; I, Λ; P] with P a Λ x I matrix over G.
    Element (i, g, λ) has index i*|G|*|Λ| + g*|Λ| + λ.
    """
    if not is_group(G):
        raise NotAGroup("sandwich semigroup must be a group")
    P = np.array(P, dtype=np.int64)
    if P.ndim != 2 or P.size == 0:
        raise ParseError("sandwich matrix must be a nonempty Λ x I matrix")
    if np.any((P < 0) | (P >= G.order)):
        raise IndexOutOfRange("sandwich entry outside the group")
    n_lambda, n_i = P.shape
    g = G.order
    order = n_i * g * n_lambda
    idx = np.arange(order)
    i_of = idx // (g * n_lambda)
    g_of = (idx // n_lambda) % g
    l_of = idx % n_lambda
    x, y = idx[:, None], idx[None, :]
    middle = G.table[g_of[x], P[l_of[x], i_of[y]]]
    prod_g = G.table[middle, g_of[y]]
    table = i_of[x] * g * n_lambda + prod_g * n_lambda + l_of[y]
    if names is None:
        names = [f"({i_of[k]},{G.names[g_of[k]]},{l_of[k]})" for k in range(order)]
    S = FiniteSemigroup(table, names)
    logger.debug(f"Rees matrix semigroup of order {order} over group of order {g}")
    return S


def _closure(table: np.ndarray, generators: Iterable[int]) -> List[int]:
    gens = sorted(set(int(g) for g in generators))
    seen = np.zeros(table.shape[0], dtype=bool)
    seen[gens] = True
    queue = deque(gens)
    gens_arr = np.array(gens, dtype=np.int64)
    while queue:
        x = queue.popleft()
        for y in table[x, gens_arr]:
            if not seen[y]:
                seen[y] = True
                queue.append(int(y))
    return [int(x) for x in np.nonzero(seen)[0]]


def generated_subsemigroup(S: FiniteSemigroup, elements: Iterable[int]) -> List[int]:
    return _closure(S.table, elements)


def subsemigroup(S: FiniteSemigroup, subset: Iterable[int]) -> Tuple[FiniteSemigroup, Homomorphism]:
    """Restriction of S to a closed subset, with the inclusion map."""
    elements = sorted(set(int(x) for x in subset))
    if not elements:
        raise NotASubsemigroup("empty subset")
    position = np.full(S.order, -1, dtype=np.int64)
    position[elements] = np.arange(len(elements))
    arr = np.array(elements, dtype=np.int64)
    products = S.table[arr[:, None], arr[None, :]]
    outside = np.argwhere(position[products] < 0)
    if outside.size:
        a, b = (int(v) for v in outside[0])
        x, y = elements[a], elements[b]
        raise NotASubsemigroup(f"{S.name(x)}*{S.name(y)} = {S.name(S.mul(x, y))} leaves the subset",
                               witness=(x, y))
    identity = None
    if S.identity_index is not None and position[S.identity_index] >= 0:
        identity = int(position[S.identity_index])
    sub = FiniteSemigroup(position[products], [S.names[x] for x in elements], identity)
    return sub, Homomorphism(sub, S, arr, validate=False)


def quotient(S: FiniteSemigroup, congruence: Sequence[Sequence[int]]) -> Tuple[FiniteSemigroup, Homomorphism]:
    """
    Quotient by a partition, validated to be a congruence. Classes are
    ordered by least element; each is named after that element.
    """
    n = S.order
    class_of = np.full(n, -1, dtype=np.int64)
    classes = sorted((sorted(set(int(x) for x in cls)) for cls in congruence if len(cls)), key=lambda c: c[0])
    for k, cls in enumerate(classes):
        for x in cls:
            if not 0 <= x < n:
                raise IndexOutOfRange(f"element {x} out of range", witness=x)
            if class_of[x] >= 0:
                raise NotACongruence(f"element {S.name(x)} is in two classes", witness=x)
            class_of[x] = k
    missing = np.nonzero(class_of < 0)[0]
    if missing.size:
        raise NotACongruence(f"element {S.name(int(missing[0]))} is in no class", witness=int(missing[0]))
    reps = np.array([cls[0] for cls in classes], dtype=np.int64)
    products = class_of[S.table]
    expected = products[reps[class_of][:, None], reps[class_of][None, :]]
    diff = np.argwhere(products != expected)
    if diff.size:
        x, y = (int(v) for v in diff[0])
        rx, ry = int(reps[class_of[x]]), int(reps[class_of[y]])
        raise NotACongruence(
            f"{S.name(x)}~{S.name(rx)} and {S.name(y)}~{S.name(ry)} but products fall in different classes",
            witness=((x, y), (rx, ry)))
    table = products[reps[:, None], reps[None, :]]
    identity = None
    if S.identity_index is not None and len(classes[class_of[S.identity_index]]) == 1:
        identity = int(class_of[S.identity_index])
    Q = FiniteSemigroup(table, [S.names[r] for r in reps], identity)
    return Q, Homomorphism(S, Q, class_of, validate=False)


def rees_quotient(S: FiniteSemigroup, ideal: Iterable[int]) -> Tuple[FiniteSemigroup, Homomorphism]:
    """S/J: the two-sided ideal J collapsed to a zero."""
    members = sorted(set(int(x) for x in ideal))
    if not members:
        raise NotAnIdeal("ideals are nonempty")
    mask = np.zeros(S.order, dtype=bool)
    mask[members] = True
    arr = np.array(members, dtype=np.int64)
    for side, products in (("right", S.table[arr, :]), ("left", S.table[:, arr].T)):
        outside = np.argwhere(~mask[products])
        if outside.size:
            a, s = (int(v) for v in outside[0])
            x = members[a]
            raise NotAnIdeal(f"{side} product of {S.name(x)} by {S.name(s)} leaves the subset",
                             witness=(x, s))
    classes = [members] + [[x] for x in range(S.order) if not mask[x]]
    Q, q = quotient(S, classes)
    zero = int(q.map[members[0]])
    names = list(Q.names)
    names[zero] = _fresh_name([nm for k, nm in enumerate(names) if k != zero], "0")
    Q = FiniteSemigroup(Q.table, names, Q.identity_index)
    return Q, Homomorphism(S, Q, q.map, validate=False)


def hom_from_generator_images(S: FiniteSemigroup, gmap: GeneratingMap, T: FiniteSemigroup,
                              images: Union[Dict[str, int], Sequence[int]]) -> Homomorphism:
    """
    The unique homomorphism S -> T sending φ(a) to images[a], if it exists.

    Walks the right Cayley graph of S from the letter images; two words
    reaching the same element must have the same image.

    Raises:
        NotWellDefined: witness pair of words (u, v) with φ(u) = φ(v) and
            different images in T
        NotGenerating: the letters do not reach every element
    """
    if isinstance(images, dict):
        img = [T.index(images[a]) if a in images else None for a in gmap.alphabet]
        missing = [a for a, v in zip(gmap.alphabet, img) if v is None]
        if missing:
            raise UnknownLetter(f"no image for letter {missing[0]!r}", witness=missing[0])
    else:
        img = [int(v) for v in images]
    mapping = np.full(S.order, -1, dtype=np.int64)
    words: List[Optional[Word]] = [None] * S.order
    queue = deque()
    for a, (x, y) in enumerate(zip(gmap.images, img)):
        if mapping[x] < 0:
            mapping[x], words[x] = y, (a,)
            queue.append(x)
        elif mapping[x] != y:
            raise NotWellDefined(f"letters {gmap.format_word(words[x])} and {gmap.alphabet[a]} "
                                 f"are equal in the source but not in the target", witness=(words[x], (a,)))
    while queue:
        x = queue.popleft()
        for a, g in enumerate(gmap.images):
            z = int(S.table[x, g])
            value = int(T.table[mapping[x], img[a]])
            if mapping[z] < 0:
                mapping[z], words[z] = value, words[x] + (a,)
                queue.append(z)
            elif mapping[z] != value:
                raise NotWellDefined(
                    f"{gmap.format_word(words[z])} = {gmap.format_word(words[x] + (a,))} in the source "
                    f"but not in the target", witness=(words[z], words[x] + (a,)))
    unreached = [int(x) for x in np.nonzero(mapping < 0)[0]]
    if unreached == [S.identity_index] and S.identity_index is not None and T.identity_index is not None:
        mapping[S.identity_index] = T.identity_index
        unreached = []
    if unreached:
        raise NotGenerating(f"letters do not reach {S.name(unreached[0])}", witness=unreached[0])
    return Homomorphism(S, T, mapping)


def identity_generating_map(S: FiniteSemigroup) -> GeneratingMap:
    """Letters are the element names, each mapped to its element."""
    return GeneratingMap(S.names, tuple(range(S.order)))


def irredundant_generating_map(S: FiniteSemigroup) -> GeneratingMap:
    """Greedy generating set: elements are dropped from the top index down while the rest still generate."""
    gens = list(range(S.order))
    for x in reversed(range(S.order)):
        rest = [g for g in gens if g != x]
        if rest and len(generated_subsemigroup(S, rest)) == S.order:
            gens = rest
    return GeneratingMap(tuple(S.names[g] for g in gens), tuple(gens))
