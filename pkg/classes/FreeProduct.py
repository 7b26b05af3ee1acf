import json
import logging
from dataclasses import dataclass
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from .Catalog import trivial
from .Errors import ParseError, TooLarge, UnknownSymbol
from .Semigroup import FiniteSemigroup, Homomorphism, from_table
from .globals import MAX_PRODUCT_ORDER, MAX_TABLE_CELLS, timing_decorator

logger = logging.getLogger('FreeProduct')

Entry = Tuple[int, int]


@dataclass(frozen=True)
class AlternatingForm:
    """Nonempty sequence of (factor, element) with adjacent factors distinct."""
    entries: Tuple[Entry, ...]

    def __post_init__(self):
        entries = tuple((int(f), int(x)) for f, x in self.entries)
        object.__setattr__(self, 'entries', entries)
        if not entries:
            raise ParseError("alternating forms are nonempty")
        for (f, _), (g, _) in zip(entries, entries[1:]):
            if f == g:
                raise ParseError(f"adjacent entries share factor {f}")

    @property
    def block_length(self) -> int:
        return len(self.entries)

    def to_json(self) -> List[List[int]]:
        return [[f, x] for f, x in self.entries]


def symbol_table(factors: Sequence[FiniteSemigroup]) -> Dict[str, Entry]:
    """Element symbols of the disjoint union; a name used by several factors gets a `_<factor>` suffix."""
    counts: Dict[str, int] = {}
    for S in factors:
        for name in S.names:
            counts[name] = counts.get(name, 0) + 1
    table = {}
    for f, S in enumerate(factors):
        for x, name in enumerate(S.names):
            table[name if counts[name] == 1 else f"{name}_{f}"] = (f, x)
    return table


def _merge(factors: Sequence[FiniteSemigroup], entries: Sequence[Entry]) -> Tuple[Entry, ...]:
    merged: List[Entry] = []
    for f, x in entries:
        if merged and merged[-1][0] == f:
            merged[-1] = (f, factors[f].mul(merged[-1][1], x))
        else:
            merged.append((f, x))
    return tuple(merged)


def normal_form(word: Sequence[str], factors: Sequence[FiniteSemigroup]) -> AlternatingForm:
    """Multiply out maximal runs of symbols from the same factor."""
    if not word:
        raise ParseError("empty word")
    symbols = symbol_table(factors)
    entries = []
    for symbol in word:
        if symbol not in symbols:
            raise UnknownSymbol(f"symbol {symbol!r} names no factor element", witness=symbol)
        entries.append(symbols[symbol])
    return AlternatingForm(_merge(factors, entries))


def parse_form(text: str, factors: Sequence[FiniteSemigroup]) -> AlternatingForm:
    """JSON `[[factor, element], ...]` (element by index or name) or a space-separated symbol word."""
    text = text.strip()
    if text.startswith("["):
        try:
            raw = json.loads(text)
        except json.JSONDecodeError as e:
            raise ParseError(f"bad form {text!r}: {e}") from None
        entries = []
        for item in raw:
            if not isinstance(item, list) or len(item) != 2:
                raise ParseError(f"form entries are [factor, element] pairs, got {item!r}")
            f, x = item
            if not isinstance(f, int) or not 0 <= f < len(factors):
                raise UnknownSymbol(f"no factor {f!r}", witness=f)
            try:
                entries.append((f, factors[f].index(x)))
            except Exception:
                raise UnknownSymbol(f"factor {f} has no element {x!r}", witness=x) from None
        return AlternatingForm(_merge(factors, entries))
    return normal_form(text.split(), factors)


def estimate_order(factors: Sequence[FiniteSemigroup], cap: int) -> int:
    """Number of alternating forms of block length <= cap, plus the zero."""
    sizes = [S.order for S in factors]
    total = sum(sizes)
    # ending[f]: forms of the current length whose last entry lies in factor f
    ending = list(sizes)
    count = total
    for _ in range(cap - 1):
        s = sum(ending)
        ending = [sizes[f] * (s - ending[f]) for f in range(len(sizes))]
        count += sum(ending)
        if count > 10 * MAX_PRODUCT_ORDER:
            break
    return count + 1


class TruncatedFreeProduct:
    """
    Rees quotient of the free product of the factors by the ideal of forms
    with more than `cap` blocks. Elements are the forms ordered by length and
    then lexicographically, the zero last.
    """

    def __init__(self, factors: Sequence[FiniteSemigroup], cap: int, forms: List[AlternatingForm],
                 result: FiniteSemigroup):
        self.factors = list(factors)
        self.cap = cap
        self.forms = forms
        self.result = result
        self.zero = result.order - 1
        self._index = {form.entries: i for i, form in enumerate(forms)}
        self.symbols = symbol_table(factors)
        self.embeddings = [
            Homomorphism(S, result, [self._index[((f, x),)] for x in range(S.order)])
            for f, S in enumerate(self.factors)
        ]

    @property
    def order(self) -> int:
        return self.result.order

    def index_of(self, form: AlternatingForm) -> int:
        """Element of the form, or the zero when it has too many blocks."""
        return self._index.get(form.entries, self.zero)

    def form_of(self, x: int) -> Optional[AlternatingForm]:
        return None if x == self.zero else self.forms[x]

    def __repr__(self):
        return f"TruncatedFreeProduct(factors={len(self.factors)}, cap={self.cap}, order={self.order})"


@timing_decorator
def truncated_free_product(factors: Sequence[FiniteSemigroup], cap: int) -> TruncatedFreeProduct:
    """
    Raises:
        TooLarge: the estimated order exceeds MAX_PRODUCT_ORDER, or its
            table exceeds MAX_TABLE_CELLS entries
    """
    if cap < 1:
        raise ValueError("cap must be at least 1")
    if not factors:
        raise ParseError("at least one factor is required")
    estimate = estimate_order(factors, cap)
    if estimate > MAX_PRODUCT_ORDER or estimate * estimate > MAX_TABLE_CELLS:
        raise TooLarge(f"truncated product would have about {estimate} elements "
                       f"(limits {MAX_PRODUCT_ORDER} elements, {MAX_TABLE_CELLS} table cells)",
                       witness=estimate)

    # symbols: the entries (f, x) of the disjoint union, numbered factor by factor
    sizes = [S.order for S in factors]
    offset = np.concatenate(([0], np.cumsum(sizes)[:-1])).astype(np.int64)
    sym_factor = np.repeat(np.arange(len(factors)), sizes)
    sym_element = np.concatenate([np.arange(size) for size in sizes])
    k = len(sym_factor)

    # forms grow one entry at a time; child[p, s] is the form p extended by symbol s
    parents = [np.full(k, -1, dtype=np.int64)]
    lasts = [np.arange(k, dtype=np.int64)]
    frontier = np.arange(k, dtype=np.int64)
    m = k
    for _ in range(cap - 1):
        ok = sym_factor[None, :] != sym_factor[lasts[-1]][:, None]
        pp, ss = np.nonzero(ok)
        parents.append(frontier[pp])
        lasts.append(ss.astype(np.int64))
        frontier = np.arange(m, m + len(pp), dtype=np.int64)
        m += len(pp)
    parent = np.concatenate(parents)
    last = np.concatenate(lasts)
    zero, root = m, m + 1

    child = np.full((m + 2, k), zero, dtype=np.int64)
    child[root] = np.arange(k)
    extended = parent >= 0
    child[parent[extended], last[extended]] = np.nonzero(extended)[0]

    entries = np.full((m, cap), -1, dtype=np.int64)
    length = np.ones(m, dtype=np.int64)
    entries[:k, 0] = np.arange(k)
    for i in range(k, m):
        p = parent[i]
        entries[i] = entries[p]
        entries[i, length[p]] = last[i]
        length[i] = length[p] + 1
    parent = np.where(extended, parent, root)
    first = entries[:, 0]
    forms = [AlternatingForm(tuple((int(sym_factor[s]), int(sym_element[s])) for s in row[:count]))
             for row, count in zip(entries, length)]

    # u·v: walk v's entries from u, or from u's parent when the boundary entries merge
    n = m + 1
    table = np.full((n, n), zero, dtype=np.int64)
    first_factor = sym_factor[first]
    for u in range(m):
        f, x = int(sym_factor[last[u]]), int(sym_element[last[u]])
        merge = first_factor == f
        node = np.where(merge, parent[u], u)
        start = first.copy()
        start[merge] = offset[f] + factors[f].table[x, sym_element[first[merge]]]
        node = child[node, start]
        for step in range(1, cap):
            s = entries[:, step]
            active = (s >= 0) & (node != zero)
            if not active.any():
                break
            node[active] = child[node[active], s[active]]
        table[u, :m] = node

    symbols = {entry: name for name, entry in symbol_table(factors).items()}
    names = [".".join(symbols[e] for e in form.entries) for form in forms]
    zero_name = "0"
    while zero_name in names:
        zero_name += "'"
    names.append(zero_name)
    result = from_table(table, names, generators=list(range(k)))
    logger.info(f"Truncated free product of {len(factors)} factors at cap {cap}: {n} elements")
    return TruncatedFreeProduct(factors, cap, forms, result)


def zero_sum(factors: Sequence[FiniteSemigroup]) -> TruncatedFreeProduct:
    """Cap-1 truncation: the disjoint union of the factors, cross products zero."""
    return truncated_free_product(factors, 1)


def collapse_to_trivial(product: TruncatedFreeProduct) -> Tuple[TruncatedFreeProduct, Homomorphism]:
    """Onto map to the truncated product of trivial factors, keeping only the factor sequence."""
    trivials = [trivial(f"e{f}") for f in range(len(product.factors))]
    target = truncated_free_product(trivials, product.cap)
    mapping = []
    for x in range(product.order):
        form = product.form_of(x)
        if form is None:
            mapping.append(target.zero)
        else:
            mapping.append(target.index_of(AlternatingForm(tuple((f, 0) for f, _ in form.entries))))
    return target, Homomorphism(product.result, target.result, mapping)


@dataclass(frozen=True)
class SeparationResult:
    equal: bool
    product: Optional[TruncatedFreeProduct] = None
    image_u: Optional[int] = None
    image_v: Optional[int] = None

    @property
    def separated(self) -> bool:
        return not self.equal and self.image_u != self.image_v


def separate(u: AlternatingForm, v: AlternatingForm, factors: Sequence[FiniteSemigroup]) -> SeparationResult:
    """
    Distinguish two forms in the truncation at cap = longest block length + 1,
    where neither falls into the collapsed ideal.
    """
    if u.entries == v.entries:
        return SeparationResult(True)
    cap = max(u.block_length, v.block_length) + 1
    product = truncated_free_product(factors, cap)
    result = SeparationResult(False, product, product.index_of(u), product.index_of(v))
    logger.debug(f"Separated at cap {cap}: images {result.image_u} and {result.image_v}")
    return result


def alternating_word_count(factor_count: int, cap: int) -> int:
    """Alternating index words of length <= cap over the factor indices."""
    return sum(factor_count * (factor_count - 1) ** (k - 1) for k in range(1, cap + 1))
