"""
Standard small semigroups used as examples, fixtures and `builtin:` inputs.
"""
from typing import Callable, Dict, Optional, Tuple

import numpy as np

from .Errors import ParseError
from .Semigroup import (
    FiniteSemigroup, GeneratingMap, adjoin_zero, from_table, irredundant_generating_map, rees_matrix,
)


def trivial(name: str = "e") -> FiniteSemigroup:
    return from_table([[0]], [name])


def cyclic_group(n: int) -> FiniteSemigroup:
    """Z/n written multiplicatively: 1, g, g2, ..."""
    if n < 1:
        raise ValueError("group order must be positive")
    idx = np.arange(n)
    names = ["1", "g"] + [f"g{k}" for k in range(2, n)]
    return from_table((idx[:, None] + idx[None, :]) % n, names[:n])


def zero_group(n: int) -> FiniteSemigroup:
    """(Z/n)^0, the zero appended last."""
    return adjoin_zero(cyclic_group(n))


def semilattice() -> FiniteSemigroup:
    """{a, b} with b the minimum: ab = ba = bb = b."""
    return from_table([[0, 1], [1, 1]], ["a", "b"])


def chain(k: int) -> FiniteSemigroup:
    """Chain semilattice a > b > c > ..., product is the minimum."""
    if not 1 <= k <= 26:
        raise ValueError("chain length must be in 1..26")
    idx = np.arange(k)
    return from_table(np.maximum(idx[:, None], idx[None, :]), [chr(ord("a") + i) for i in range(k)])


def null_semigroup() -> FiniteSemigroup:
    """{n, 0} with every product 0."""
    return from_table([[1, 1], [1, 1]], ["n", "0"])


def left_zero(k: int) -> FiniteSemigroup:
    idx = np.arange(k)
    return from_table(np.repeat(idx[:, None], k, axis=1), [f"l{i}" for i in range(k)])


def rectangular_band(rows: int, cols: int) -> FiniteSemigroup:
    """I x Λ with (i,λ)(j,μ) = (i,μ); element (i,λ) has index i*cols + λ."""
    G = trivial()
    S = rees_matrix(G, np.zeros((cols, rows), dtype=np.int64))
    names = [f"({i},{l})" for i in range(rows) for l in range(cols)]
    return FiniteSemigroup(S.table, names)


def rees_matrix_z2() -> FiniteSemigroup:
    """M[Z/2; 2, 2; P] with P = [[1, 1], [1, g]]: 8 elements, not a band."""
    return rees_matrix(cyclic_group(2), [[0, 0], [0, 1]])


def default_generators(S: FiniteSemigroup, name: Optional[str] = None) -> GeneratingMap:
    if name in PREFERRED_GENERATORS:
        return GeneratingMap.from_dict(S, PREFERRED_GENERATORS[name])
    return irredundant_generating_map(S)


BUILTINS: Dict[str, Callable[[], FiniteSemigroup]] = {
    "trivial": trivial,
    "z2": lambda: cyclic_group(2),
    "z3": lambda: cyclic_group(3),
    "z2_0": lambda: zero_group(2),
    "z3_0": lambda: zero_group(3),
    "sl": semilattice,
    "chain3": lambda: chain(3),
    "null": null_semigroup,
    "lz2": lambda: left_zero(2),
    "rb12": lambda: rectangular_band(1, 2),
    "rb22": lambda: rectangular_band(2, 2),
    "rb23": lambda: rectangular_band(2, 3),
    "rm_z2": rees_matrix_z2,
}

PREFERRED_GENERATORS: Dict[str, Dict[str, str]] = {
    "trivial": {"a": "e"},
    "sl": {"a": "a", "b": "b"},
    "z2": {"g": "g"},
    "z3": {"g": "g"},
    "z2_0": {"g": "g", "z": "0"},
    "z3_0": {"g": "g", "z": "0"},
    "null": {"n": "n", "z": "0"},
}


def builtin(name: str) -> Tuple[FiniteSemigroup, GeneratingMap]:
    try:
        S = BUILTINS[name]()
    except KeyError:
        raise ParseError(f"unknown builtin {name!r}; choose from {', '.join(sorted(BUILTINS))}") from None
    return S, default_generators(S, name)
