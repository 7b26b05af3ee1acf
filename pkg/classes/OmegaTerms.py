import logging
import re
from dataclasses import dataclass
from typing import Dict, List, Optional, Tuple, Union

import numpy as np

from .Errors import ParseError
from .Semigroup import FiniteSemigroup, omega_powers

logger = logging.getLogger('OmegaTerms')

# Assignments evaluated per numpy batch
CHUNK_SIZE = 1 << 16

_FACTOR = re.compile(
    r"([a-z])"
    r"(?:\^(?:(\d+)|([wω])|[{(]\s*([wω])\s*(?:([+-])\s*(\d+))?\s*[})]))?"
)


@dataclass(frozen=True)
class OmegaFactor:
    """Variable with exponent: a positive power, or ω+exponent when `omega`."""
    var: str
    omega: bool = False
    exponent: int = 1

    def __str__(self):
        if self.omega:
            if self.exponent == 0:
                return f"{self.var}^w"
            return f"{self.var}^{{w{self.exponent:+d}}}"
        return self.var if self.exponent == 1 else f"{self.var}^{self.exponent}"


@dataclass(frozen=True)
class OmegaTerm:
    factors: Tuple[OmegaFactor, ...]

    @property
    def variables(self) -> List[str]:
        seen = []
        for f in self.factors:
            if f.var not in seen:
                seen.append(f.var)
        return seen

    def __str__(self):
        return " ".join(str(f) for f in self.factors)


@dataclass(frozen=True)
class OmegaIdentity:
    lhs: OmegaTerm
    rhs: OmegaTerm

    @property
    def variables(self) -> List[str]:
        seen = self.lhs.variables
        for v in self.rhs.variables:
            if v not in seen:
                seen.append(v)
        return seen

    def __str__(self):
        return f"{self.lhs} = {self.rhs}"


@dataclass(frozen=True)
class IdentityCheck:
    holds: bool
    witness: Optional[Dict[str, int]] = None

    def __bool__(self):
        return self.holds

    def describe(self, S: FiniteSemigroup) -> Optional[Dict[str, str]]:
        if self.witness is None:
            return None
        return {v: S.name(x) for v, x in self.witness.items()}


def parse_term(text: str) -> OmegaTerm:
    """
    Parse a word over single-letter variables, each optionally raised to
    `^n`, `^w` (also `^ω`) or `^{w+k}` / `^{w-k}`.
    """
    compact = "".join(text.split())
    if not compact:
        raise ParseError("empty term")
    factors = []
    pos = 0
    while pos < len(compact):
        m = _FACTOR.match(compact, pos)
        if m is None:
            raise ParseError(f"cannot parse term {text!r} at {compact[pos:]!r}")
        var, power, bare_omega, omega, sign, shift = m.groups()
        if power is not None:
            if int(power) < 1:
                raise ParseError(f"exponent must be positive in {text!r}")
            factors.append(OmegaFactor(var, False, int(power)))
        elif bare_omega is not None:
            factors.append(OmegaFactor(var, True, 0))
        elif omega is not None:
            k = int(shift) if shift is not None else 0
            factors.append(OmegaFactor(var, True, -k if sign == "-" else k))
        else:
            factors.append(OmegaFactor(var))
        pos = m.end()
    return OmegaTerm(tuple(factors))


def parse_identity(text: str) -> OmegaIdentity:
    parts = text.split("=")
    if len(parts) != 2:
        raise ParseError(f"identity must have the form lhs=rhs, got {text!r}")
    return OmegaIdentity(parse_term(parts[0]), parse_term(parts[1]))


def _coerce(identity: Union[str, OmegaIdentity], rhs: Union[str, OmegaTerm, None]) -> OmegaIdentity:
    if isinstance(identity, OmegaIdentity):
        return identity
    if rhs is None:
        return parse_identity(identity)
    lhs = identity if isinstance(identity, OmegaTerm) else parse_term(identity)
    rhs = rhs if isinstance(rhs, OmegaTerm) else parse_term(rhs)
    return OmegaIdentity(lhs, rhs)


def _power_arrays(S: FiniteSemigroup, identity: OmegaIdentity) -> Dict[Tuple[bool, int], np.ndarray]:
    arrays = {}
    for f in identity.lhs.factors + identity.rhs.factors:
        key = (f.omega, f.exponent)
        if key in arrays:
            continue
        if f.omega:
            arrays[key] = omega_powers(S, f.exponent)
        else:
            arrays[key] = np.array([S.power(x, f.exponent) for x in range(S.order)], dtype=np.int64)
    return arrays


def _evaluate(S: FiniteSemigroup, term: OmegaTerm, values: Dict[str, np.ndarray],
              arrays: Dict[Tuple[bool, int], np.ndarray]) -> np.ndarray:
    acc = None
    for f in term.factors:
        current = arrays[(f.omega, f.exponent)][values[f.var]]
        acc = current if acc is None else S.table[acc, current]
    return acc


def satisfies_identity(S: FiniteSemigroup, identity: Union[str, OmegaIdentity, OmegaTerm],
                       rhs: Union[str, OmegaTerm, None] = None) -> IdentityCheck:
    """
    Check an ω-identity on every assignment of elements to variables.
    Assignments are enumerated with the first variable most significant;
    the first failing one is the witness.
    """
    identity = _coerce(identity, rhs)
    variables = identity.variables
    arrays = _power_arrays(S, identity)
    n = S.order
    total = n ** len(variables)
    shape = (n,) * len(variables)
    for start in range(0, total, CHUNK_SIZE):
        idx = np.arange(start, min(total, start + CHUNK_SIZE))
        digits = np.unravel_index(idx, shape)
        values = dict(zip(variables, digits))
        left = _evaluate(S, identity.lhs, values, arrays)
        right = _evaluate(S, identity.rhs, values, arrays)
        bad = np.nonzero(left != right)[0]
        if bad.size:
            k = int(bad[0])
            witness = {v: int(values[v][k]) for v in variables}
            logger.debug(f"{identity} fails at {witness}")
            return IdentityCheck(False, witness)
    return IdentityCheck(True)


# Identities used across the package
XYZ_EQ_XZ = parse_identity("xyz=xz")
APERIODIC = parse_identity("x^w=x^{w+1}")
UNION_OF_GROUPS = parse_identity("x^{w+1}=x")
