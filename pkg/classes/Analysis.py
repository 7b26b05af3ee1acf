import logging
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple, Union

import numpy as np

from .Errors import (
    NotAJClassSubsemigroup, NotAMorphismOfRequiredKind, PreconditionFailed, StepBudget,
)
from .KrExpansion import KrExpansion, induced_hom, kr_expand
from .OmegaTerms import OmegaIdentity, parse_identity, satisfies_identity
from .PerformanceMonitor import performance_monitor
from .Semigroup import (
    FiniteSemigroup, GeneratingMap, Homomorphism, adjoin_identity, generated_subsemigroup, greens,
    idempotent_exponent, idempotents, identity_generating_map, irredundant_generating_map, omega_power,
    subsemigroup,
)
from .globals import DEFAULT_BUDGET, timing_decorator

logger = logging.getLogger('Analysis')

# Rows of pair-comparison matrices evaluated per numpy batch
_BLOCK_CELLS = 1 << 22


# Equidivisibility

@dataclass(frozen=True)
class EquidivisibilityReport:
    verdict: bool
    witness: Optional[Tuple[int, int, int, int]] = None

    def __bool__(self):
        return self.verdict


def has_middle_element(S: FiniteSemigroup, u: int, v: int, x: int, y: int) -> bool:
    """Is there t in S^I with (ut = x and v = ty) or (u = xt and tv = y)?"""
    mt = S.monoid_table
    for t in range(S.order + 1):
        if mt[u, t] == x and v == mt[t, y]:
            return True
        if u == mt[x, t] and mt[t, v] == y:
            return True
    return False


def _pair_groups(S: FiniteSemigroup) -> Dict[int, np.ndarray]:
    """Pair index u*n+v grouped by the product uv, each group ascending."""
    flat = S.table.ravel()
    order = np.argsort(flat, kind='stable')
    bounds = np.searchsorted(flat[order], np.arange(S.order + 1))
    return {p: order[bounds[p]:bounds[p + 1]] for p in range(S.order) if bounds[p + 1] > bounds[p]}


def _one_way_refinement(mt: np.ndarray, u: np.ndarray, v: np.ndarray) -> np.ndarray:
    """cond[r, c]: some t in S^I has u_r t = u_c and v_r = t v_c."""
    m = len(u)
    cond = np.zeros((m, m), dtype=bool)
    right_of_t = mt[:, v]  # [t, c] = t·v_c
    block = max(1, _BLOCK_CELLS // max(1, mt.shape[0] * m))
    for start in range(0, m, block):
        rows = slice(start, min(m, start + block))
        left = mt[u[rows]][:, :, None] == u[None, None, :]
        match = right_of_t[None, :, :] == v[rows][:, None, None]
        cond[rows] = (left & match).any(axis=1)
    return cond


@timing_decorator
def is_equidivisible(S: FiniteSemigroup) -> EquidivisibilityReport:
    """
    Brute force over all u, v, x, y with uv = xy. The witness takes the
    first failing (u, v) and, for it, the last failing (x, y).
    """
    n = S.order
    mt = S.monoid_table
    best = None
    for p, pairs in _pair_groups(S).items():
        if len(pairs) < 2:
            continue
        u, v = pairs // n, pairs % n
        cond = _one_way_refinement(mt, u, v)
        bad = np.argwhere(~(cond | cond.T))
        if bad.size:
            r = int(bad[0, 0])
            c = int(bad[bad[:, 0] == r, 1].max())
            quad = (int(u[r]), int(v[r]), int(u[c]), int(v[c]))
            if best is None or quad[:2] < best[:2]:
                best = quad
    if best is not None:
        logger.debug(f"Equidivisibility fails at {tuple(S.name(x) for x in best)}")
        return EquidivisibilityReport(False, best)
    return EquidivisibilityReport(True)


@dataclass(frozen=True)
class AlmostEquidivisibilityReport:
    verdict: bool
    witness: Optional[Tuple[int, int, int, int]] = None
    checked_pairs: int = 0

    def __bool__(self):
        return self.verdict


def _base_refinement_table(S: FiniteSemigroup) -> np.ndarray:
    """ok[a, b, c, d]: some t in S^I has (at = c and b = td) or (a = ct and tb = d)."""
    n = S.order
    mt = S.monoid_table
    a = np.arange(n)[:, None, None, None]
    b = np.arange(n)[None, :, None, None]
    c = np.arange(n)[None, None, :, None]
    d = np.arange(n)[None, None, None, :]
    ok = np.zeros((n, n, n, n), dtype=bool)
    for t in range(n + 1):
        ok |= (mt[a, t] == c) & (b == mt[t, d])
        ok |= (a == mt[c, t]) & (mt[t, b] == d)
    return ok


@timing_decorator
def check_almost_equidivisibility(expansion: KrExpansion) -> AlmostEquidivisibilityReport:
    """
    Distance-one equidivisibility of the expansion: whenever uv = xy in
    S_φ^KR, the projections admit a middle element t in S^I with
    (π(u)t = π(x) and π(v) = tπ(y)) or (π(u) = π(x)t and tπ(v) = π(y)).
    """
    T = expansion.result
    pi = expansion.projection.map
    ok = _base_refinement_table(expansion.base)
    n = T.order
    checked = 0
    best = None
    for p, pairs in _pair_groups(T).items():
        u, v = pairs // n, pairs % n
        pu, pv = pi[u], pi[v]
        checked += len(pairs) ** 2
        block = max(1, _BLOCK_CELLS // max(1, len(pairs)))
        for start in range(0, len(pairs), block):
            rows = slice(start, min(len(pairs), start + block))
            good = ok[pu[rows][:, None], pv[rows][:, None], pu[None, :], pv[None, :]]
            bad = np.argwhere(~good)
            if bad.size:
                r, c = int(bad[0][0]) + start, int(bad[0][1])
                quad = (int(u[r]), int(v[r]), int(u[c]), int(v[c]))
                if best is None or quad < best:
                    best = quad
                break
    if best is not None:
        return AlmostEquidivisibilityReport(False, best, checked)
    return AlmostEquidivisibilityReport(True, None, checked)


# Letter super-cancellativity

@dataclass(frozen=True)
class LscViolation:
    """`side` right: u·a = v·b; left: a·u = b·v. u and v may be the virtual identity."""
    side: str
    u: int
    a: int
    v: int
    b: int

    def describe(self, S: FiniteSemigroup) -> str:
        u, a, v, b = (S.name(x) for x in (self.u, self.a, self.v, self.b))
        if self.side == "right":
            return f"{u}·{a} = {v}·{b}"
        return f"{a}·{u} = {b}·{v}"

    def holds_in(self, S: FiniteSemigroup) -> bool:
        mt = S.monoid_table
        if self.side == "right":
            equal = mt[self.u, self.a] == mt[self.v, self.b]
        else:
            equal = mt[self.a, self.u] == mt[self.b, self.v]
        return bool(equal) and not (self.a == self.b and self.u == self.v)


@dataclass(frozen=True)
class LscReport:
    verdict: bool
    witness: Optional[LscViolation] = None
    epigroup: Optional[LscViolation] = None

    def __bool__(self):
        return self.verdict


def epigroup_witness(S: FiniteSemigroup, a: int) -> LscViolation:
    """
    With i the index of a, a^i = a^(ω+i), so u = a^(i-1) (or I when i = 1)
    and v = a^(ω+i-1) satisfy u·a = v·a with u != v.
    """
    index, _, _ = S.cycles
    i = int(index[a])
    u = S.I if i == 1 else S.power(a, i - 1)
    v = omega_power(S, a, i - 1)
    return LscViolation("right", u, a, v, a)


def is_letter_super_cancellative(S: FiniteSemigroup, gmap: GeneratingMap) -> LscReport:
    """
    Brute force over letter images a, b and u, v in S^I. Violations are
    searched right side first, then by a, b, u, v.
    """
    mt = S.monoid_table
    size = S.order + 1
    gens = sorted(set(gmap.images))
    off_diagonal = ~np.eye(size, dtype=bool)
    for side in ("right", "left"):
        for a in gens:
            for b in gens:
                if side == "right":
                    eq = mt[:, a][:, None] == mt[:, b][None, :]
                else:
                    eq = mt[a, :][:, None] == mt[b, :][None, :]
                if a == b:
                    eq &= off_diagonal
                hits = np.argwhere(eq)
                if hits.size:
                    u, v = (int(k) for k in hits[0])
                    return LscReport(False, LscViolation(side, u, a, v, b), epigroup_witness(S, gens[0]))
    return LscReport(True)


# KR-covers

@dataclass(frozen=True)
class KrCoverReport:
    verdict: bool
    generating_map: GeneratingMap
    theta: Optional[Homomorphism] = None
    expansion_order: int = 0
    search_nodes: int = 0

    def __bool__(self):
        return self.verdict


class ThetaSearch:
    """
    Backtracking search for a homomorphism θ: S -> S_ψ^KR with π_ψ∘θ = Id.

    Each assignment is closed under products: the pairs (s, θ(s)) must
    generate a functional relation, so products of assigned elements are
    forced and conflicts prune the branch.
    """

    def __init__(self, expansion: KrExpansion, budget: StepBudget):
        self.logger = logging.getLogger('ThetaSearch')
        self.S = expansion.base
        self.T = expansion.result
        self.pi = expansion.projection
        self.budget = budget
        self.theta = np.full(self.S.order, -1, dtype=np.int64)
        self.trail: List[int] = []
        self.nodes = 0
        self.order = self._search_order()
        fibers = self.pi.fibers()
        idem_T = self.T.idempotent_mask
        self.candidates = {}
        for s in range(self.S.order):
            fiber = fibers[s]
            if self.S.idempotent_mask[s]:
                fiber = [c for c in fiber if idem_T[c]]
            self.candidates[s] = fiber

    def _search_order(self) -> List[int]:
        """J-classes from the top of the J-order down, idempotents first in each class."""
        g = greens(self.S)
        sizes = [g.ideal_size(j) for j in range(len(g.j_classes))]
        ranked = sorted(range(len(g.j_classes)), key=lambda j: (-sizes[j], g.j_classes[j][0]))
        idem = self.S.idempotent_mask
        order = []
        for j in ranked:
            cls = g.j_classes[j]
            order.extend([x for x in cls if idem[x]] + [x for x in cls if not idem[x]])
        return order

    def _undo(self, mark: int):
        for s in self.trail[mark:]:
            self.theta[s] = -1
        del self.trail[mark:]

    def _assign(self, s: int, c: int) -> bool:
        S, T, theta = self.S.table, self.T.table, self.theta
        mark = len(self.trail)
        theta[s] = c
        self.trail.append(s)
        queue = [s]
        while queue:
            x = queue.pop()
            cx = theta[x]
            ys = np.array(self.trail, dtype=np.int64)
            cys = theta[ys]
            for zs, cs in ((S[x, ys], T[cx, cys]), (S[ys, x], T[cys, cx])):
                current = theta[zs]
                if np.any((current >= 0) & (current != cs)):
                    self._undo(mark)
                    return False
                for z, cz in zip(zs[current < 0].tolist(), cs[current < 0].tolist()):
                    if theta[z] < 0:
                        theta[z] = cz
                        self.trail.append(z)
                        queue.append(z)
                    elif theta[z] != cz:
                        self._undo(mark)
                        return False
        return True

    def _solve(self, pos: int) -> bool:
        while pos < len(self.order) and self.theta[self.order[pos]] >= 0:
            pos += 1
        if pos == len(self.order):
            return True
        s = self.order[pos]
        for c in self.candidates[s]:
            self.budget.spend()
            self.nodes += 1
            mark = len(self.trail)
            if self._assign(s, c):
                if self._solve(pos + 1):
                    return True
                self._undo(mark)
        return False

    def run(self) -> Optional[np.ndarray]:
        try:
            found = self._solve(0)
        finally:
            performance_monitor.add_search_nodes(self.nodes)
        self.logger.debug(f"θ-search visited {self.nodes} nodes, found={found}")
        return self.theta.copy() if found else None


@timing_decorator
def is_kr_cover(S: FiniteSemigroup, budget: Optional[StepBudget] = None,
                gmap: Optional[GeneratingMap] = None) -> KrCoverReport:
    """
    Decide whether S is a KR-cover: compute S_ψ^KR for ψ (the identity map
    on the elements unless given) and search for a section θ of π_ψ.

    Raises:
        NotGenerating: a supplied ψ does not generate S
        BudgetExceeded: the expansion or the search ran out of budget
    """
    budget = budget if budget is not None else StepBudget(DEFAULT_BUDGET)
    gmap = gmap if gmap is not None else identity_generating_map(S)
    expansion = kr_expand(S, gmap, budget)
    search = ThetaSearch(expansion, budget)
    theta_map = search.run()
    if theta_map is None:
        logger.info(f"Not a KR-cover: no section over an expansion of order {expansion.order}")
        return KrCoverReport(False, gmap, None, expansion.order, search.nodes)
    theta = Homomorphism(S, expansion.result, theta_map)
    if not np.array_equal(expansion.projection.map[theta.map], np.arange(S.order)):
        raise NotAMorphismOfRequiredKind("section does not split the projection")
    logger.info(f"KR-cover: section found over an expansion of order {expansion.order}")
    return KrCoverReport(True, gmap, theta, expansion.order, search.nodes)


@dataclass(frozen=True)
class IndependenceReport:
    verdicts: Dict[str, bool]

    @property
    def agree(self) -> bool:
        return len(set(self.verdicts.values())) <= 1


def check_generating_map_independence(S: FiniteSemigroup, maps: Optional[Dict[str, GeneratingMap]] = None,
                                      budget: Optional[StepBudget] = None) -> IndependenceReport:
    """Run is_kr_cover with several generating maps; by default the identity and an irredundant one."""
    if maps is None:
        maps = {"identity": identity_generating_map(S), "irredundant": irredundant_generating_map(S)}
    verdicts = {label: is_kr_cover(S, budget, gmap).verdict for label, gmap in maps.items()}
    report = IndependenceReport(verdicts)
    if not report.agree:
        logger.error(f"KR-cover verdict depends on the generating map: {verdicts}")
    return report


def check_identity_adjunction_preserves_cover(S: FiniteSemigroup, budget: Optional[StepBudget] = None) -> bool:
    """
    For a KR-cover S, decide whether S^I is one as well.

    Raises:
        PreconditionFailed: S is not a KR-cover
    """
    budget = budget if budget is not None else StepBudget(DEFAULT_BUDGET)
    if not is_kr_cover(S, budget).verdict:
        raise PreconditionFailed("the semigroup is not a KR-cover")
    verdict = is_kr_cover(adjoin_identity(S), budget).verdict
    if not verdict:
        logger.error("S is a KR-cover but S^I is not")
    return verdict


@dataclass(frozen=True)
class LiftingReport:
    verdict: bool
    exponent: int
    letter: str
    idempotent: int
    image_size: int
    witness: Optional[int] = None


def check_lifting_through_identity(S: FiniteSemigroup, gmap: Optional[GeneratingMap] = None,
                                   budget: Optional[StepBudget] = None) -> LiftingReport:
    """
    Map S_φ^KR into the expansion of S^I over A ∪ {b}, b sent to the new
    identity, through a ↦ b^n a b^n with n the idempotent exponent of the
    target expansion. The image must lie in z·R·z for z = [b]^ω.
    """
    budget = budget if budget is not None else StepBudget(DEFAULT_BUDGET)
    gmap = gmap if gmap is not None else irredundant_generating_map(S)
    SI = adjoin_identity(S)
    letter = "b"
    while letter in gmap.alphabet:
        letter += "'"
    psi = gmap.extended(letter, SI.identity_index)
    exp_S = kr_expand(S, gmap, budget)
    exp_T = kr_expand(SI, psi, budget)
    lam = Homomorphism(S, SI, np.arange(S.order))
    n = idempotent_exponent(exp_T.result)
    b = psi.letter_index(letter)
    alpha = {a: (b,) * n + (k,) + (b,) * n for k, a in enumerate(gmap.alphabet)}
    Lambda = induced_hom(exp_S, exp_T, lam, alpha)
    R = exp_T.result
    z = omega_power(R, exp_T.letter_map[b])
    image = Lambda.image()
    for c in image:
        if R.table[R.table[z, c], z] != c:
            return LiftingReport(False, n, letter, z, len(image), c)
    return LiftingReport(True, n, letter, z, len(image))


# Completely simple retractions

@dataclass(frozen=True)
class RetractionResult:
    subset: List[int]
    subsemigroup: FiniteSemigroup
    isomorphism: Homomorphism
    lifts: Dict[int, int] = field(default_factory=dict)


def _check_aperiodic_fibers(pi: Homomorphism):
    S = pi.source
    for e in idempotents(pi.target):
        for x in pi.fiber(e):
            if omega_power(S, x, 0) != omega_power(S, x, 1):
                raise NotAMorphismOfRequiredKind(
                    f"fiber over {pi.target.name(e)} has a nontrivial group at {S.name(x)}", witness=(e, x))


@timing_decorator
def cs_retraction(pi: Homomorphism, K: Sequence[int]) -> RetractionResult:
    """
    Given an onto homomorphism π: S -> T whose idempotent fibers are
    aperiodic, and a J-class K of T closed under products, build a
    subsemigroup K' of S mapped isomorphically onto K by π.

    Raises:
        NotAMorphismOfRequiredKind: π is not onto or has a fiber with a
            nontrivial subgroup
        NotAJClassSubsemigroup: K is not a J-class, or not closed
    """
    S, T = pi.source, pi.target
    if not pi.is_surjective():
        missing = sorted(set(range(T.order)) - set(pi.image()))
        raise NotAMorphismOfRequiredKind("the morphism is not onto", witness=missing[0])
    _check_aperiodic_fibers(pi)

    K = sorted(set(int(x) for x in K))
    k_set = set(K)
    gT = greens(T)
    if not K or {int(gT.j_of[x]) for x in K} != {int(gT.j_of[K[0]])} or set(gT.j_class(K[0])) != k_set:
        raise NotAJClassSubsemigroup("subset is not a J-class", witness=K)
    arr = np.array(K, dtype=np.int64)
    if not set(T.table[arr[:, None], arr[None, :]].ravel().tolist()) <= k_set:
        raise NotAJClassSubsemigroup("J-class is not closed under products", witness=K)

    gS = greens(S)
    preimage = [x for x in range(S.order) if int(pi.map[x]) in k_set]
    J = None
    for j, cls in enumerate(gS.j_classes):
        if not gS.regular[j] or set(pi.map[cls].tolist()) != k_set:
            continue
        if all(gS.divides[x, cls[0]] for x in preimage):
            J = cls
            break
    if J is None:
        raise NotAMorphismOfRequiredKind("no regular J-class below the preimage maps onto K")

    idem_T = T.idempotent_mask
    e = min(x for x in K if idem_T[x])
    X = [f for f in K if idem_T[f] and gT.r_of[f] == gT.r_of[e]]
    Y = [f for f in K if idem_T[f] and gT.l_of[f] == gT.l_of[e]]
    J_idem = [x for x in J if S.idempotent_mask[x]]

    def lift(f, accept):
        for x in J_idem:
            if pi(x) == f and accept(x):
                return x
        raise NotAMorphismOfRequiredKind(f"no idempotent lift of {T.name(f)} in the J-class", witness=f)

    lifts = {e: lift(e, lambda x: True)}
    gamma_e = lifts[e]
    for f in X:
        if f != e:
            lifts[f] = lift(f, lambda x: S.mul(gamma_e, x) == x)
    for f in Y:
        if f != e:
            lifts[f] = lift(f, lambda x: S.mul(x, gamma_e) == x)

    h_union = set()
    for g in lifts.values():
        h_union.update(gS.h_classes[int(gS.h_of[g])])
    subset = generated_subsemigroup(S, h_union)

    images = [int(pi.map[x]) for x in subset]
    if sorted(images) != K:
        raise NotAMorphismOfRequiredKind("restriction of π is not a bijection onto K", witness=subset)
    sub, _ = subsemigroup(S, subset)
    k_sub, _ = subsemigroup(T, K)
    position = {x: i for i, x in enumerate(K)}
    iso = Homomorphism(sub, k_sub, [position[y] for y in images])
    logger.debug(f"Retraction onto a J-class of size {len(K)} found")
    return RetractionResult(subset, sub, iso, lifts)


# V-morphisms

@dataclass(frozen=True)
class VMorphismReport:
    verdict: bool
    idempotent: Optional[int] = None
    fiber: Optional[List[int]] = None
    identity: Optional[str] = None
    assignment: Optional[Dict[str, int]] = None

    def __bool__(self):
        return self.verdict


def is_V_morphism(pi: Homomorphism, identities: Sequence[Union[str, OmegaIdentity]]) -> VMorphismReport:
    """Every fiber over an idempotent, as a subsemigroup, must satisfy each identity."""
    parsed = [parse_identity(i) if isinstance(i, str) else i for i in identities]
    for e in idempotents(pi.target):
        fiber = pi.fiber(e)
        if not fiber:
            continue
        sub, incl = subsemigroup(pi.source, fiber)
        for identity in parsed:
            check = satisfies_identity(sub, identity)
            if not check.holds:
                assignment = {v: int(incl.map[x]) for v, x in check.witness.items()}
                return VMorphismReport(False, e, fiber, str(identity), assignment)
    return VMorphismReport(True)
