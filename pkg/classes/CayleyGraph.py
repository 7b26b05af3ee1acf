import logging
from collections import deque
from dataclasses import dataclass
from typing import Dict, FrozenSet, List, Optional, Sequence, Tuple

import networkx as nx
import numpy as np

from .Errors import ParseError, UnknownLetter
from .Semigroup import FiniteSemigroup, GeneratingMap, Word
from .globals import timing_decorator

logger = logging.getLogger('CayleyGraph')

Vertex = Tuple[int, int]


@dataclass(frozen=True)
class GraphPath:
    vertices: List[Vertex]
    edges: List[int]
    label: Word


@dataclass
class DotOptions:
    only_reachable: bool = False
    graph_name: str = "cayley"
    rankdir: str = "LR"
    transition_style: str = "bold"


class TwoSidedCayleyGraph:
    """
    Two-sided Cayley graph of (S, φ) on S^I x S^I.

    There is an a-edge (s1, t1) -> (s2, t2) iff s1·φ(a) = s2 and
    t1 = φ(a)·t2. Edges are enumerated by (a, s1, t2), which determine the
    edge, so edge id = a*(n+1)^2 + s1*(n+1) + t2 with n+1 = |S^I|.
    Vertex (s, t) has id s*(n+1) + t; the virtual identity is index n.
    """

    def __init__(self, S: FiniteSemigroup, gmap: GeneratingMap):
        self.logger = logging.getLogger('CayleyGraph')
        self.S = S
        self.gmap = gmap
        self.m = S.order + 1
        m = self.m
        mt = S.monoid_table

        s1 = np.repeat(np.arange(m), m)
        t2 = np.tile(np.arange(m), m)
        src, dst = [], []
        for g in gmap.images:
            src.append(s1 * m + mt[g, t2])
            dst.append(mt[s1, g] * m + t2)
        self.edge_src = np.concatenate(src)
        self.edge_dst = np.concatenate(dst)
        self.vertex_count = m * m
        self.edge_count = len(self.edge_src)

        self.scc_id = self._strongly_connected_components()
        self.transition_flag = self.scc_id[self.edge_src] != self.scc_id[self.edge_dst]
        # position of each transition edge in the tset bitsets, -1 otherwise
        self.transition_index = np.full(self.edge_count, -1, dtype=np.int64)
        flagged = np.nonzero(self.transition_flag)[0]
        self.transition_index[flagged] = np.arange(len(flagged))
        self.transition_edges = flagged
        self.component_count = int(self.scc_id.max()) + 1

        self.edge_src.setflags(write=False)
        self.edge_dst.setflags(write=False)
        self.logger.debug(f"Built graph: {self.vertex_count} vertices, {self.edge_count} edges, "
                          f"{self.component_count} components, {len(flagged)} transition edges")

    def _strongly_connected_components(self) -> np.ndarray:
        G = nx.DiGraph()
        G.add_nodes_from(range(self.vertex_count))
        pairs = np.unique(np.stack([self.edge_src, self.edge_dst], axis=1), axis=0)
        G.add_edges_from(map(tuple, pairs.tolist()))
        components = sorted((min(c), c) for c in nx.strongly_connected_components(G))
        scc_id = np.empty(self.vertex_count, dtype=np.int64)
        for k, (_, comp) in enumerate(components):
            scc_id[list(comp)] = k
        return scc_id

    # vertices and edges

    def vertex_id(self, s: int, t: int) -> int:
        return s * self.m + t

    def vertex(self, vid: int) -> Vertex:
        return divmod(int(vid), self.m)

    def edge(self, eid: int) -> Tuple[Vertex, int, Vertex]:
        """(source vertex, letter index, target vertex)"""
        return self.vertex(self.edge_src[eid]), int(eid) // (self.m * self.m), self.vertex(self.edge_dst[eid])

    def edge_id(self, letter: int, s1: int, t2: int) -> int:
        return letter * self.m * self.m + s1 * self.m + t2

    def find_edge(self, source: Vertex, letter: int, target: Vertex) -> Optional[int]:
        """Edge id of the triple, or None when the triple is not an edge."""
        g = self.gmap.images[letter]
        mt = self.S.monoid_table
        (s1, t1), (s2, t2) = source, target
        if mt[s1, g] == s2 and mt[g, t2] == t1:
            return self.edge_id(letter, s1, t2)
        return None

    def vertex_label(self, vid: int) -> str:
        s, t = self.vertex(vid)
        return f"({self.S.name(s)},{self.S.name(t)})"

    def is_transition(self, eid: int) -> bool:
        return bool(self.transition_flag[eid])

    # paths of words

    def _check_word(self, word: Sequence[int]) -> Word:
        word = tuple(int(a) for a in word)
        if not word:
            raise ParseError("words are nonempty")
        for a in word:
            if not 0 <= a < len(self.gmap):
                raise UnknownLetter(f"letter index {a} out of range", witness=a)
        return word

    def path_edges(self, word: Sequence[int]) -> np.ndarray:
        """Edge ids of p_u: edge i goes from (φ(u1..u_{i-1}), φ(u_i..)) to (φ(u1..u_i), φ(u_{i+1}..))."""
        word = self._check_word(word)
        mt = self.S.monoid_table
        images = [self.gmap.images[a] for a in word]
        k = len(word)
        prefix = [self.S.order] * (k + 1)
        suffix = [self.S.order] * (k + 1)
        for i in range(k):
            prefix[i + 1] = int(mt[prefix[i], images[i]])
        for i in range(k - 1, -1, -1):
            suffix[i] = int(mt[images[i], suffix[i + 1]])
        mm = self.m * self.m
        return np.array([word[i] * mm + prefix[i] * self.m + suffix[i + 1] for i in range(k)], dtype=np.int64)

    def path_of_word(self, word: Sequence[int]) -> GraphPath:
        edges = self.path_edges(word)
        vertices = [self.vertex(self.edge_src[edges[0]])] + [self.vertex(self.edge_dst[e]) for e in edges]
        return GraphPath(vertices, [int(e) for e in edges], tuple(int(a) for a in word))

    def transition_set(self, word: Sequence[int]) -> FrozenSet[int]:
        edges = self.path_edges(word)
        return frozenset(int(e) for e in edges[self.transition_flag[edges]])

    def transition_bits(self, word: Sequence[int]) -> int:
        """T(p_u) as a bitset over transition-edge positions."""
        edges = self.path_edges(word)
        bits = 0
        for pos in self.transition_index[edges]:
            if pos >= 0:
                bits |= 1 << int(pos)
        return bits

    def edges_of_bits(self, bits: int) -> FrozenSet[int]:
        result = []
        pos = 0
        while bits:
            if bits & 1:
                result.append(int(self.transition_edges[pos]))
            bits >>= 1
            pos += 1
        return frozenset(result)

    # oracles and views

    def successors(self, vid: int) -> List[Tuple[int, int]]:
        """(letter, target vertex id) pairs, straight from the edge condition."""
        s1, t1 = self.vertex(vid)
        mt = self.S.monoid_table
        out = []
        for a, g in enumerate(self.gmap.images):
            for t2 in np.nonzero(mt[g, :] == t1)[0]:
                out.append((a, int(mt[s1, g]) * self.m + int(t2)))
        return out

    def is_transition_by_search(self, eid: int) -> bool:
        """True iff no directed path leads from the edge's target back to its source."""
        source, target = int(self.edge_src[eid]), int(self.edge_dst[eid])
        seen = {target}
        queue = deque([target])
        while queue:
            v = queue.popleft()
            if v == source:
                return False
            for _, w in self.successors(v):
                if w not in seen:
                    seen.add(w)
                    queue.append(w)
        return True

    def to_networkx(self) -> nx.MultiDiGraph:
        """Labeled multigraph; edge keys are letters."""
        G = nx.MultiDiGraph()
        for vid in range(self.vertex_count):
            G.add_node(vid, label=self.vertex_label(vid))
        for eid in range(self.edge_count):
            letter = self.gmap.alphabet[eid // (self.m * self.m)]
            G.add_edge(int(self.edge_src[eid]), int(self.edge_dst[eid]), key=letter,
                       edge_id=eid, transition=bool(self.transition_flag[eid]))
        return G

    def reachable_vertices(self) -> List[int]:
        """Vertices on some p_u: reachable from some (I, s) and reaching some (s, I)."""
        G = nx.DiGraph()
        G.add_nodes_from(range(self.vertex_count))
        G.add_edges_from(zip(self.edge_src.tolist(), self.edge_dst.tolist()))
        I = self.S.order
        sources = [self.vertex_id(I, s) for s in range(self.S.order)]
        sinks = [self.vertex_id(s, I) for s in range(self.S.order)]
        forward = set(sources)
        for v in sources:
            forward |= nx.descendants(G, v)
        backward = set(sinks)
        for v in sinks:
            backward |= nx.ancestors(G, v)
        return sorted(forward & backward)

    def condensation_order(self) -> Dict[str, int]:
        """Component and transition-edge counts, and the longest chain of components."""
        G = nx.DiGraph()
        G.add_nodes_from(range(self.vertex_count))
        G.add_edges_from(zip(self.edge_src.tolist(), self.edge_dst.tolist()))
        components = [set(np.nonzero(self.scc_id == k)[0].tolist()) for k in range(self.component_count)]
        dag = nx.condensation(G, scc=components)
        return {
            'vertices': self.vertex_count,
            'edges': self.edge_count,
            'components': self.component_count,
            'transition_edges': int(len(self.transition_edges)),
            'longest_chain': int(nx.dag_longest_path_length(dag)),
        }

    def export_dot(self, options: Optional[DotOptions] = None) -> str:
        """DOT digraph; transition edges drawn with options.transition_style."""
        options = options or DotOptions()
        if options.only_reachable:
            keep = set(self.reachable_vertices())
        else:
            keep = set(range(self.vertex_count))
        lines = [f"digraph {options.graph_name} {{", f"  rankdir={options.rankdir};"]
        for vid in sorted(keep):
            lines.append(f'  v{vid} [label="{self.vertex_label(vid)}"];')
        for eid in range(self.edge_count):
            src, dst = int(self.edge_src[eid]), int(self.edge_dst[eid])
            if src not in keep or dst not in keep:
                continue
            letter = self.gmap.alphabet[eid // (self.m * self.m)]
            style = f", style={options.transition_style}" if self.transition_flag[eid] else ""
            lines.append(f'  v{src} -> v{dst} [label="{letter}"{style}];')
        lines.append("}")
        return "\n".join(lines) + "\n"

    def __repr__(self):
        return f"TwoSidedCayleyGraph(vertices={self.vertex_count}, edges={self.edge_count})"


@timing_decorator
def build(S: FiniteSemigroup, gmap: GeneratingMap) -> TwoSidedCayleyGraph:
    """Build Γ_φ; the letters must generate every element of S."""
    gmap.validate(S, strict=True)
    return TwoSidedCayleyGraph(S, gmap)


def path_of_word(graph: TwoSidedCayleyGraph, word: Sequence[int]) -> GraphPath:
    return graph.path_of_word(word)


def transition_set(graph: TwoSidedCayleyGraph, word: Sequence[int]) -> FrozenSet[int]:
    return graph.transition_set(word)


def export_dot(graph: TwoSidedCayleyGraph, options: Optional[DotOptions] = None) -> str:
    return graph.export_dot(options)
