import pytest

from classes.Catalog import builtin
from classes.CayleyGraph import DotOptions, build, export_dot, path_of_word, transition_set
from classes.Errors import NotGenerating, ParseError, UnknownLetter
from classes.KrExpansion import words_up_to
from classes.Semigroup import GeneratingMap
from conftest import SMALL_CORPUS


def test_trivial_graph(trivial_a):
    S, gmap = trivial_a
    graph = build(S, gmap)
    assert graph.vertex_count == 4
    assert graph.edge_count == 4
    assert int(graph.transition_flag.sum()) == 3
    loop = graph.find_edge((0, 0), 0, (0, 0))
    assert loop is not None and not graph.is_transition(loop)


def test_path_endpoints(sl):
    S, gmap = sl
    graph = build(S, gmap)
    word = gmap.parse_word("aba")
    path = path_of_word(graph, word)
    image = gmap.evaluate(S, word)
    assert path.vertices[0] == (S.I, image)
    assert path.vertices[-1] == (image, S.I)
    assert len(path.edges) == 3
    for eid, (u, v) in zip(path.edges, zip(path.vertices, path.vertices[1:])):
        src, _, dst = graph.edge(eid)
        assert (src, dst) == (u, v)


def test_transition_set_of_square(trivial_a):
    S, gmap = trivial_a
    graph = build(S, gmap)
    tset = transition_set(graph, (0, 0))
    assert len(tset) == 2
    assert transition_set(graph, (0, 0, 0)) == tset
    assert graph.edges_of_bits(graph.transition_bits((0, 0))) == tset


@pytest.mark.parametrize("name", SMALL_CORPUS)
def test_transition_flags_match_reachability(name):
    S, gmap = builtin(name)
    graph = build(S, gmap)
    for eid in range(graph.edge_count):
        assert graph.is_transition(eid) == graph.is_transition_by_search(eid)


@pytest.mark.parametrize("name", SMALL_CORPUS)
def test_equivalence_is_a_congruence(name):
    S, gmap = builtin(name)
    graph = build(S, gmap)
    classes = {}
    for u in words_up_to(len(gmap), 3):
        classes.setdefault((gmap.evaluate(S, u), transition_set(graph, u)), []).append(u)
    contexts = words_up_to(len(gmap), 2)
    for members in classes.values():
        u = members[0]
        for v in members[1:]:
            for w in contexts:
                assert transition_set(graph, u + w) == transition_set(graph, v + w)
                assert transition_set(graph, w + u) == transition_set(graph, w + v)


def test_networkx_view(sl):
    S, gmap = sl
    graph = build(S, gmap)
    G = graph.to_networkx()
    assert G.number_of_nodes() == graph.vertex_count
    assert G.number_of_edges() == graph.edge_count


def test_condensation(sl):
    S, gmap = sl
    graph = build(S, gmap)
    info = graph.condensation_order()
    assert info["components"] == graph.component_count
    assert info["transition_edges"] == int(graph.transition_flag.sum())
    assert info["longest_chain"] >= 1


def test_dot_export(trivial_a):
    S, gmap = trivial_a
    graph = build(S, gmap)
    dot = export_dot(graph)
    assert dot.startswith("digraph cayley {")
    assert dot.count("->") == graph.edge_count
    assert dot.count("style=bold") == 3
    assert '[label="(e,I)"]' in dot


def test_dot_only_reachable(z2_0):
    S, gmap = z2_0
    graph = build(S, gmap)
    full = graph.export_dot()
    reachable = graph.export_dot(DotOptions(only_reachable=True))
    assert reachable.count("[label=\"(") <= full.count("[label=\"(")
    assert f"v{graph.vertex_id(S.I, S.I)} [" not in reachable


def test_bad_words(sl):
    S, gmap = sl
    graph = build(S, gmap)
    with pytest.raises(ParseError):
        graph.path_edges(())
    with pytest.raises(UnknownLetter):
        graph.path_edges((5,))


def test_letters_must_generate(z2_0):
    S, _ = z2_0
    with pytest.raises(NotGenerating):
        build(S, GeneratingMap(("g",), (1,)))
