import pytest

from floqzx import DiagramError, ZXDiagram, single_spider, wire_diagram


def test_empty_diagram_validates():
    assert ZXDiagram().validate().ok


def test_dangling_boundary_fails():
    d = ZXDiagram()
    d.add_boundary("in")
    rep = d.validate()
    assert not rep.ok
    assert any("boundary degree" in v for v in rep.violations)


def test_hadamard_degree_enforced():
    d = ZXDiagram()
    h = d.add_vertex("H")
    s = d.add_vertex("Z", 0)
    for _ in range(3):
        b = d.add_boundary("out")
        d.add_edge(b, s)
    d.add_edge(h, s)
    # H has one leg so far
    assert any("Hadamard degree" in v for v in d.validate().violations)


def test_self_loop_rejected():
    d = ZXDiagram()
    s = d.add_vertex("Z")
    with pytest.raises(DiagramError):
        d.add_edge(s, s)


def test_phase_normalised_mod_4():
    d = ZXDiagram()
    v = d.add_vertex("Z", 7)
    assert d.phase(v) == 3
    d.set_phase(v, -1)
    assert d.phase(v) == 3


def test_parallel_edges_are_distinct():
    d = ZXDiagram()
    a = d.add_vertex("Z")
    b = d.add_vertex("X")
    e1 = d.add_edge(a, b)
    e2 = d.add_edge(a, b)
    assert e1 != e2
    assert d.degree(a) == 2


def test_text_round_trip_bit_exact():
    d = wire_diagram(2)
    s = single_spider("Z", 1, 1, 2)
    text = s.to_text()
    again = ZXDiagram.from_text(text)
    assert again.to_text() == text
    assert again.vertices == s.vertices
    assert list(again.edges.values()) == list(s.edges.values())
    assert (again.inputs, again.outputs) == (s.inputs, s.outputs)
    # parallel edges survive the round trip
    d2 = ZXDiagram()
    a, b = d2.add_vertex("Z"), d2.add_vertex("X")
    d2.add_edge(a, b)
    d2.add_edge(a, b)
    assert ZXDiagram.from_text(d2.to_text()).to_text() == d2.to_text()


def test_text_comments_and_errors():
    text = "# comment\nnode 0 Z 0\n"
    d = ZXDiagram.from_text(text)
    assert d.vertices == {0: ("Z", 0)}
    with pytest.raises(DiagramError):
        ZXDiagram.from_text("frobnicate 1 2\n")


def test_colour_flip_swaps_spiders_only():
    d = ZXDiagram()
    z = d.add_vertex("Z", 1)
    x = d.add_vertex("X", 2)
    h = d.add_vertex("H")
    f = d.colour_flipped()
    assert f.vertices[z] == ("X", 1)
    assert f.vertices[x] == ("Z", 2)
    assert f.vertices[h] == ("H", 0)


def test_split_edge():
    d = wire_diagram(1)
    (eid,) = list(d.edges)
    w, e1, e2 = d.split_edge(eid, "Z", 2)
    assert d.degree(w) == 2
    assert eid not in d.edges
    assert d.validate().ok
