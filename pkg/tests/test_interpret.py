import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from floqzx import (BudgetExceeded, DiagramError, ZXDiagram, canonical_key,
                    equal_up_to_scalar, interpret, single_spider, wire_diagram)
from floqzx.interpret import apply_boundary_paulis

from conftest import as_map, pauli_matrix


def test_empty_diagram_is_scalar_one():
    m = interpret(ZXDiagram())
    assert m.ints.shape == (1, 1) and m.ints[0, 0] == 1


def test_wire_is_identity():
    m = interpret(wire_diagram(1))
    assert np.array_equal(m.entries, np.eye(2))


def test_z_spider_degree2_phase0_is_identity():
    m = interpret(single_spider("Z", 0, 1, 1))
    assert np.array_equal(m.entries, np.eye(2))


def test_x_state_is_ket_zero():
    m = interpret(single_spider("X", 0, 0, 1))
    assert equal_up_to_scalar(m, as_map(np.array([[1], [0]]), 1, 0))


def test_z_state_is_ket_plus():
    m = interpret(single_spider("Z", 0, 0, 1))
    assert equal_up_to_scalar(m, as_map(np.array([[1], [1]]), 1, 0))


def test_spider_formulas_full_matrix():
    # Z spider: |0..0><0..0| + i^k |1..1><1..1|
    m = interpret(single_spider("Z", 1, 2, 1))
    want = np.zeros((2, 4), dtype=complex)
    want[0, 0] = 1
    want[1, 3] = 1j
    assert np.allclose(m.entries, want)
    # X spider entries 2^{-d/2} (1 + i^k (-1)^{|b|})
    m = interpret(single_spider("X", 3, 1, 1))
    h = np.array([[1, 1], [1, -1]]) / np.sqrt(2)
    want = h @ np.diag([1, -1j]) @ h
    assert np.allclose(m.entries, want)


def test_cnot_shape():
    d = ZXDiagram()
    ci, ti = d.add_boundary("in"), d.add_boundary("in")
    co, to = d.add_boundary("out"), d.add_boundary("out")
    g, r = d.add_vertex("Z", 0), d.add_vertex("X", 0)
    for u, v in [(ci, g), (g, co), (ti, r), (r, to), (g, r)]:
        d.add_edge(u, v)
    cnot = np.array([[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 0, 1], [0, 0, 1, 0]])
    assert equal_up_to_scalar(interpret(d), as_map(cnot, 2, 2))


def test_hadamard_box():
    d = ZXDiagram()
    i, o = d.add_boundary("in"), d.add_boundary("out")
    h = d.add_vertex("H")
    d.add_edge(i, h)
    d.add_edge(h, o)
    assert equal_up_to_scalar(interpret(d), as_map(np.array([[1, 1], [1, -1]]), 1, 1))


def test_parallel_edges_interpret_like_fused_legs():
    # two spiders joined by two parallel edges = joined by one edge, up to scalar
    def pair(n_edges):
        d = ZXDiagram()
        a, b = d.add_vertex("Z", 0), d.add_vertex("Z", 0)
        for _ in range(n_edges):
            d.add_edge(a, b)
        for side, v in (("in", a), ("out", b)):
            bd = d.add_boundary(side)
            d.add_edge(bd, v)
        return interpret(d)

    assert equal_up_to_scalar(pair(1), pair(2))


def test_scalar_multiple_and_distinct_maps():
    a = as_map(np.array([[1, 0], [0, 1]]), 1, 1)
    b = as_map(2 * np.array([[1, 0], [0, 1]]), 1, 1)
    x = as_map(np.array([[0, 1], [1, 0]]), 1, 1)
    assert equal_up_to_scalar(a, b)
    assert not equal_up_to_scalar(a, x)
    zero = as_map(np.zeros((2, 2)), 1, 1)
    assert equal_up_to_scalar(zero, zero)
    assert not equal_up_to_scalar(zero, a)
    with pytest.raises(ValueError):
        equal_up_to_scalar(a, as_map(np.eye(4), 2, 2))


def test_fusion_axiom_up_to_scalar():
    # spiders of the same colour joined by an edge fuse, phases adding
    for k1 in range(4):
        for k2 in range(4):
            d = ZXDiagram()
            a, b = d.add_vertex("Z", k1), d.add_vertex("Z", k2)
            d.add_edge(a, b)
            legs = []
            for v, side in [(a, "in"), (a, "out"), (b, "out")]:
                bd = d.add_boundary(side)
                d.add_edge(bd, v)
            fused = single_spider("Z", k1 + k2, 1, 2)
            assert equal_up_to_scalar(interpret(d), interpret(fused))


def test_ocm_relabelling_exact():
    # permuting ids changes contraction order but not one entry of the result
    d = ZXDiagram()
    w_in = [d.add_boundary("in") for _ in range(2)]
    w_out = [d.add_boundary("out") for _ in range(2)]
    g1, g2 = d.add_vertex("Z", 1), d.add_vertex("X", 3)
    d.add_edge(w_in[0], g1), d.add_edge(g1, w_out[0])
    d.add_edge(w_in[1], g2), d.add_edge(g2, w_out[1])
    d.add_edge(g1, g2)
    base = interpret(d)
    rng = np.random.default_rng(7)
    vids = sorted(d.vertices)
    eids = sorted(d.edges)
    for _ in range(5):
        vmap = dict(zip(vids, (int(v) + 100 for v in rng.permutation(len(vids)))))
        emap = dict(zip(eids, (int(e) + 100 for e in rng.permutation(len(eids)))))
        other = interpret(d.relabelled(vmap, emap))
        assert np.array_equal(base.ints, other.ints)
        assert base.sqrt2_pow == other.sqrt2_pow


def test_budget_errors():
    with pytest.raises(BudgetExceeded):
        interpret(wire_diagram(9), max_boundary=16)
    with pytest.raises(DiagramError):
        d = ZXDiagram()
        d.add_boundary("in")
        interpret(d)


def test_boundary_pauli_application_matches_edge_flips():
    from floqzx import ErrorSet, apply_error

    d = single_spider("Z", 0, 1, 2)
    base = interpret(d)
    for eid in d.edges:
        for kind in ("X", "Z", "Y"):
            direct = interpret(apply_error(d, ErrorSet.of((eid, kind))))
            # edge eid attaches boundary vertex in position order
            u, v = d.edges[eid]
            bvert = u if d.kind(u) == "B" else v
            if bvert in d.inputs:
                fast = apply_boundary_paulis(base, {}, {d.inputs.index(bvert): kind})
            else:
                fast = apply_boundary_paulis(base, {d.outputs.index(bvert): kind}, {})
            assert canonical_key(direct) == canonical_key(fast)


def test_canonical_key_scalar_invariance():
    a = as_map(np.array([[2, 0], [0, 2j]]), 1, 1)
    b = as_map(np.array([[3, 0], [0, 3j]]), 1, 1)
    c = as_map(np.array([[2, 0], [0, -2j]]), 1, 1)
    assert canonical_key(a) == canonical_key(b)
    assert canonical_key(a) != canonical_key(c)
