import numpy as np
import pytest

from floqzx import (DiagramError, ErrorSet, ZXDiagram, apply_error,
                    classify_error, detecting_regions, detector_matrix,
                    equal_up_to_scalar, interpret, rule, single_spider,
                    wire_diagram, zx_distance)
from floqzx.errors import enumerate_errors

from conftest import zz_measurement


def test_empty_error_is_identity():
    d = wire_diagram(1)
    assert equal_up_to_scalar(interpret(apply_error(d, ErrorSet.of())), interpret(d))


def test_x_flip_inserts_x_pi():
    d = wire_diagram(1)
    (eid,) = d.edges
    faulty = apply_error(d, ErrorSet.of((eid, "X")))
    added = set(faulty.vertices.items()) - set(d.vertices.items())
    assert {kp for _, kp in added} == {("X", 2)}


def test_y_counts_weight_one():
    d = wire_diagram(2)
    e1, e2 = sorted(d.edges)
    both = ErrorSet.of((e1, "X"), (e1, "Z"))
    assert both.weight() == 1
    assert both.by_edge() == {e1: "Y"}
    mixed = ErrorSet.of((e1, "X"), (e1, "Z"), (e2, "Z"))
    assert mixed.weight() == 2


def test_classify_trivial_detectable_live():
    # live: X flip on a bare wire
    d = wire_diagram(1)
    (eid,) = d.edges
    assert classify_error(d, ErrorSet.of((eid, "X"))) == "live"
    # trivial: Z flip on the wire out of a Z spider state |+> is absorbed...
    # use X flip next to a green degree-1 state: X|+> = |+>
    s = single_spider("Z", 0, 0, 1)
    (eid,) = s.edges
    assert classify_error(s, ErrorSet.of((eid, "X"))) == "trivial"
    # detectable: single X flip between two consecutive ZZ measurements
    from floqzx.synth import Wires, build_fragment

    d2 = ZXDiagram()
    w = Wires(d2, 2)
    build_fragment(w, {0: "Z", 1: "Z"})
    build_fragment(w, {0: "Z", 1: "Z"})
    w.close()
    # the seam: an edge joining two degree-3 wire spiders of the two rounds
    wire_spiders = {v for v in d2.spiders() if d2.degree(v) == 3}
    seam = [e for e, (u, v) in sorted(d2.edges.items())
            if u in wire_spiders and v in wire_spiders]
    assert seam
    assert classify_error(d2, ErrorSet.of((seam[0], "X"))) == "detectable"


def test_zx_distance_bare_wire():
    d = wire_diagram(1)
    w, witness = zx_distance(d, 2)
    assert w == 1 and witness.weight() == 1


def test_zx_distance_restricted_edges():
    d = wire_diagram(2)
    e1, e2 = sorted(d.edges)
    w, witness = zx_distance(d, 2, edges=[e2])
    assert w == 1 and set(f.edge for f in witness.flips) == {e2}


def test_enumeration_order_deterministic():
    errs = list(enumerate_errors([3, 1, 2], 2))
    first = errs[0]
    assert sorted(f.edge for f in first.flips) == [1, 2]
    assert [e.by_edge() for e in errs[:3]] == [
        {1: "X", 2: "X"}, {1: "X", 2: "Z"}, {1: "X", 2: "Y"}]


def test_weight_accounting_invariant():
    # wt with X and Z on one edge equals wt with a single flip there plus rest
    e = ErrorSet.of((1, "X"), (1, "Z"), (2, "X"), (3, "Z"))
    e2 = ErrorSet.of((1, "Y"), (2, "X"), (3, "Z"))
    assert e.weight() == e2.weight() == 3


def test_detector_matrix_no_regions():
    d = wire_diagram(1)
    mat = detector_matrix(d, [])
    assert mat.matrix.shape[0] == 0
    assert mat.syndrome(ErrorSet.of((sorted(d.edges)[0], "X"))).size == 0


def test_detector_matrix_rejects_non_detecting():
    from floqzx import PauliWeb

    d = zz_measurement()
    in_edges = [next(e for e, _ in d.incident(v)) for v in d.inputs]
    out_edges = [next(e for e, _ in d.incident(v)) for v in d.outputs]
    w = PauliWeb({in_edges[0]: "Z", out_edges[0]: "Z"})
    with pytest.raises(DiagramError):
        detector_matrix(d, [w])


def test_r_n_plus_nullspace_dimension():
    # n=8: the n/2 - 1 basis regions leave a nullspace of 3n/2 + 1 = 13
    r = rule("r_n+", 8)
    regions = detecting_regions(r.rhs)
    assert len(regions) == 3
    mat = detector_matrix(r.rhs, regions)
    assert mat.nullspace_dimension() == 13
    # n=4: one region, nullspace 2*4 - 1 = 7
    r4 = rule("r_n+", 4)
    mat4 = detector_matrix(r4.rhs, detecting_regions(r4.rhs))
    assert mat4.nullspace_dimension() == 7


def test_r_n_plus_proof_basis_spans_nullspace():
    # basis {single Z flips} + {r_0: X on centre-A edges} + {r_i: X on both
    # internal edges of gadget i} spans all syndrome-free vectors
    from floqzx import gf2

    for n in (4, 8):
        r = rule("r_n+", n)
        rhs = r.rhs
        mat = detector_matrix(rhs, detecting_regions(rhs))
        internal = rhs.internal_edges()
        centres = [v for v in rhs.spiders()
                   if all(rhs.kind(o) != "B" for _, o in rhs.incident(v))]
        gadgets = [v for v in rhs.spiders() if v not in centres]
        a = centres[0]
        vecs = []
        for e in internal:  # single Z flips
            vecs.append(mat.error_vector(ErrorSet.of((e, "Z"))))
        r0 = ErrorSet.of(*(((e, "X")) for e, _ in rhs.incident(a)))
        vecs.append(mat.error_vector(r0))
        for g in gadgets:
            legs = [e for e, o in rhs.incident(g) if o in centres]
            assert len(legs) == 2
            vecs.append(mat.error_vector(ErrorSet.of(*((e, "X") for e in legs))))
        vm = np.array(vecs, dtype=np.uint8)
        assert gf2.rank(vm) == 3 * n // 2 + 1
        assert mat.nullspace_dimension() == 3 * n // 2 + 1
        for v in vecs:
            assert not np.any(mat.matrix @ v & 1)


def test_syndrome_implies_detectable():
    # P.v != 0 => semantically detectable, on the r_4 cycle
    r = rule("r_4")
    rhs = r.rhs
    mat = detector_matrix(rhs, detecting_regions(rhs))
    base = interpret(rhs)
    for err in enumerate_errors(rhs.internal_edges(), 1):
        if np.any(mat.syndrome(err)):
            assert classify_error(rhs, err, base=base) == "detectable"


def test_error_witness_text():
    d = wire_diagram(1)
    (eid,) = d.edges
    e = ErrorSet.of((eid, "Y"))
    text = e.to_text(d)
    u, v = d.edges[eid]
    assert text == f"flip {u} {v} Y\n"
