import math
from fractions import Fraction as Q

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from jwlattice import anyons, conf as cf, tangles as tg

MODULAR = anyons.MODULAR_BUILTINS
PHI = (1 + math.sqrt(5)) / 2


@pytest.mark.parametrize("name", MODULAR + ("symmetric-z2",))
def test_unknot_is_dimension(name):
    m = anyons.load_model(name)
    np.testing.assert_allclose(tg.link_values(m, tg.unknot_scene()), m.dims, atol=1e-12)


def test_fibonacci_hopf_values():
    m = anyons.load_model("fibonacci")
    np.testing.assert_allclose(tg.link_values(m, tg.hopf_scene()), [[1, PHI], [PHI, -1]], atol=1e-12)


@pytest.mark.parametrize("name", MODULAR)
def test_hopf_gives_s_matrix(name):
    m = anyons.load_model(name)
    hopf = tg.link_values(m, tg.hopf_scene()) / math.sqrt(m.global_dim)
    np.testing.assert_allclose(hopf, anyons.s_matrix(m), atol=1e-12)


def test_mirror_choice_is_pinned(monkeypatch):
    # the other crossing convention conjugates the Hopf pairing, which z3 notices
    m = anyons.load_model("z3")
    S = anyons.s_matrix(m)
    monkeypatch.setattr(tg, "LEFT_OVER_SIGN", -tg.LEFT_OVER_SIGN)
    flipped = tg.link_values(m, tg.hopf_scene()) / math.sqrt(m.global_dim)
    np.testing.assert_allclose(flipped, S.conj(), atol=1e-12)
    assert np.abs(flipped - S).max() > 0.5


@pytest.mark.parametrize("name", MODULAR)
def test_two_strand_killing(name):
    m = anyons.load_model(name)
    ring = tg.link_values(m, tg.ring_scene())
    pair = np.einsum("x,xbc->bc", m.dims, ring)
    want = np.array([[m.global_dim if m.dual(b) == c else 0 for c in range(m.rank)] for b in range(m.rank)])
    np.testing.assert_allclose(pair, want, atol=1e-10)


def test_crossing_counts():
    got = {nm: tg.count_crossings(tg.ll_diagram(*nm)) for nm in ((1, 1), (2, 2), (3, 2), (2, 3))}
    assert got[(1, 1)] == {"total": 0, "monochromatic": 0, "inter": 0}
    assert got[(2, 2)] == {"total": 8, "monochromatic": 2, "inter": 6}
    assert got[(3, 2)] == {"total": 18, "monochromatic": 4, "inter": 14}
    assert got[(2, 3)] == {"total": 21, "monochromatic": 6, "inter": 15}
    assert tg.count_crossings(tg.ll_diagram(2, 2, with_red=False))["total"] == 1


def _pairing_values(model, n, m, view=tg.VIEW, tilt=None):
    sp = cf.conf_space(model, n, m)
    N = sp.dim
    rows, cols = np.divmod(np.arange(N * N), N)
    lb, pb, _ = cf._lattice_labels("b", sp, rows)
    lr, pr, _ = cf._lattice_labels("r", sp, cols)
    diagram = tg.compile_scene(tg.ll_scene(n, m), view=view, tilt=tilt)
    return diagram, tg.evaluate_many(model, diagram, {**lb, **lr}, {**pb, **pr}, N * N)


@pytest.mark.parametrize("name", ["fibonacci", "ising"])
@pytest.mark.parametrize("size", [(2, 2), (3, 2), (2, 3)])
def test_sweep_direction_does_not_matter(name, size):
    m = anyons.load_model(name)
    _, a = _pairing_values(m, *size, tilt=tg.SWEEPS[0])
    _, b = _pairing_values(m, *size, tilt=tg.SWEEPS[1])
    np.testing.assert_allclose(a, b, atol=1e-12)


@pytest.mark.parametrize("name", ["fibonacci", "ising"])
def test_view_direction_does_not_matter(name):
    m = anyons.load_model(name)
    d0, a = _pairing_values(m, 3, 2)
    d1, b = _pairing_values(m, 3, 2, view=(Q(1, 3), Q(2, 7)))
    assert len(d0.crossings) != len(d1.crossings)
    np.testing.assert_allclose(a, b, atol=1e-12)


def test_batched_matches_scalar():
    m = anyons.load_model("ising")
    sp = cf.conf_space(m, 2, 2)
    picks = np.arange(sp.dim)
    lb, pb, _ = cf._lattice_labels("b", sp, picks)
    diagram = tg.ll_diagram(2, 2, with_red=False)
    many = tg.evaluate_many(m, diagram, lb, pb, sp.dim)
    for k in picks:
        labels = {s: int(v[k]) for s, v in lb.items()}
        payloads = {b: {v[k]: 1.0} for b, v in pb.items()}
        assert tg.evaluate_diagram(m, diagram, labels, payloads) == pytest.approx(many[k], abs=1e-13)


def test_scene_size_checked():
    with pytest.raises(tg.SizeMismatch):
        tg.ll_scene(0, 2)


def test_overlapping_strands_rejected():
    pts = [(0, 0, 0), (1, 0, 0), (1, 1, 0), (0, 1, 0)]
    scene = tg.Scene([], [tg.Strand("a", pts, closed=True), tg.Strand("b", [(x, y, z + 1) for x, y, z in pts], closed=True)])
    with pytest.raises(tg.NonGenericScene):
        tg.compile_scene(scene, view=(Q(0), Q(0)))


def test_open_diagram_rejected():
    box = tg.Box("v", (0, 0, 0), "vec", ["a"])
    scene = tg.Scene([box], [tg.Strand("a", [(0, 0, 0), (0, -1, 0)])])
    with pytest.raises((tg.OpenDiagram, tg.NonGenericScene)):
        tg.evaluate_diagram(anyons.load_model("fibonacci"), tg.compile_scene(scene))


def test_export_is_stable():
    text = tg.ll_diagram(2, 2).export()
    assert text == tg.compile_scene(tg.ll_scene(2, 2)).export()
    assert sum(line.startswith("crossing") for line in text.splitlines()) == 8


_jitter = st.fractions(min_value=Q(-1, 40), max_value=Q(1, 40), max_denominator=97)


@settings(max_examples=30, deadline=None)
@given(st.lists(st.tuples(_jitter, _jitter, _jitter), min_size=8, max_size=8))
def test_hopf_survives_small_isotopy(shifts):
    m = anyons.load_model("fibonacci")
    base = tg.hopf_scene()
    moved = []
    k = 0
    for s in base.strands:
        pts = []
        for p in s.points:
            dx, dy, dz = shifts[k]
            k += 1
            pts.append((Q(p[0]) + dx, Q(p[1]) + dy, Q(p[2]) + dz))
        moved.append(tg.Strand(s.name, pts, s.color, s.closed))
    try:
        vals = tg.link_values(m, tg.Scene([], moved))
    except tg.NonGenericScene:
        return
    np.testing.assert_allclose(vals, [[1, PHI], [PHI, -1]], atol=1e-12)
