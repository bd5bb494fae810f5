import json
import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from jwlattice import anyons

PHI = (1 + math.sqrt(5)) / 2


@pytest.mark.parametrize("name", anyons.MODULAR_BUILTINS + ("symmetric-z2",))
def test_builtin_consistency(name):
    m = anyons.load_model(name)
    assert anyons.pentagon_residual(m) < 1e-10
    assert anyons.hexagon_residual(m) < 1e-10
    assert anyons.f_unitarity_residual(m) < 1e-10
    assert anyons.validate_model(m).ok


def test_fibonacci_data():
    m = anyons.load_model("fibonacci")
    assert m.names == ["1", "tau"]
    np.testing.assert_allclose(m.dims, [1, PHI])
    assert m.global_dim == pytest.approx(2 + PHI)
    np.testing.assert_allclose(m.twists[1], complex(-0.809016994375, 0.587785252292), atol=1e-12)


def test_fibonacci_s_matrix():
    S = anyons.s_matrix(anyons.load_model("fibonacci"))
    want = np.array([[1, PHI], [PHI, -1]]) / math.sqrt(2 + PHI)
    np.testing.assert_allclose(S, want, atol=1e-12)


def test_ising_s_matrix():
    S = anyons.s_matrix(anyons.load_model("ising"))
    r = math.sqrt(2)
    np.testing.assert_allclose(S, np.array([[1, r, 1], [r, 0, -r], [1, -r, 1]]) / 2, atol=1e-12)


@pytest.mark.parametrize("name", ["z3", "z5"])
def test_cyclic_s_is_dft(name):
    m = anyons.load_model(name)
    d = m.rank
    S = anyons.s_matrix(m)
    np.testing.assert_allclose(np.abs(S), np.full((d, d), 1 / math.sqrt(d)), atol=1e-12)


@pytest.mark.parametrize("name", anyons.MODULAR_BUILTINS)
def test_modular_s_unitary(name):
    rep = anyons.validate_model(anyons.load_model(name))
    assert rep.modular and rep.s_unitarity < 1e-10


def test_symmetric_z2_not_modular():
    rep = anyons.validate_model(anyons.load_model("symmetric-z2"))
    assert rep.ok and not rep.modular
    assert rep.s_unitarity == pytest.approx(1.0)


@pytest.mark.parametrize("name", anyons.MODULAR_BUILTINS + ("symmetric-z2",))
def test_text_round_trip(name):
    m = anyons.load_model(name)
    back = anyons.parse_model_text(anyons.model_to_text(m))
    assert back.names == m.names
    np.testing.assert_allclose(back.fsym, m.fsym, atol=1e-15)
    np.testing.assert_allclose(back.rsym, m.rsym, atol=1e-15)
    np.testing.assert_allclose(back.dims, m.dims, atol=1e-12)


def test_load_model_accepts_text():
    text = anyons.model_to_text(anyons.load_model("semion"))
    assert anyons.load_model(text).names == ["1", "s"]


def test_unknown_model():
    with pytest.raises(anyons.UnknownModel):
        anyons.load_model("nosuchmodel")


def test_parse_errors():
    with pytest.raises(anyons.ParseError):
        anyons.parse_model_text("{not json")
    with pytest.raises(anyons.ParseError):
        anyons.parse_model_text(json.dumps({"name": "x"}))
    doc = json.loads(anyons.model_to_text(anyons.load_model("fibonacci")))
    doc["F"][0][6] = "one half"
    with pytest.raises(anyons.ParseError):
        anyons.parse_model_text(json.dumps(doc))


def test_missing_symbol():
    doc = json.loads(anyons.model_to_text(anyons.load_model("fibonacci")))
    doc["R"] = doc["R"][1:]
    with pytest.raises(anyons.MissingSymbol):
        anyons.parse_model_text(json.dumps(doc))


def test_contradicting_dims():
    doc = json.loads(anyons.model_to_text(anyons.load_model("fibonacci")))
    doc["dims"] = [["1", "1"], ["tau", "2"]]
    with pytest.raises(anyons.InconsistentData):
        anyons.parse_model_text(json.dumps(doc))


def test_bad_twist_rejected():
    doc = json.loads(anyons.model_to_text(anyons.load_model("semion")))
    doc["twists"] = [["1", "1", "0"], ["s", "0", "2"]]
    m = anyons.parse_model_text(json.dumps(doc))
    with pytest.raises(anyons.NonUnitaryTwist):
        anyons.quantum_data(m)


@settings(max_examples=25, deadline=None)
@given(st.floats(min_value=1e-6, max_value=0.5), st.floats(min_value=0, max_value=2 * math.pi))
def test_perturbation_is_detected(size, angle):
    m = anyons.load_model("fibonacci")
    tau = 1
    bad = anyons.perturbed(m, (tau, tau, tau, tau, tau, tau), size * complex(math.cos(angle), math.sin(angle)))
    rep = anyons.validate_model(bad)
    assert not rep.ok
    assert max(rep.pentagon, rep.unitarity) > size / 10
