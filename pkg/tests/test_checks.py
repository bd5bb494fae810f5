import re

import pytest

from jwlattice import checks

IDS = [cid for cid, _ in checks.list_checks()]
RECORD = re.compile(r'^check=(\S+) model=(\S+) n=(\d+) m=(\d+) residual=(\S+) threshold=(\S+) '
                    r'pass=(true|false) details="([^"]*)"$')


def test_registry_contents():
    assert IDS == [
        "duality.isometry", "duality.inverse", "zero.map", "killing", "symmetry.relations",
        "ll.symmetry", "L.symmetry", "mu.invariance", "gamma.dim", "contraction.split",
        "mu.composition", "frobenius", "tangle.adjoint", "planar.iso", "sft.smatrix",
        "psi.star", "psi.contraction", "psi.isometry", "psi.inclusion", "selfdual",
        "duality.tangles", "zd.dft", "lift.shading", "modularity.negative",
    ]
    assert all(text for _, text in checks.list_checks())


@pytest.mark.parametrize("cid", IDS)
@pytest.mark.parametrize("name", ["fibonacci", "ising", "z3", "semion"])
def test_every_check_passes_at_two_by_two(cid, name):
    rep = checks.run_check(cid, name, 2, 2)
    assert rep.passed, rep.record()


@pytest.mark.parametrize("cid", IDS)
@pytest.mark.parametrize("name", ["fibonacci", "z5"])
def test_every_check_passes_at_three_by_two(cid, name):
    rep = checks.run_check(cid, name, 3, 2)
    assert rep.passed, rep.record()


def test_record_format():
    rep = checks.run_check("gamma.dim", "ising", 2, 3, tol=1e-9)
    hit = RECORD.match(rep.record())
    assert hit, rep.record()
    assert hit.group(1, 2, 3, 4, 7) == ("gamma.dim", "ising", "2", "3", "true")
    assert hit.group(6) == "1.0e-09"


def test_unknown_check():
    with pytest.raises(checks.UnknownCheck):
        checks.run_check("no.such.check", "fibonacci")
    with pytest.raises(checks.UnknownCheck):
        checks.run_suite(["killing", "no.such.check"], "fibonacci")


def test_budget():
    with pytest.raises(checks.BudgetExceeded):
        checks.run_check("duality.isometry", "ising", 3, 2, budget=5)
    rep, = checks.run_suite(["duality.isometry"], "ising", 3, 2, budget=5)
    assert not rep.passed and rep.residual == float("inf")
    assert "budget" in rep.details


def test_negative_control_ignores_model_argument():
    rep = checks.run_check("modularity.negative", "fibonacci")
    assert rep.model == "symmetric-z2"
    assert rep.negative and rep.passed and rep.residual >= 0.5
    assert "rank 1 of 2" in rep.details


def test_isometry_fails_without_modularity():
    rep = checks.run_check("duality.isometry", "symmetric-z2")
    assert not rep.passed and rep.residual >= 0.5


def test_tolerance_is_respected():
    assert not checks.run_check("killing", "fibonacci", tol=0.0).passed


def test_literal_inclusion_order_fails():
    # the shifted-index form of the inclusion rule does not hold; only the
    # form that pairs iota_(k+1) on the left with iota_k on the right does
    rep = checks.run_check("psi.inclusion", "fibonacci")
    assert rep.passed
    literal = float(re.search(r"F iota_k = iota_\(k\+1\) F: (\S+)", rep.details).group(1))
    assert literal > 0.1


def test_composition_constant_reported():
    rep = checks.run_check("mu.composition", "fibonacci")
    assert "c*delta=1.000000000000" in rep.details
    edge = re.search(r"\(1,1\)=(\S+)", rep.details).group(1)
    assert float(edge) == pytest.approx(1.902113, abs=1e-6)


def test_sampling_is_recorded():
    rep = checks.run_check("duality.isometry", "fibonacci", 2, 2)
    assert rep.details.startswith("full basis")


def test_runs_are_repeatable():
    a = [r.record() for r in checks.run_suite(IDS, "ising", 2, 2, seed=3)]
    b = [r.record() for r in checks.run_suite(IDS, "ising", 2, 2, seed=3)]
    assert a == b
