import numpy as np
import pytest

from toledo import constructions as c
from toledo import invariants as inv
from toledo import shilov, surface
from toledo import symplectic as sp
from toledo.errors import (BadHyperbolization, DimensionMismatch, RelatorNotCentral,
                           RelatorViolation)


def test_empty_word_is_identity(fuchsian):
    assert np.array_equal(inv.evaluate_word(fuchsian, ()), np.eye(2))
    g = inv.evaluate_word_lifted(inv.lift_generators(fuchsian), ())
    assert shilov.psi(g).value == 0


def test_calibration(fuchsian):
    rep = inv.toledo(fuchsian)
    assert rep.value == 2 and rep.method == "closed"
    assert rep.mw_margin == 0 and rep.error_estimate == 0


def test_trivial_representation():
    p = surface.presentation(2, 0)
    rho = inv.Representation(p, "sp", tuple(np.eye(4) for _ in range(4)))
    rep = inv.toledo(rho)
    assert rep.value == 0
    assert rep.mw_margin == 2 * 2


def test_bounded_hyperbolizations():
    for g, b in [(1, 1), (0, 3)]:
        rep = inv.toledo(c.fuchsian_bounded(g, b))
        assert rep.method == "bounded"
        assert abs(rep.value - 1) <= rep.error_estimate


def test_orientation_reversal_negates(fuchsian):
    assert inv.toledo(c.orientation_reverse(fuchsian)).value == -2
    H = c.fuchsian_bounded(1, 1)
    assert inv.toledo(c.orientation_reverse(H)).value == pytest.approx(-1, abs=2e-3)


@pytest.mark.parametrize("k", range(4))
def test_lift_independence_closed(fuchsian, k):
    shifts = [0] * 4
    shifts[k] = 3
    assert inv.toledo(fuchsian, shifts=shifts).value == 2


@pytest.mark.parametrize("k", range(3))
def test_lift_independence_bounded(k):
    H = c.fuchsian_bounded(0, 3)
    shifts = [0] * 3
    shifts[k] = -2
    assert inv.toledo(H, shifts=shifts).value == inv.toledo(H).value


def test_relator_not_central():
    p = surface.presentation(2, 0)
    rho = inv.Representation(p, "sp", tuple(sp.random_hamiltonian_exp(1, s, 1.0) for s in range(4)))
    with pytest.raises(RelatorNotCentral):
        inv.toledo(rho)
    with pytest.raises(RelatorViolation):
        inv.check_representation(rho)


def test_dimension_checks(fuchsian):
    with pytest.raises(DimensionMismatch):
        inv.Representation(fuchsian.presentation, "psl2", fuchsian.images[:3])
    with pytest.raises(DimensionMismatch):
        inv.Representation(fuchsian.presentation, "psl2", tuple(np.eye(4) for _ in range(4)))


def test_rationality_check():
    assert inv.rationality_check(2, 1, -2) == 0
    assert inv.rationality_check(0.3, 1, -1) == pytest.approx(0.3)
    assert inv.rationality_check(4.0, 1, -2) == 0


def test_wm_self(fuchsian):
    rep = inv.wm_defect(fuchsian, fuchsian, seed=0, count=16)
    assert rep.lam == 1 and rep.defect == pytest.approx(0, abs=1e-12)
    assert rep.verdict == "WeaklyMaximal"
    assert all(r["error_estimate"] <= rep.tolerance / 4 for r in rep.rows)


def test_wm_polydisk(fuchsian):
    rep = inv.wm_defect(c.polydisk([fuchsian, fuchsian]), fuchsian, seed=1, count=16)
    assert rep.lam == 2 and rep.verdict == "WeaklyMaximal"


def test_folded_factor_is_not_wm(fuchsian, folded):
    rep = inv.wm_defect(folded, fuchsian, seed=0, count=16)
    assert rep.lam == 0 and rep.verdict == "NotWeaklyMaximal"


def test_bad_hyperbolization(fuchsian, folded):
    with pytest.raises(BadHyperbolization):
        inv.wm_defect(fuchsian, folded, count=4)
    with pytest.raises(BadHyperbolization):
        inv.wm_defect(c.fuchsian_bounded(1, 1), fuchsian, count=4)


def test_qcausal_self_and_vacuous(fuchsian):
    rep = inv.q_causal_check(fuchsian, fuchsian, 0, seed=0, count=16)
    assert not rep.refutations
    huge = inv.q_causal_check(fuchsian, fuchsian, 1000, seed=0, count=8)
    assert huge.eligible == 0 and not huge.refutations


def test_path_scan_constant_family(fuchsian):
    rows = inv.wm_path_scan(lambda t: fuchsian, [0.0, 0.5], fuchsian, count=8)
    assert [r["t"] for r in rows] == [0.0, 0.5]
    assert all(r["defect"] < 1e-12 and r["T"] == 2 for r in rows)


def test_milnor_wood_random_free_group():
    p = surface.presentation(1, 1)
    for seed in range(10):
        imgs = [sp.random_hamiltonian_exp(2, 10 * seed + i, 1.5) for i in range(2)]
        R = imgs[0] @ imgs[1] @ np.linalg.inv(imgs[0]) @ np.linalg.inv(imgs[1])
        rho = inv.Representation(p, "sp", (imgs[0], imgs[1], np.linalg.inv(R)))
        rep = inv.toledo(rho)
        assert rep.mw_margin >= -rep.error_estimate
