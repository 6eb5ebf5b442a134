import math

import pytest

from copsym import measures as ms
from copsym import verify as vf
from copsym.copulas import make_mtheta, make_pi, mixture


def test_pool_is_seeded():
    a = [c.label for c in vf.random_pool(20, 4)]
    b = [c.label for c in vf.random_pool(20, 4)]
    assert a == b
    assert a != [c.label for c in vf.random_pool(20, 5)]


def test_pool_covers_families():
    labels = " ".join(c.label for c in vf.random_pool(50, 0))
    for name in ("MTheta", "Clayton", "Pi", "Transpose", "Mixture"):
        assert name in labels
    assert " M," in labels or " M)" in labels
    assert " W," in labels or " W)" in labels


def test_run_validation():
    with pytest.raises(ValueError, match="unknown check"):
        vf.run("7")
    with pytest.raises(ValueError, match="trials"):
        vf.random_pool(0, 0)


def test_symmetric_with_beta():
    for b0 in vf.BETA0_GRID + (-0.9,):
        c = vf.symmetric_with_beta(b0)
        assert ms.blomqvist_beta(c).value == pytest.approx(b0, abs=1e-15)
        assert c.is_symmetric


def test_report_bookkeeping():
    r = vf.VerifyReport("x")
    r.at_most("a", "q", -0.5, 1.0)
    r.at_least("b", "q", 0.2, 0.3)
    assert not r.passed
    assert [c.subject for c in r.failures()] == ["b"]
    assert r.min_margin == pytest.approx(-0.1)
    assert vf.VerifyReport("empty").min_margin == math.inf


def test_lower_bound_slack_can_be_small_with_visible_asymmetry():
    """sigma - 6 mu_1 > 0.01 does not follow from mu_1 > 0.01: diluting M_0.21
    with independence keeps the ratio of slack to mu_1 near 0.29."""
    cfg = vf.VERIFY_CFG
    c = mixture(0.3, make_mtheta(0.21), make_pi())
    mu1 = ms.mu(c, 1, cfg, closed_forms=False).raw
    slack = ms.schweizer_wolff_sigma(c, cfg, closed_forms=False).value - 6 * mu1
    assert mu1 > 0.01
    assert 0.0 < slack < 0.01
