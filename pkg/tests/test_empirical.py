import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from copsym import empirical as em
from copsym.copulas import MThetaParams, check_axioms, make_m, make_mtheta
from copsym.quadrature import QuadratureConfig
from copsym.sampling import SampleSet, sample_m, sample_mtheta, sample_pi

CFG = QuadratureConfig(n=256, refine_levels=1)


def pseudo(raw):
    return em.pseudo_observations(SampleSet(np.asarray(raw, dtype=float)))


@pytest.fixture(scope="module")
def mtheta02():
    return em.pseudo_observations(sample_mtheta(MThetaParams(0.2), 5000, 1))


# --- pseudo-observations ---------------------------------------------------


def test_pseudo_observation_examples():
    np.testing.assert_allclose(pseudo([(10, 3), (20, 1), (30, 2)]).pairs, [(0.25, 0.75), (0.5, 0.25), (0.75, 0.5)])
    p = pseudo([(1, 5), (1, 6)])
    np.testing.assert_array_equal(p.u, [0.5, 0.5])
    assert p.kind == "pseudo"


@given(st.lists(st.tuples(st.floats(-1e3, 1e3), st.floats(-1e3, 1e3)), min_size=2, max_size=40, unique_by=lambda t: t[0]))
def test_rank_invariance(rows):
    raw = np.array(rows)
    moved = np.column_stack([np.arctan(raw[:, 0]) * 3 + 7, raw[:, 1]])
    if np.unique(moved[:, 0]).size < np.unique(raw[:, 0]).size:
        return  # the transform collapsed two floats; not strictly increasing in fp
    np.testing.assert_array_equal(pseudo(raw).pairs, pseudo(moved).pairs)


def test_pseudo_needs_two_rows():
    with pytest.raises(em.DataError, match="need at least 2 observations, got 1"):
        pseudo([(1.0, 2.0)])


# --- empirical copula ------------------------------------------------------


def test_diagonal_data_is_close_to_m():
    n = 300
    cop = em.empirical_copula(em.pseudo_observations(sample_m(n, 0)))
    t = np.linspace(0, 1, 101)
    U, V = np.meshgrid(t, t, indexing="ij")
    assert np.abs(cop(U, V) - make_m()(U, V)).max() <= 1.0 / n + 1e-12


def test_empirical_copula_close_to_truth(mtheta02):
    cop = em.empirical_copula(mtheta02)
    t = np.linspace(0, 1, 201)
    U, V = np.meshgrid(t, t, indexing="ij")
    assert np.abs(cop(U, V) - make_mtheta(0.2)(U, V)).max() <= 0.03


def test_empirical_copula_axioms(mtheta02):
    rep = check_axioms(em.empirical_copula(mtheta02), 128)
    assert rep.boundary_error <= 1.0 / len(mtheta02)
    assert rep.min_volume >= -1e-12


def test_empirical_copula_errors():
    with pytest.raises(em.DataError, match="pseudo_observations"):
        em.empirical_copula(SampleSet(np.array([[0.2, 0.3], [0.4, 0.5]])))
    constant = pseudo([(1.0, 1.0), (1.0, 2.0), (1.0, 3.0)])
    with pytest.raises(em.DataError, match="first column is constant"):
        em.empirical_copula(constant)


# --- estimates -------------------------------------------------------------


def test_report_on_independent_data():
    r = em.estimate_report(em.pseudo_observations(sample_pi(5000, 2)), cfg=CFG)
    for name in ("rho", "tau", "beta", "sigma", "lambda_lower", "lambda_upper"):
        assert abs(getattr(r, name).value) <= 0.05, name
    assert all(abs(m.raw) <= 0.05 for m in r.mu.values())
    assert r.rho.method == "monte_carlo" and r.sigma.method == "quadrature"


def test_report_on_mtheta(mtheta02):
    r = em.estimate_report(mtheta02, cfg=CFG)
    assert r.tau.value == pytest.approx(0.36, abs=0.03)
    assert any("biased low" in w for w in r.warnings)


def test_mu_inf_near_maximal():
    ps = em.pseudo_observations(sample_mtheta(MThetaParams(1 / 3), 5000, 3))
    r = em.estimate_report(ps, [math.inf], CFG)
    assert r.mu[math.inf].normalized >= 0.85


def test_report_rejects_raw_kind():
    with pytest.raises(em.DataError, match="pseudo"):
        em.estimate_report(SampleSet(np.array([[0.1, 0.2], [0.3, 0.4]])))


def test_unknown_functional():
    with pytest.raises(ValueError, match="unknown functional"):
        em.estimate_functional(pseudo([(1, 2), (2, 1), (3, 3)]), "gamma")


def test_monotone_invariance_bitwise():
    raw = sample_mtheta(MThetaParams(0.15), 2000, 4).pairs
    moved = np.column_stack([np.exp(3 * raw[:, 0]), raw[:, 1] ** 3 - 5])
    a = em.estimate_report(pseudo(raw), cfg=CFG).to_dict()
    b = em.estimate_report(pseudo(moved), cfg=CFG).to_dict()
    assert a == b


def test_swap_behaviour():
    ps = em.pseudo_observations(sample_mtheta(MThetaParams(0.25), 3000, 5))
    a = em.estimate_report(ps, cfg=CFG)
    b = em.estimate_report(ps.swapped(), cfg=CFG)
    for name in ("rho", "tau", "beta", "sigma"):
        assert getattr(a, name).value == pytest.approx(getattr(b, name).value, abs=1e-12), name
    for p in a.mu:
        assert a.mu[p].raw == pytest.approx(b.mu[p].raw, abs=1e-12)


@pytest.mark.parametrize("theta", [0.1, 0.2, 1 / 3])
@pytest.mark.parametrize("name", ["tau", "rho", "beta", "mu_inf"])
def test_consistency_drift(theta, name):
    c = make_mtheta(theta)
    target = theta if name == "mu_inf" else c.closed_forms[name]
    errs = []
    for k, n in enumerate((1000, 2000, 4000, 8000)):
        ps = em.pseudo_observations(sample_mtheta(MThetaParams(theta), n, 100 + k))
        errs.append(abs(em.estimate_functional(ps, name) - target))
    inversions = sum(b > a for a, b in zip(errs, errs[1:]))
    assert inversions <= 1, errs
    assert errs[-1] < errs[0]


def test_single_grid_matches_quadrature_engine(mtheta02):
    r = em.estimate_report(mtheta02, [1], QuadratureConfig(256, refine_levels=1))
    assert em.estimate_functional(mtheta02, "mu_1") == pytest.approx(r.mu[1.0].raw, abs=1e-15)
    assert em.estimate_functional(mtheta02, "sigma") == pytest.approx(r.sigma.value, abs=1e-12)


# --- bootstrap -------------------------------------------------------------


def test_bootstrap_independent_mu1():
    s = em.bootstrap(em.pseudo_observations(sample_pi(1000, 4)), "mu_1", B=500, seed=0)
    assert s.ci_low >= 0.0 and s.ci_high <= 0.02


def test_bootstrap_beta_comonotone():
    s = em.bootstrap(em.pseudo_observations(sample_m(500, 5)), "beta", B=200, seed=0)
    assert s.estimate == 1.0
    # resampled ties shift the rank grid by a few points only
    assert abs(s.ci_low - 1.0) <= 0.02 and abs(s.ci_high - 1.0) <= 0.02


def test_bootstrap_covers_tau():
    ps = em.pseudo_observations(sample_mtheta(MThetaParams(0.25), 2000, 6))
    s = em.bootstrap(ps, "tau", B=500, seed=0)
    assert s.ci_low <= 0.25 <= s.ci_high


def test_bootstrap_determinism(mtheta02):
    a = em.bootstrap(mtheta02, "mu_inf", B=100, seed=9)
    b = em.bootstrap(mtheta02, "mu_inf", B=100, seed=9)
    assert a == b
    assert a.to_dict()["resamples"] == 100


def test_bootstrap_preconditions(mtheta02):
    with pytest.raises(ValueError, match="100 resamples"):
        em.bootstrap(mtheta02, "tau", B=50)
    with pytest.raises(ValueError, match="level"):
        em.bootstrap(mtheta02, "tau", B=100, level=1.0)


def test_swap_null_separates_asymmetric_data():
    sym = em.pseudo_observations(sample_pi(2000, 1))
    asym = em.pseudo_observations(sample_mtheta(MThetaParams(0.3), 2000, 1))
    q_sym = em.swap_null_quantile(sym, R=100, seed=0)
    assert em.estimate_functional(sym, "mu_1") <= q_sym
    assert em.estimate_functional(asym, "mu_1") > em.swap_null_quantile(asym, R=100, seed=0)


# --- CSV -------------------------------------------------------------------


def test_read_csv_with_header_and_blanks(tmp_path):
    path = tmp_path / "data.csv"
    path.write_text("x,y\n1.5,2\n\n3,4e-1\n")
    s = em.read_csv(path)
    np.testing.assert_array_equal(s.pairs, [[1.5, 2.0], [3.0, 0.4]])


def test_read_csv_without_header(tmp_path):
    path = tmp_path / "data.csv"
    path.write_text("1,2\n3,4\n")
    assert len(em.read_csv(path)) == 2


@pytest.mark.parametrize(
    "text, line",
    [("u,v\n1,2\n3,abc\n", 3), ("1,2\nfoo,bar\n", 2), ("1,2\n3\n", 2), ("1,2\n3,nan\n", 2)],
)
def test_read_csv_errors_name_line(tmp_path, text, line):
    path = tmp_path / "bad.csv"
    path.write_text(text)
    with pytest.raises(em.DataError, match=f"line {line}"):
        em.read_csv(path)
