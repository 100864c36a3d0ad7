import math

import numpy as np
import pytest

import powermix as pm


U = pm.Distribution.uniform(0, 1)


def test_parse_and_print_round_trip():
    text = "tsp(n=2, x1=uniform(0,1), x2=uniform(0,1))"
    spec = pm.parse(text)
    assert isinstance(spec, pm.MixtureSpec)
    assert repr(spec) == text
    assert pm.parse(repr(spec)) == spec
    assert pm.parse("beta(0.5,0.5)") == pm.Distribution.beta(0.5, 0.5)
    with pytest.raises(SyntaxError, match="position 6"):
        pm.parse("tsp(n=)")


def test_distribution_vectorized():
    b = pm.Distribution.beta(2, 3)
    x = np.linspace(0.1, 0.9, 5)
    assert np.allclose(b.pdf(x), 12 * x * (1 - x) ** 2)
    assert b.cdf(0.0) == 0.0
    assert b.quantile(b.cdf(0.3)) == pytest.approx(0.3, abs=1e-12)


def test_sampling_is_deterministic():
    spec = pm.MixtureSpec.tsp(2, pm.Distribution.point_mass(0), pm.Distribution.point_mass(1))
    a = spec.sample(1_000_000, seed=1)
    b = spec.sample(1_000_000, seed=1)
    assert np.array_equal(a, b)
    assert abs(a.mean() - 2 / 3) < 1e-3
    assert not np.array_equal(a[:100], spec.sample(100, seed=2))


def test_closed_density():
    assert pm.tsp_pdf_uniform(1, 0.5) == pytest.approx(2 * math.log(2), rel=1e-14)
    assert pm.tsp_pdf_uniform_betaweight(2, 2, 0.5) == pytest.approx(1.5, rel=1e-12)
    spec = pm.MixtureSpec.tsp(2, U, U)
    for z in (0.1, 0.5, 0.8):
        assert spec.pdf(z) == pytest.approx(float(pm.tsp_pdf_uniform(2, z)), abs=1e-10)


def test_moments():
    spec = pm.MixtureSpec.tsp(2, U, U)
    c = pm.moments(spec, 2, "c")
    assert c[0]["value"] == pytest.approx(5 / 9, rel=1e-14)
    assert c[0]["method"] == "thm411c"
    a = pm.moments(spec, 4, "a")
    for r in a:
        assert r["value"] == pytest.approx(pm.uniform_moment_formula(2, r["k"]), rel=1e-12)
    nrm = pm.Distribution.normal(0, 1)
    b = pm.moments(pm.MixtureSpec.tsp(2, nrm, nrm), 2, "b")
    assert b[1]["value"] == pytest.approx(2 / 3, rel=1e-12)
    mc = pm.moments(spec, 1, "mc", n=200_000, seed=3)
    assert abs(mc[0]["value"] - 5 / 9) < 4 * mc[0]["std_error"]
    cauchy = pm.Distribution.cauchy(0, 1)
    with pytest.raises(pm.NoFiniteMomentError):
        pm.moments(pm.MixtureSpec.tsp(1, cauchy, cauchy), 2, "a")


def test_stieltjes_identities():
    assert pm.partial_fraction_residual(0, 1, 2, 3) < 1e-12
    c = pm.Distribution.cauchy(0, 1)
    spec = pm.MixtureSpec.directed(1, c, c)
    assert abs(pm.directed_transform_residual(spec, 1 + 2j, c)) < 1e-12
    with pytest.raises(pm.DivergenceError):
        pm.double_stieltjes(U, U, 2.0)
    with pytest.raises(pm.DomainError):
        pm.iid_square_residual(U, 0.5)
    z = 2.0
    assert pm.ordered_pair_transform(U, U, z) == pytest.approx(0.3181471805599453094, rel=1e-10)
    # arcsin transform 1/sqrt(z^2 - 1)
    arc = pm.Distribution.arcsin(-1, 1)
    assert arc.stieltjes(2.0) == pytest.approx(1 / math.sqrt(3), rel=1e-13)


def test_specfun():
    from scipy import special

    for x, a, b in [(0.3, 2.0, 3.0), (0.9, 0.5, 0.5), (0.01, 10.0, 1.5)]:
        assert pm.specfun.incomplete_beta(x, a, b) == pytest.approx(special.betainc(a, b, x), rel=1e-12)
    for n in (1, 2, 3, 5):
        for z in (0.1, 0.5, 0.9):
            assert pm.specfun.hyp2f1_1_n(n, z) == pytest.approx(special.hyp2f1(1, n, n + 1, z), rel=1e-12)


def test_verify_catalog_entry():
    assert len(pm.scenario_ids()) == 10
    r = pm.verify("thm412a", n=20_000)
    assert r["pass"] and r["statistic"] <= 4
    with pytest.raises(KeyError):
        pm.verify("nope")
