import math
from fractions import Fraction

import numpy as np
import pytest

from kahlerpinch.geometry import MetricJet, metric_eigenvalues
from kahlerpinch.models import (
    FubiniStudy,
    Hitchin,
    Product,
    fd_metric_jet,
    kahler_residual,
    model_from_json,
    model_to_json,
)

from conftest import builtin_models, random_point


def test_potential_values():
    assert Hitchin.make(1, "1/3").potential([0.0, 0.0]) == 0.0
    got = Hitchin.make(2, "1/10").potential([0.0, 1.0])
    assert abs(got - 0.1 * math.log(2.0)) < 1e-15
    assert abs(FubiniStudy(1).potential([1.0]) - math.log(2.0)) < 1e-15


@pytest.mark.parametrize("n,s", [(1, Fraction(1, 3)), (2, Fraction(1, 10)), (4, Fraction(1, 36))])
def test_hitchin_fiber_metric_closed_form(n, s, rng):
    model = Hitchin.make(n, s)
    for r in (0.0, 0.5, 2.0, 9.0):
        g = model.metric_jet(model.fiber_point(r)).g
        s_f = float(s)
        assert abs(g[0, 0] - (1 + r + n * s_f) / (1 + r)) < 1e-12
        assert abs(g[1, 1] - s_f / (1 + r) ** 2) < 1e-12
        assert abs(g[0, 1]) < 1e-14 and abs(g[1, 0]) < 1e-14


def test_hitchin_origin_metric_values():
    g = Hitchin.make(1, "1/3").metric_jet([0.0, 0.0]).g
    assert np.allclose(g, np.diag([4.0 / 3.0, 1.0 / 3.0]), atol=1e-14)


def test_product_block_structure():
    model = Product(FubiniStudy(1), FubiniStudy(1))
    jet = model.metric_jet([0.0, 0.0])
    assert np.allclose(jet.g, np.eye(2), atol=1e-14)
    # no derivative couples the two factors
    assert np.max(np.abs(jet.dg[0, 1])) == 0.0
    assert np.max(np.abs(jet.dg[1, 0])) == 0.0
    assert np.max(np.abs(jet.ddg[0, 1])) == 0.0
    assert np.max(np.abs(jet.ddg[0, 0, :, 1])) == 0.0


def _rel_err(a, b):
    scale = max(np.max(np.abs(a)), 1e-12)
    return np.max(np.abs(a - b)) / scale


def test_fd_oracle_matches_analytic_jets(rng):
    for model in builtin_models():
        for _ in range(6):
            z = random_point(model, rng)
            ja = model.metric_jet(z)
            jf = fd_metric_jet(model, z)
            assert _rel_err(ja.g, jf.g) < 1e-5
            assert _rel_err(ja.dg, jf.dg) < 1e-5
            assert _rel_err(ja.ddg, jf.ddg) < 1e-5


def test_fd_flat_potential():
    class Flat:
        dimension = 1

        def potential(self, z):
            z = np.asarray(z, dtype=complex)
            return float((z[0] * z[0].conjugate()).real)

        def metric_jet(self, z):
            return MetricJet(
                np.eye(1, dtype=complex),
                np.zeros((1, 1, 1), dtype=complex),
                np.zeros((1, 1, 1, 1), dtype=complex),
            )

    jet = fd_metric_jet(Flat(), [0.3 + 0.2j])
    assert abs(jet.g[0, 0] - 1.0) < 1e-7
    assert np.max(np.abs(jet.dg)) < 1e-7
    assert np.max(np.abs(jet.ddg)) < 1e-7


def test_fd_step_underflow_rejected():
    with pytest.raises(ValueError):
        fd_metric_jet(FubiniStudy(1), [0.1], h=1e-13)


def test_kahler_residual_analytic_and_corrupted(rng):
    for model in builtin_models():
        jet = model.metric_jet(random_point(model, rng))
        assert kahler_residual(jet) < 1e-10
    jet = Hitchin.make(2, "1/10").metric_jet([0.2, 0.4])
    dg = jet.dg.copy()
    dg[0, 1, 1] += 1e-3
    assert abs(kahler_residual(MetricJet(jet.g, dg, jet.ddg)) - 1e-3) < 1e-12


def test_positive_definite_on_samples(rng):
    for model in builtin_models():
        for _ in range(8):
            g = model.metric_jet(random_point(model, rng, radius=1.8)).g
            assert metric_eigenvalues(g)[0] > 0.0


def test_json_round_trip():
    for model in builtin_models():
        assert model_from_json(model_to_json(model)) == model
    hodge = Hitchin.make(2, Fraction(1, 10))
    obj = model_to_json(hodge)
    assert obj == {"kind": "hitchin", "n": 2, "s": "1/10"}
    back = model_from_json(obj)
    assert back == hodge and back.is_hodge
    plain = model_from_json({"kind": "hitchin", "n": 2, "s": 0.1})
    assert plain.s == 0.1 and not plain.is_hodge


def test_model_validation():
    with pytest.raises(ValueError):
        Hitchin(0, 0.1)
    with pytest.raises(ValueError):
        Hitchin(1, -0.5)
    with pytest.raises(ValueError):
        FubiniStudy(0)
    with pytest.raises(ValueError):
        model_from_json({"kind": "nope"})


def test_chart_point_validation():
    model = FubiniStudy(2)
    with pytest.raises(ValueError):
        model.metric_jet([0.1])
    with pytest.raises(ValueError):
        model.metric_jet([np.inf, 0.0])
    with pytest.raises(ValueError):
        Hitchin.make(1, "1/3").fiber_point(-1.0)
