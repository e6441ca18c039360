from fractions import Fraction

import numpy as np
import pytest
from sklearn.base import clone
from sklearn.exceptions import NotFittedError

from setid.estimators import BinaryRegionEstimator, ParametricIntervalModel, SharpRegionEstimator
from setid.exceptions import CoherenceError, InvalidInputError

Y = np.array([0] * 3 + [1] * 5 + [2] * 2)


def test_params_round_trip():
    est = BinaryRegionEstimator(unobserved_mode="agnostic", nu="0.1")
    assert est.get_params() == {"unobserved_mode": "agnostic", "nu": "0.1", "pi": None}
    est.set_params(nu=None)
    assert clone(est).get_params()["nu"] is None
    assert ParametricIntervalModel().get_params() == {"cdf": "probit"}


@pytest.mark.parametrize("est, X", [
    (SharpRegionEstimator(), [[0.3, 0.5, 0.2, 0, 0, 0, 0]]),
    (BinaryRegionEstimator(), [[0.1, 0.1]]),
    (ParametricIntervalModel(), [[0.0, 1.0]]),
])
def test_not_fitted(est, X):
    with pytest.raises(NotFittedError):
        est.predict(X)


def test_sharp_region():
    est = SharpRegionEstimator(n_alternatives=3).fit(Y)
    assert est.p_ == (Fraction(3, 10), Fraction(1, 2), Fraction(1, 5))
    X = [[0.3, 0.5, 0.2, 0, 0, 0, 0], [0, 0, 0, 0, 0, 0, 1], [0.5, 0.5, 0, 0, 0, 0, 0]]
    assert est.predict(X).tolist() == [True, True, False]
    score = est.decision_function(X)
    assert score[0] >= 0 and score[1] >= 0 and score[2] < 0
    with pytest.raises(InvalidInputError):
        est.decision_function([[0.1, 0.2]])
    with pytest.raises(InvalidInputError):
        SharpRegionEstimator(n_alternatives=2).fit(Y)
    with pytest.raises(InvalidInputError):
        SharpRegionEstimator().fit([0, -1, 1])


def test_binary_region():
    y = np.array([0] * 6 + [1] * 4)
    est = BinaryRegionEstimator().fit(y)
    assert est.predict([[0.4, 0.6], [0.5, 0.5], [0.4, 0.0]]).tolist() == [True, False, True]
    z = np.array([0, 0, 0, 1, 1, 1, 0, 1, 0, 1])
    iv = BinaryRegionEstimator().fit(y, z)
    assert iv.region_.issubset(est.region_)
    with pytest.raises(InvalidInputError):
        BinaryRegionEstimator().fit(y, z[:3])


def test_binary_region_with_abstention():
    y = np.array([0] * 4 + [1] * 3 + [-1] * 3)
    with pytest.raises(InvalidInputError):
        BinaryRegionEstimator().fit(y)
    est = BinaryRegionEstimator(unobserved_mode="all-incomparable").fit(y)
    assert est.gamma_ == Fraction(3, 10)
    assert est.region_.bounds() == (0, Fraction(3, 10), 0, Fraction(4, 10))
    with pytest.raises(CoherenceError):
        BinaryRegionEstimator(unobserved_mode="agnostic", pi=(0.9, 0.9)).fit(y)


def test_parametric_model():
    y = np.array([0] * 4 + [1] * 6)
    est = ParametricIntervalModel().fit(y)
    assert est.sigma_lower_ == 0
    assert est.predict([list(est.region_.apex), [5.0, 0.1], [0.25, 1.0]]).tolist() == [True, False, True]
    iv = ParametricIntervalModel(cdf="logit").fit(y, np.array([0, 1, 1, 1, 0, 0, 1, 1, 1, 0]))
    assert iv.sigma_lower_ > 0
