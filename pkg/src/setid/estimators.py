"""scikit-learn style wrappers: fit on raw choices, predict region membership."""

from __future__ import annotations

from collections import Counter
from fractions import Fraction

import numpy as np
from sklearn.base import BaseEstimator
from sklearn.utils.validation import check_array, check_is_fitted, column_or_1d

from . import binary, parametric
from ._validation import check_probability
from .artstein import build_sharp_region
from .exceptions import InvalidInputError
from .polytope import contains, intersect_halfplane


def _choices(y, n=None):
    y = column_or_1d(np.asarray(y), warn=True)
    if not np.issubdtype(y.dtype, np.integer):
        if not np.all(np.equal(np.mod(y, 1), 0)):
            raise InvalidInputError("choices must be integer alternative indices")
        y = y.astype(np.int64)
    if len(y) == 0:
        raise InvalidInputError("no choices to fit")
    if y.min() < -1 or (n is not None and y.max() >= n):
        raise InvalidInputError("choices must be alternative indices (or -1 for no choice)")
    return y


def _shares(y, n):
    counts = Counter(int(v) for v in y if v >= 0)
    total = sum(counts.values())
    if total == 0:
        raise InvalidInputError("every observation is a non-choice")
    return tuple(Fraction(counts.get(i, 0), total) for i in range(n))


class SharpRegionEstimator(BaseEstimator):
    """Sharp region for subset masses from observed choices among ``n_alternatives``.

    ``predict`` takes rows of masses (subsets ordered by size, then members)
    and returns membership.
    """

    def __init__(self, n_alternatives=None):
        self.n_alternatives = n_alternatives

    def fit(self, y, X=None):
        y = _choices(y, self.n_alternatives)
        if (y < 0).any():
            raise InvalidInputError("the sharp region needs every choice observed")
        n = self.n_alternatives or int(y.max()) + 1
        self.p_ = _shares(y, n)
        self.system_ = build_sharp_region(self.p_)
        self.n_features_in_ = self.system_.dimension
        return self

    def decision_function(self, X):
        """Smallest slack over inequality rows and the sum-to-one row; non-negative iff inside."""
        check_is_fitted(self, "system_")
        X = check_array(X, dtype=np.float64)
        if X.shape[1] != self.n_features_in_:
            raise InvalidInputError(f"expected {self.n_features_in_} columns, got {X.shape[1]}")
        A = np.array([[float(v) for v in a] for a, _ in self.system_.inequalities])
        b = np.array([float(v) for _, v in self.system_.inequalities])
        slack = (b[None, :] - X @ A.T).min(axis=1)
        return np.minimum(slack, -np.abs(X.sum(axis=1) - 1.0))

    def predict(self, X):
        check_is_fitted(self, "system_")
        X = check_array(X, dtype=object, ensure_all_finite=False)
        return np.array([contains(self.system_, row) for row in X])


class BinaryRegionEstimator(BaseEstimator):
    """Binary-choice region from choices ``y`` in ``{0, 1}`` (``-1`` = no choice).

    With an instrument ``z`` the rectangle tightens to the smallest
    conditional shares. ``unobserved_mode`` sets how non-choosers enter; it
    is required when ``y`` contains ``-1``. ``nu`` and ``pi`` apply the
    minimal-vagueness and consideration restrictions.
    """

    def __init__(self, unobserved_mode=None, nu=None, pi=None):
        self.unobserved_mode = unobserved_mode
        self.nu = nu
        self.pi = pi

    def fit(self, y, z=None):
        y = _choices(y, 2)
        chosen = y >= 0
        p0, p1 = _shares(y, 2)
        if z is None:
            region = binary.no_assumption_region(p0, p1)
            self.delta0_ = Fraction(0)
        else:
            z = column_or_1d(np.asarray(z))
            if len(z) != len(y):
                raise InvalidInputError("y and z have different lengths")
            table = {}
            for value in sorted(set(z[chosen].tolist())):
                table[value] = _shares(y[chosen & (z == value)], 2)
            res = binary.iv_region(table)
            region, self.delta0_ = res.region, res.delta0
        if self.nu is not None:
            region = intersect_halfplane(region, (1, 1), 1 - check_probability(self.nu, "nu"))
        gamma = Fraction(int((~chosen).sum()), len(y))
        if gamma:
            if self.unobserved_mode is None:
                raise InvalidInputError("y has non-choices; set unobserved_mode")
            region = binary.abstention_region(region, gamma, self.unobserved_mode)
        if self.pi is not None:
            region = binary.consideration_region(region, *self.pi)
        self.p_, self.gamma_, self.region_ = (p0, p1), gamma, region
        self.n_features_in_ = 2
        return self

    def predict(self, X):
        """Membership of rows ``(theta1, theta0)``."""
        check_is_fitted(self, "region_")
        X = check_array(X, dtype=object, ensure_all_finite=False)
        if X.shape[1] != 2:
            raise InvalidInputError("expected two columns (theta1, theta0)")
        return np.array([self.region_.contains(row) for row in X])


class ParametricIntervalModel(BaseEstimator):
    """Wedge of ``(beta, sigma)`` for the parametric interval model.

    ``fit(y, z)`` uses the share choosing alternative 1, conditional on
    each instrument value when ``z`` is given.
    """

    def __init__(self, cdf="probit"):
        self.cdf = cdf

    def fit(self, y, z=None):
        y = _choices(y, 2)
        if (y < 0).any():
            raise InvalidInputError("the parametric model needs every choice observed")
        if z is None:
            self.region_ = parametric.parametric_region(float(np.mean(y)), self.cdf)
        else:
            z = column_or_1d(np.asarray(z))
            if len(z) != len(y):
                raise InvalidInputError("y and z have different lengths")
            table = [float(np.mean(y[z == v])) for v in sorted(set(z.tolist()))]
            self.region_ = parametric.parametric_region_iv(table, self.cdf)
        self.sigma_lower_ = self.region_.sigma_lower
        self.n_features_in_ = 2
        return self

    def predict(self, X):
        """Membership of rows ``(beta, sigma)``."""
        check_is_fitted(self, "region_")
        X = check_array(X, dtype=np.float64)
        return np.array([self.region_.contains(b, s) for b, s in X])
