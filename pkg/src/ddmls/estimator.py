"""Scikit-learn estimator facade over the moving least-squares solver."""

from __future__ import annotations

from sklearn.base import BaseEstimator, RegressorMixin
from sklearn.utils.validation import check_array, check_is_fitted, check_X_y

from .errors import DdmlsError, UnsupportedDimension
from .geometry import NodeSet, build_spatial_index
from .kernels import KernelKind, WeightConfig, default_shape_eps, default_truncation
from .mls import EXCEPTION_OF_STATUS, MlsConfig, default_cell_size, evaluate_field
from .polybasis import BasisSpec
from .smoothness import DdWeightParams, compute_indicators, default_delta


class MovingLeastSquares(RegressorMixin, BaseEstimator):
    """Local weighted polynomial regression over scattered 1-D or 2-D data.

    Every prediction solves an independent weighted least-squares fit of a
    polynomial centered at the query point, weighting nearby nodes through a
    radial kernel. In data-dependent mode the weights are additionally
    divided by a power of per-node smoothness indicators, which suppresses
    nodes close to jump discontinuities and with them the Gibbs oscillations
    and most of the smearing that plain fits produce there.

    Parameters
    ----------
    degree : int, default=2
        Total degree of the local polynomial.

    kernel : str, default="W2"
        Radial kernel acronym: G, IMQ, M0, M2, M4, W0, W2 or W4
        (case-insensitive).

    mode : {"linear", "dd"}, default="linear"
        "linear" uses the radial weights as-is; "dd" divides them by
        (eps_reg + indicator)^exponent.

    shape_eps : float, default=None
        Kernel shape parameter; distances are scaled by it before kernel
        evaluation. None uses 0.5 * floor(sqrt(N)/2) from the fitted node
        count.

    truncation : float, default=None
        Threshold below which globally supported kernel values count as zero.
        None uses 1e-10 for G/IMQ/M0/M2/M4 and 0 for the Wendland kernels.

    delta : float, default=None
        Radius of the indicator neighborhoods (mode="dd" only). None uses
        sqrt(2) / floor(sqrt(N)/2).

    exponent : float, default=4.0
        Power applied to the regularized indicator in the weight divisor.

    eps_reg : float, default=1e-6
        Regularization added to the indicator before exponentiation.

    rank_tol : float, default=1e-12
        Relative pivot threshold for declaring a local system rank-deficient.

    domain : pair of array-likes, default=None
        (lower, upper) corners of the domain box. None uses the bounding box
        of the training points.

    Attributes
    ----------
    nodes_ : NodeSet
        Fitted nodes and values.
    config_ : MlsConfig
        Resolved per-query solver configuration.
    field_ : SmoothnessField or None
        Indicators computed at fit time (mode="dd" only).
    """

    def __init__(
        self,
        degree=2,
        kernel="W2",
        mode="linear",
        shape_eps=None,
        truncation=None,
        delta=None,
        exponent=4.0,
        eps_reg=1e-6,
        rank_tol=1e-12,
        domain=None,
    ):
        self.degree = degree
        self.kernel = kernel
        self.mode = mode
        self.shape_eps = shape_eps
        self.truncation = truncation
        self.delta = delta
        self.exponent = exponent
        self.eps_reg = eps_reg
        self.rank_tol = rank_tol
        self.domain = domain

    def fit(self, X, y):
        """Store the nodes, build the spatial index and, in data-dependent
        mode, the smoothness indicators.

        Parameters
        ----------
        X : array-like of shape (n_samples, n_features)
            Node coordinates, n_features in {1, 2}.
        y : array-like of shape (n_samples,)
            Data values at the nodes.

        Returns
        -------
        self : object
        """
        X, y = check_X_y(X, y, y_numeric=True)
        if X.shape[1] not in (1, 2):
            raise UnsupportedDimension(f"only 1-D and 2-D nodes are supported, got {X.shape[1]}-D")
        self.n_features_in_ = X.shape[1]

        kind = KernelKind.parse(self.kernel)
        n = X.shape[0]
        eps = self.shape_eps if self.shape_eps is not None else default_shape_eps(n)
        trunc = self.truncation if self.truncation is not None else default_truncation(kind)
        weights = WeightConfig(kind, eps, trunc)
        basis = BasisSpec(X.shape[1], self.degree)
        dd_params = DdWeightParams(self.eps_reg, self.exponent) if self.mode == "dd" else None
        self.config_ = MlsConfig(basis, weights, self.mode, dd_params, self.rank_tol)

        self.nodes_ = NodeSet(X, y, self.domain)
        self.index_ = build_spatial_index(self.nodes_, default_cell_size(self.nodes_, self.config_))
        if self.mode == "dd":
            delta = self.delta if self.delta is not None else default_delta(n)
            self.field_ = compute_indicators(self.nodes_, delta)
        else:
            self.field_ = None
        return self

    def evaluate(self, X):
        """Predict with per-query failure isolation.

        Returns
        -------
        values : ndarray of shape (n_queries,)
            Approximant values, NaN where the local solve failed.
        statuses : list of (str or None)
            None on success, otherwise a failure tag.
        """
        check_is_fitted(self, "nodes_")
        X = check_array(X)
        if X.shape[1] != self.n_features_in_:
            raise ValueError(f"X has {X.shape[1]} features, expected {self.n_features_in_}")
        return evaluate_field(self.nodes_, self.config_, self.field_, X, self.index_)

    def predict(self, X):
        """Approximant values at the query points; raises on any failed solve."""
        values, statuses = self.evaluate(X)
        for i, status in enumerate(statuses):
            if status is not None:
                exc = EXCEPTION_OF_STATUS.get(status, DdmlsError)
                raise exc(f"query {i}: {status}")
        return values
