"""nu one-class SVM with a two-variable working-set dual solver."""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field

import numpy as np

from ..data import require_positive_view
from .base import OCSVM, TrainedClassifier

LINEAR = "linear"
POLYNOMIAL = "polynomial"


class ConvergenceWarning(UserWarning):
    pass


def kernel_matrix(A, B, kernel=LINEAR, degree=2, coef0=1.0):
    G = A @ B.T
    if kernel == LINEAR:
        return G
    if kernel == POLYNOMIAL:
        return (G + coef0) ** degree
    raise ValueError(f"unknown kernel {kernel!r}")


def dual_objective(K, alpha):
    return 0.5 * float(alpha @ K @ alpha)


@dataclass
class DualSolution:
    alpha: np.ndarray
    rho: float
    gradient: np.ndarray
    n_iter: int
    converged: bool
    objective: float
    history: list = field(default_factory=list)


def initial_alpha(n, upper):
    """Feasible start: fill entries with the box bound until the mass is 1."""
    alpha = np.zeros(n)
    full = min(n, int(np.floor(1.0 / upper + 1e-9)))
    alpha[:full] = upper
    if full < n:
        alpha[full] = max(0.0, 1.0 - full * upper)
    return alpha


def solve_oc_dual(K, nu, tol=1e-3, max_iter=10_000, callback=None):
    """Minimise ``0.5 a'Ka`` subject to ``0 <= a_i <= 1/(nu n)``, ``sum(a) = 1``.

    Each iteration moves mass between the maximal violating pair, so every
    iterate stays feasible and the objective never increases. Stops once
    the KKT gap drops below ``tol`` or after ``max_iter`` pair updates.
    ``callback(it, alpha)`` is called on the start point and every iterate.
    """
    K = np.asarray(K, dtype=np.float64)
    n = K.shape[0]
    if not 0.0 < nu <= 1.0:
        raise ValueError(f"nu must lie in (0, 1], got {nu}")
    upper = 1.0 / (nu * n)
    alpha = initial_alpha(n, upper)
    grad = K @ alpha
    diag = np.diag(K)
    if callback is not None:
        callback(0, alpha)

    converged = False
    it = 0
    while it < max_iter:
        up = alpha < upper
        low = alpha > 0.0
        if not up.any() or not low.any():
            converged = True
            break
        i = np.flatnonzero(up)[np.argmin(grad[up])]
        j = np.flatnonzero(low)[np.argmax(grad[low])]
        gap = grad[j] - grad[i]
        if gap < tol:
            converged = True
            break
        eta = max(diag[i] + diag[j] - 2.0 * K[i, j], 1e-12)
        room_i, room_j = upper - alpha[i], alpha[j]
        delta = min(gap / eta, room_i, room_j)
        alpha[i] += delta
        alpha[j] -= delta
        if delta == room_i:
            alpha[i] = upper
        if delta == room_j:
            alpha[j] = 0.0
        grad += delta * (K[:, i] - K[:, j])
        it += 1
        if callback is not None:
            callback(it, alpha)

    return DualSolution(alpha, recover_rho(alpha, grad, upper), grad, it, converged,
                        dual_objective(K, alpha))


def recover_rho(alpha, grad, upper, eps=1e-12):
    free = (alpha > eps) & (alpha < upper - eps)
    if free.any():
        return float(np.mean(grad[free]))
    at_upper = grad[alpha >= upper - eps]
    at_zero = grad[alpha <= eps]
    if at_upper.size and at_zero.size:
        return float(0.5 * (at_upper.max() + at_zero.min()))
    return float(at_upper.max() if at_upper.size else at_zero.min())


class OCSVMModel(TrainedClassifier):
    """Decision value ``g(x) = sum a_i K(x_i, x) - rho``, squashed by a
    logistic over ``g / sd(g_train)`` so that ``g = 0`` maps to 0.5."""

    algorithm = OCSVM

    def __init__(self, support, coef, rho, scale, params, converged=True, n_iter=0, name=""):
        super().__init__(0.5, params, support.shape[1], name)
        self.support = support
        self.coef = coef
        self.rho = float(rho)
        self.scale = float(scale)
        self.converged = bool(converged)
        self.n_iter = int(n_iter)

    def decision_function(self, X):
        K = kernel_matrix(X, self.support, self.params["kernel"], self.params["degree"],
                          self.params["coef0"])
        return K @ self.coef - self.rho

    def _score(self, X):
        t = self.decision_function(X) / self.scale
        return 0.5 * (1.0 + np.tanh(0.5 * t))

    def state(self):
        return {
            "support": self.support,
            "coef": self.coef,
            "rho": self.rho,
            "scale": self.scale,
            "converged": int(self.converged),
            "n_iter": self.n_iter,
        }

    @classmethod
    def from_state(cls, theta, params, dim, name, state):
        return cls(state["support"], state["coef"], state["rho"], state["scale"], params,
                   bool(state["converged"]), int(state["n_iter"]), name)


def train_ocsvm(positives, kernel=LINEAR, nu=0.05, degree=2, coef0=1.0, tol=1e-3,
                max_iter=10_000, name="OCSVM"):
    X = require_positive_view(positives)
    n = X.shape[0]
    if n < 2:
        raise ValueError("OC-SVM needs at least 2 positives")
    if kernel == POLYNOMIAL and degree < 2:
        raise ValueError(f"polynomial degree must be >= 2, got {degree}")
    params = {"kernel": kernel, "nu": float(nu), "degree": int(degree), "coef0": float(coef0)}
    K = kernel_matrix(X, X, kernel, degree, coef0)
    sol = solve_oc_dual(K, nu, tol, max_iter)
    if not sol.converged:
        warnings.warn(
            f"OC-SVM solver stopped after {sol.n_iter} updates without reaching tol={tol}",
            ConvergenceWarning,
            stacklevel=2,
        )
    sv = sol.alpha > 0
    g_train = sol.gradient - sol.rho
    scale = float(np.std(g_train, ddof=1))
    if not np.isfinite(scale) or scale <= 0:
        scale = 1.0
    return OCSVMModel(X[sv].copy(), sol.alpha[sv].copy(), sol.rho, scale, params,
                      sol.converged, sol.n_iter, name)
