"""Single-hidden-layer network trained by direct least-squares solves.

The hidden layer is fixed at random; the output weights come from one linear
solve, routed through any of the six factorizations in ``linalg``. Routes that
square the system solve the m x m normal equations; the QR and SVD routes
factor the hidden-output matrix itself unless a ridge term forces them onto
the (augmented) normal matrix as well.
"""

from __future__ import annotations

import time
from dataclasses import dataclass
from enum import Enum

import numpy as np

from . import linalg
from .errors import DimensionMismatch, InvalidLabel, SingularMatrix, RankDeficient
from .linalg import SolverKind, as_matrix, as_vector


class ActivationKind(Enum):
    LOGISTIC_SIGMOID = "logistic-sigmoid"
    TANH = "hyperbolic-tangent"
    IDENTITY = "identity"


def apply_activation(kind: ActivationKind, z: np.ndarray) -> np.ndarray:
    if kind is ActivationKind.LOGISTIC_SIGMOID:
        # Clip to keep exp() finite on extrapolated inputs.
        return 1.0 / (1.0 + np.exp(-np.clip(z, -500.0, 500.0)))
    if kind is ActivationKind.TANH:
        return np.tanh(z)
    if kind is ActivationKind.IDENTITY:
        return z
    raise ValueError(f"unknown activation {kind!r}")


@dataclass(frozen=True)
class ElmConfig:
    """Training configuration: layer width, activation, solver route, seed, ridge."""

    hidden_neurons: int
    activation: ActivationKind = ActivationKind.LOGISTIC_SIGMOID
    solver: SolverKind = SolverKind.SVD
    rng_seed: int = 0
    ridge_lambda: float = 0.0

    def __post_init__(self) -> None:
        if self.hidden_neurons < 1:
            raise ValueError("hidden_neurons must be >= 1")
        if self.ridge_lambda < 0.0:
            raise ValueError("ridge_lambda must be >= 0")


@dataclass(frozen=True)
class Normalizer:
    """Per-feature min/max captured from training data."""

    min_vals: np.ndarray
    max_vals: np.ndarray


@dataclass(frozen=True)
class ElmModel:
    input_weights: np.ndarray  # (n_features, hidden)
    biases: np.ndarray         # (hidden,)
    output_weights: np.ndarray  # (hidden,)
    normalizer: Normalizer
    activation: ActivationKind


@dataclass(frozen=True)
class TrainResult:
    model: ElmModel
    train_s: float


def fit_normalizer(train_features) -> Normalizer:
    """Capture per-column min and max from training data only."""
    x = as_matrix(train_features, "train_features")
    return Normalizer(min_vals=x.min(axis=0), max_vals=x.max(axis=0))


def apply_normalizer(nrm: Normalizer, features) -> np.ndarray:
    """Map each entry to (x - min) / (max - min).

    Values outside the training range extrapolate past [0, 1]; constant
    training columns (max == min) map to 0.
    """
    x = as_matrix(features, "features")
    if x.shape[1] != nrm.min_vals.size:
        raise DimensionMismatch(
            f"features have {x.shape[1]} columns, normalizer expects {nrm.min_vals.size}")
    span = nrm.max_vals - nrm.min_vals
    out = np.zeros_like(x)
    live = span > 0.0
    out[:, live] = (x[:, live] - nrm.min_vals[live]) / span[live]
    return out


def init_random_layer(cfg: ElmConfig, n_features: int) -> tuple[np.ndarray, np.ndarray]:
    """Draw input weights and biases i.i.d. uniform on [-1, 1] from the seed."""
    if n_features < 1:
        raise ValueError("n_features must be >= 1")
    rng = np.random.default_rng(cfg.rng_seed)
    weights = rng.uniform(-1.0, 1.0, size=(n_features, cfg.hidden_neurons))
    biases = rng.uniform(-1.0, 1.0, size=cfg.hidden_neurons)
    return weights, biases


def hidden_output(features, input_weights, biases, activation: ActivationKind) -> np.ndarray:
    """Activated hidden responses: phi(features @ input_weights + biases)."""
    x = as_matrix(features, "features")
    w = as_matrix(input_weights, "input_weights")
    b = as_vector(biases, "biases")
    if x.shape[1] != w.shape[0]:
        raise DimensionMismatch(
            f"features have {x.shape[1]} columns, weights expect {w.shape[0]}")
    if b.size != w.shape[1]:
        raise DimensionMismatch(
            f"{b.size} biases for {w.shape[1]} hidden neurons")
    return apply_activation(activation, x @ w + b)


# ---------------------------------------------------------------------------
# Output-weight solves, one per factorization route
# ---------------------------------------------------------------------------

def solve_output_weights(h, targets, solver: SolverKind,
                         ridge_lambda: float = 0.0) -> np.ndarray:
    """Least-squares output weights for h @ w ~= targets via the chosen route.

    With ridge_lambda > 0 every route solves the augmented normal equations
    (h.T h + lambda I) w = h.T t through its own factorization; with
    ridge_lambda = 0 the QR and SVD routes factor h directly.
    """
    h = as_matrix(h, "h")
    t = as_vector(targets, "targets")
    if h.shape[0] != t.size:
        raise DimensionMismatch(
            f"h has {h.shape[0]} rows but targets has length {t.size}")
    if h.shape[0] < h.shape[1]:
        raise DimensionMismatch(
            f"need at least as many samples as hidden neurons, got {h.shape}")
    if ridge_lambda < 0.0:
        raise ValueError("ridge_lambda must be >= 0")
    route = _ROUTES[solver]
    return route(h, t, ridge_lambda)


def _normal_matrix(h: np.ndarray, lam: float) -> tuple[np.ndarray, np.ndarray]:
    gram = h.T @ h
    if lam > 0.0:
        gram = gram + lam * np.eye(h.shape[1])
    return gram, h.T


def _solve_svd(h: np.ndarray, t: np.ndarray, lam: float) -> np.ndarray:
    if lam > 0.0:
        gram, ht = _normal_matrix(h, lam)
        fac = linalg.svd(gram)
        rhs = fac.u.T @ (ht @ t)
        return fac.v @ (rhs / fac.sigma)
    fac = linalg.svd(h)
    if fac.sigma[0] == 0.0 or fac.sigma[-1] < linalg.PIVOT_RTOL * fac.sigma[0]:
        raise RankDeficient("singular values collapse below tolerance")
    return fac.v @ ((fac.u.T @ t) / fac.sigma)


def _solve_lu(h: np.ndarray, t: np.ndarray, lam: float) -> np.ndarray:
    gram, ht = _normal_matrix(h, lam)
    rhs = ht @ t
    fac = linalg.lu_decompose(gram)
    y = linalg.forward_substitute(fac.l, rhs[fac.perm])
    return linalg.backward_substitute(fac.u, y)


def _solve_qr(factorize):
    def solve(h: np.ndarray, t: np.ndarray, lam: float) -> np.ndarray:
        if lam > 0.0:
            gram, ht = _normal_matrix(h, lam)
            fac = factorize(gram)
            return linalg.triangular_inverse(fac.r) @ (fac.q.T @ (ht @ t))
        fac = factorize(h)
        return linalg.triangular_inverse(fac.r) @ (fac.q.T @ t)
    return solve


def _solve_schur(h: np.ndarray, t: np.ndarray, lam: float) -> np.ndarray:
    gram, ht = _normal_matrix(h, lam)
    fac = linalg.schur_decompose(gram)
    eigs = np.diag(fac.t)
    if np.abs(eigs).min() < linalg.PIVOT_RTOL * max(np.abs(eigs).max(), 1e-300):
        raise SingularMatrix("eigenvalue of the normal matrix is below tolerance")
    return fac.q @ ((fac.q.T @ (ht @ t)) / eigs)


def _solve_hessenberg(h: np.ndarray, t: np.ndarray, lam: float) -> np.ndarray:
    gram, ht = _normal_matrix(h, lam)
    fac = linalg.hessenberg_reduce(gram)
    return fac.q @ linalg.tridiagonal_solve(fac.t, fac.q.T @ (ht @ t))


_ROUTES = {
    SolverKind.SVD: _solve_svd,
    SolverKind.LU: _solve_lu,
    SolverKind.MGS_QR: _solve_qr(linalg.mgs_qr),
    SolverKind.HH_QR: _solve_qr(linalg.householder_qr),
    SolverKind.SCHUR: _solve_schur,
    SolverKind.HESSENBERG: _solve_hessenberg,
}


# ---------------------------------------------------------------------------
# Train / predict / leverage diagnostic
# ---------------------------------------------------------------------------

def train(features, targets, cfg: ElmConfig) -> TrainResult:
    """Fit normalizer, draw the hidden layer, and solve the output weights."""
    x = as_matrix(features, "features")
    t = as_vector(targets, "targets")
    if x.shape[0] != t.size:
        raise DimensionMismatch(
            f"{x.shape[0]} feature rows for {t.size} targets")
    if x.shape[0] < 2:
        raise DimensionMismatch("need at least 2 samples")
    if not np.all(np.isin(t, (0.0, 1.0))):
        raise InvalidLabel("targets must be encoded {0, 1}")
    start = time.perf_counter()
    nrm = fit_normalizer(x)
    weights, biases = init_random_layer(cfg, x.shape[1])
    h = hidden_output(apply_normalizer(nrm, x), weights, biases, cfg.activation)
    w_out = solve_output_weights(h, t, cfg.solver, cfg.ridge_lambda)
    elapsed = time.perf_counter() - start
    model = ElmModel(input_weights=weights, biases=biases, output_weights=w_out,
                     normalizer=nrm, activation=cfg.activation)
    return TrainResult(model=model, train_s=elapsed)


def predict(model: ElmModel, features) -> tuple[np.ndarray, np.ndarray]:
    """Scores and 0/1 labels (threshold 0.5) for new feature rows."""
    x = as_matrix(features, "features")
    if x.shape[1] != model.input_weights.shape[0]:
        raise DimensionMismatch(
            f"features have {x.shape[1]} columns, model expects "
            f"{model.input_weights.shape[0]}")
    h = hidden_output(apply_normalizer(model.normalizer, x),
                      model.input_weights, model.biases, model.activation)
    scores = h @ model.output_weights
    labels = (scores >= 0.5).astype(np.int64)
    return scores, labels


def hat_diagnostic(h, ridge_lambda: float,
                   solver: SolverKind = SolverKind.SVD) -> np.ndarray:
    """Leave-one-out leverage: 1 - diag(h (h.T h + lambda I)^-1 h.T).

    The inner inverse is applied through the requested decomposition route;
    ridge_lambda must be positive so the regularized normal matrix is always
    invertible. Every entry lies in (0, 1].
    """
    h = as_matrix(h, "h")
    if ridge_lambda <= 0.0:
        raise ValueError("ridge_lambda must be positive")
    gram, ht = _normal_matrix(h, ridge_lambda)
    solve_cols = _GRAM_SOLVES[solver]
    inner = solve_cols(gram, ht)  # (m, n) columns of (h.T h + lam I)^-1 h.T
    return 1.0 - np.einsum("ij,ji->i", h, inner)


def _gram_solve_svd(gram: np.ndarray, rhs: np.ndarray) -> np.ndarray:
    fac = linalg.svd(gram)
    return fac.v @ ((fac.u.T @ rhs) / fac.sigma[:, None])


def _gram_solve_lu(gram: np.ndarray, rhs: np.ndarray) -> np.ndarray:
    fac = linalg.lu_decompose(gram)
    cols = [linalg.backward_substitute(
        fac.u, linalg.forward_substitute(fac.l, rhs[fac.perm, j]))
        for j in range(rhs.shape[1])]
    return np.column_stack(cols)


def _gram_solve_qr(factorize):
    def solve(gram: np.ndarray, rhs: np.ndarray) -> np.ndarray:
        fac = factorize(gram)
        return linalg.triangular_inverse(fac.r) @ (fac.q.T @ rhs)
    return solve


def _gram_solve_schur(gram: np.ndarray, rhs: np.ndarray) -> np.ndarray:
    fac = linalg.schur_decompose(gram)
    return fac.q @ ((fac.q.T @ rhs) / np.diag(fac.t)[:, None])


def _gram_solve_hessenberg(gram: np.ndarray, rhs: np.ndarray) -> np.ndarray:
    fac = linalg.hessenberg_reduce(gram)
    return fac.q @ linalg.tridiagonal_solve(fac.t, fac.q.T @ rhs)


_GRAM_SOLVES = {
    SolverKind.SVD: _gram_solve_svd,
    SolverKind.LU: _gram_solve_lu,
    SolverKind.MGS_QR: _gram_solve_qr(linalg.mgs_qr),
    SolverKind.HH_QR: _gram_solve_qr(linalg.householder_qr),
    SolverKind.SCHUR: _gram_solve_schur,
    SolverKind.HESSENBERG: _gram_solve_hessenberg,
}
