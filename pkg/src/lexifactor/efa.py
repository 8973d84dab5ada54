"""Exploratory factor analysis over a binary document-term matrix.

The chain is: phi correlation matrix, eigenvalue-based factor count
selection, unweighted least squares extraction (iterated principal axis
on the reduced correlation matrix), Varimax rotation, then pruning the
rotated loadings into per-factor word lists and refining those to the
strongest factors.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple, Sequence

import numpy as np
from scipy import sparse

from .errors import DegenerateColumnError, ValidationError
from .matrix import ColumnStats, DocTermMatrix, column_stats


@dataclass(eq=False)
class CorrelationMatrix:
    """Phi correlation matrix with the term labels of its axes."""

    values: np.ndarray
    terms: tuple[str, ...]


@dataclass(eq=False)
class FactorModel:
    """Result of a ULS extraction, optionally carrying a rotation.

    ``loadings`` is the unrotated p x k pattern; ``rotation`` starts as
    the identity and ``rotated`` equals ``loadings`` until a rotation is
    attached. ``eigenvalues`` is the full spectrum of the correlation
    matrix, descending.
    """

    k: int
    loadings: np.ndarray
    communalities: np.ndarray
    uniquenesses: np.ndarray
    eigenvalues: np.ndarray
    rotation: np.ndarray
    rotated: np.ndarray
    converged: bool
    n_iter: int
    heywood: bool


@dataclass(frozen=True)
class FactorLoadings:
    """One factor's retained terms, ordered by descending |loading|."""

    factor: int  # 1-based
    entries: tuple[tuple[str, float], ...]

    @property
    def top_value(self) -> float:
        """Strength of the factor's best word; -1.0 when nothing survived."""
        return abs(self.entries[0][1]) if self.entries else -1.0


@dataclass
class LoadingTable:
    factors: tuple[FactorLoadings, ...]
    threshold: float


class VarimaxResult(NamedTuple):
    loadings: np.ndarray
    rotation: np.ndarray
    sweeps: int
    criterion_history: tuple[float, ...]


def correlation_matrix(
    matrix: DocTermMatrix, stats: Sequence[ColumnStats] | None = None
) -> CorrelationMatrix:
    """Phi coefficients between all column pairs.

    For binary columns the phi coefficient is the Pearson correlation:
    (p11 - p_i p_j) / sqrt(p_i (1-p_i) p_j (1-p_j)). Co-occurrence
    counts come from a sparse product, so the result is exactly
    symmetric; values are clipped to [-1, 1] and the diagonal is exactly
    1. Constant columns have no correlation and are an error.
    """
    if stats is None:
        stats = column_stats(matrix)
    rates = np.array([s.p for s in stats])
    variances = np.array([s.variance for s in stats])
    constant = np.nonzero(variances == 0.0)[0]
    if constant.size:
        names = ", ".join(matrix.terms[i] for i in constant[:5])
        raise DegenerateColumnError(f"constant columns have no correlation: {names}")

    nnz = matrix.nnz()
    indices = np.fromiter(
        (column for row in matrix.rows for column in row), dtype=np.int64, count=nnz
    )
    indptr = np.zeros(matrix.n_docs + 1, dtype=np.int64)
    np.cumsum([len(row) for row in matrix.rows], out=indptr[1:])
    incidence = sparse.csr_matrix(
        (np.ones(nnz, dtype=np.float64), indices, indptr),
        shape=(matrix.n_docs, matrix.n_terms),
    )
    cooccurrence = (incidence.T @ incidence).toarray() / matrix.n_docs

    values = (cooccurrence - np.outer(rates, rates)) / np.sqrt(np.outer(variances, variances))
    np.clip(values, -1.0, 1.0, out=values)
    np.fill_diagonal(values, 1.0)
    return CorrelationMatrix(values=values, terms=matrix.terms)


def eigendecompose(corr: CorrelationMatrix) -> tuple[np.ndarray, np.ndarray]:
    """Eigenvalues (descending) and matching eigenvector columns."""
    eigenvalues, eigenvectors = np.linalg.eigh(corr.values)
    order = np.argsort(eigenvalues)[::-1]
    return eigenvalues[order], eigenvectors[:, order]


def select_factor_count(eigenvalues: np.ndarray, method: str = "kaiser", k: int | None = None) -> int:
    """Number of factors to extract.

    ``"kaiser"`` counts eigenvalues strictly greater than 1;
    ``"fixed"`` takes ``k`` as given. Either way the count must land in
    [1, p].
    """
    p = len(eigenvalues)
    if method == "kaiser":
        count = int(np.sum(np.asarray(eigenvalues) > 1.0))
        if count < 1:
            raise ValidationError("Kaiser rule selected zero factors (no eigenvalue exceeds 1)")
        return count
    if method == "fixed":
        if k is None:
            raise ValidationError("fixed factor selection requires k")
        if not 1 <= k <= p:
            raise ValidationError(f"factor count {k} outside [1, {p}]")
        return k
    raise ValidationError(f"unknown factor selection method: {method!r}")


def _initial_communalities(corr_values: np.ndarray) -> np.ndarray:
    """Squared multiple correlations, or max |row correlation| as fallback."""
    try:
        inverse_diag = np.diag(np.linalg.inv(corr_values))
        smc = 1.0 - 1.0 / inverse_diag
    except np.linalg.LinAlgError:
        off = np.abs(corr_values).copy()
        np.fill_diagonal(off, 0.0)
        smc = off.max(axis=1)
    smc = np.nan_to_num(smc, nan=0.0, posinf=1.0, neginf=0.0)
    return np.clip(smc, 0.0, 1.0)


def extract_uls(
    corr: CorrelationMatrix,
    k: int,
    tol: float = 1e-6,
    max_iter: int = 1000,
) -> FactorModel:
    """Iterated principal-axis extraction of ``k`` factors.

    Each pass eigendecomposes the correlation matrix with current
    communality estimates on the diagonal, rebuilds loadings from the
    top ``k`` components (negative eigenvalues clipped to zero), and
    updates the communalities from the loading row sums of squares until
    the largest change drops below ``tol``. Communalities are clamped at
    1; hitting the clamp sets the ``heywood`` flag.
    """
    C = np.asarray(corr.values, dtype=np.float64)
    p = C.shape[0]
    if C.shape != (p, p):
        raise ValidationError(f"correlation matrix must be square, got {C.shape}")
    if not 1 <= k <= p:
        raise ValidationError(f"factor count {k} outside [1, {p}]")
    if tol <= 0 or max_iter < 1:
        raise ValidationError("tol must be positive and max_iter at least 1")

    full_spectrum = np.sort(np.linalg.eigvalsh(C))[::-1]

    h2 = _initial_communalities(C)
    reduced = C.copy()
    loadings = np.zeros((p, k))
    heywood = False
    converged = False
    iterations = 0
    for iterations in range(1, max_iter + 1):
        np.fill_diagonal(reduced, h2)
        eigenvalues, eigenvectors = np.linalg.eigh(reduced)
        top = np.argsort(eigenvalues)[::-1][:k]
        scale = np.sqrt(np.clip(eigenvalues[top], 0.0, None))
        loadings = eigenvectors[:, top] * scale
        new_h2 = np.sum(loadings * loadings, axis=1)
        if np.any(new_h2 > 1.0):
            heywood = True
            new_h2 = np.minimum(new_h2, 1.0)
        delta = float(np.max(np.abs(new_h2 - h2)))
        h2 = new_h2
        if delta < tol:
            converged = True
            break

    # Fix each factor's sign so its largest-magnitude loading is positive.
    for j in range(k):
        anchor = int(np.argmax(np.abs(loadings[:, j])))
        if loadings[anchor, j] < 0:
            loadings[:, j] = -loadings[:, j]

    return FactorModel(
        k=k,
        loadings=loadings,
        communalities=h2,
        uniquenesses=1.0 - h2,
        eigenvalues=full_spectrum,
        rotation=np.eye(k),
        rotated=loadings.copy(),
        converged=converged,
        n_iter=iterations,
        heywood=heywood,
    )


def uls_objective(corr_values: np.ndarray, loadings: np.ndarray) -> float:
    """Sum of squared off-diagonal residuals of C - L L^T."""
    residual = corr_values - loadings @ loadings.T
    np.fill_diagonal(residual, 0.0)
    return float(np.sum(residual * residual))


def varimax_criterion(loadings: np.ndarray) -> float:
    """Sum over factors of the variance of squared loadings."""
    W2 = np.asarray(loadings) ** 2
    p = W2.shape[0]
    return float(np.sum((W2 * W2).sum(axis=0) / p - (W2.sum(axis=0) / p) ** 2))


def varimax_rotate(
    loadings: np.ndarray,
    kaiser_normalize: bool = True,
    tol: float = 1e-10,
    max_sweeps: int = 100,
) -> VarimaxResult:
    """Orthogonal Varimax rotation by pairwise planar rotations.

    With ``kaiser_normalize`` the rows are scaled to unit length for the
    sweeps and the final pattern is rebuilt from the accumulated
    rotation, so ``result.loadings == loadings @ result.rotation`` holds
    bitwise. Factors are reordered by descending sum of squared rotated
    loadings and signed so each factor's largest-magnitude loading is
    positive; both steps are folded into the rotation matrix. The
    criterion history tracks the working (normalized) matrix and never
    decreases: a sweep that loses ground to roundoff is undone.
    """
    L0 = np.array(loadings, dtype=np.float64)
    if L0.ndim != 2:
        raise ValidationError(f"loadings must be 2-d, got shape {L0.shape}")
    p, k = L0.shape
    if p == 0 or k == 0:
        raise ValidationError("loadings matrix must be non-empty")
    if max_sweeps < 1:
        raise ValidationError("max_sweeps must be at least 1")

    if kaiser_normalize:
        norms = np.sqrt(np.sum(L0 * L0, axis=1))
        norms[norms == 0.0] = 1.0
        W = L0 / norms[:, None]
    else:
        W = L0.copy()

    T = np.eye(k)
    history = [varimax_criterion(W)]
    sweeps = 0
    for _ in range(max_sweeps if k > 1 else 0):
        W_before, T_before = W.copy(), T.copy()
        for f in range(k - 1):
            for g in range(f + 1, k):
                x, y = W[:, f], W[:, g]
                u = x * x - y * y
                v = 2.0 * x * y
                A = u.sum()
                B = v.sum()
                C = np.sum(u * u - v * v)
                D = 2.0 * np.sum(u * v)
                phi = 0.25 * math.atan2(D - 2.0 * A * B / p, C - (A * A - B * B) / p)
                if abs(phi) < 1e-15:
                    continue
                c, s = math.cos(phi), math.sin(phi)
                R = np.array([[c, -s], [s, c]])
                W[:, [f, g]] = W[:, [f, g]] @ R
                T[:, [f, g]] = T[:, [f, g]] @ R
        value = varimax_criterion(W)
        if value < history[-1]:
            W, T = W_before, T_before  # roundoff regression: undo the sweep
            break
        sweeps += 1
        gain = value - history[-1]
        history.append(value)
        if gain < tol:
            break

    # Order factors by explained sum of squares, then fix signs; fold both
    # into T so the rotated pattern is exactly loadings @ T.
    rotated = L0 @ T
    ssq = np.sum(rotated * rotated, axis=0)
    order = sorted(range(k), key=lambda j: (-ssq[j], j))
    T = T[:, order]
    rotated = rotated[:, order]
    signs = np.ones(k)
    for j in range(k):
        anchor = int(np.argmax(np.abs(rotated[:, j])))
        if rotated[anchor, j] < 0:
            signs[j] = -1.0
    T = T * signs
    rotated = L0 @ T
    return VarimaxResult(
        loadings=rotated, rotation=T, sweeps=sweeps, criterion_history=tuple(history)
    )


def prune_loadings(model: FactorModel, threshold: float, terms: Sequence[str]) -> LoadingTable:
    """Per factor, keep terms whose rotated |loading| is at or above
    ``threshold``, ordered by descending |loading| (ties alphabetical)."""
    if threshold < 0.0:
        raise ValidationError(f"threshold must be non-negative, got {threshold}")
    if len(terms) != model.rotated.shape[0]:
        raise ValidationError(
            f"{len(terms)} terms for {model.rotated.shape[0]} loading rows"
        )
    factors = []
    for j in range(model.k):
        column = model.rotated[:, j]
        picked = [
            (terms[i], float(column[i]))
            for i in range(len(terms))
            if abs(column[i]) >= threshold
        ]
        picked.sort(key=lambda entry: (-abs(entry[1]), entry[0]))
        factors.append(FactorLoadings(factor=j + 1, entries=tuple(picked)))
    return LoadingTable(factors=tuple(factors), threshold=threshold)


def refine_factors(table: LoadingTable, retain: int) -> LoadingTable:
    """Keep the ``retain`` factors with the strongest top word.

    Factors are ranked by their best absolute loading (empty factors
    rank last); the survivors keep their original ids and order.
    """
    if retain < 1:
        raise ValidationError(f"retain must be positive, got {retain}")
    ranked = sorted(table.factors, key=lambda f: (-f.top_value, f.factor))
    kept = sorted(ranked[:retain], key=lambda f: f.factor)
    return LoadingTable(factors=tuple(kept), threshold=table.threshold)
