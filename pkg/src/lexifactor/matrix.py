"""Binary document-term matrix construction and variance filtering.

The matrix is binary and sparse: row ``d`` column ``t`` is 1 exactly
when some token of document ``d`` lemmatizes to dictionary term ``t``.
Rows are stored as sorted tuples of column indices, which keeps the
structure cheap at corpus scale and makes equality checks trivial.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import EmptyMatrixError, ValidationError
from .ingest import Review, tokenize
from .lexicon import Lexicon, TermDictionary, lemmatize_token


@dataclass
class DocTermMatrix:
    """Sparse binary matrix over documents (rows) and terms (columns)."""

    doc_ids: tuple[str, ...]
    terms: tuple[str, ...]
    rows: tuple[tuple[int, ...], ...]

    @property
    def n_docs(self) -> int:
        return len(self.doc_ids)

    @property
    def n_terms(self) -> int:
        return len(self.terms)

    def nnz(self) -> int:
        return sum(len(row) for row in self.rows)

    def to_dense(self) -> np.ndarray:
        """Materialize as a float array; intended for small matrices."""
        dense = np.zeros((self.n_docs, self.n_terms), dtype=np.float64)
        for i, row in enumerate(self.rows):
            if row:
                dense[i, list(row)] = 1.0
        return dense


@dataclass(frozen=True, slots=True)
class ColumnStats:
    """Per-column document frequency, incidence rate, and variance."""

    df: int
    p: float
    variance: float


def build_matrix(
    reviews: Sequence[Review],
    dictionary: TermDictionary,
    lexicon: Lexicon,
    threads: int = 1,
) -> DocTermMatrix:
    """Map each review onto the dictionary columns it mentions.

    ``threads`` only parallelizes the per-review work; rows are keyed by
    position, so the result is identical for any thread count.
    """
    if threads < 1:
        raise ValidationError(f"threads must be positive, got {threads}")
    reviews = list(reviews)
    index = dictionary.index
    cache: dict[str, int] = {}  # token -> column, -1 for no dictionary term

    def row_for(review: Review) -> tuple[int, ...]:
        columns: set[int] = set()
        for token in tokenize(review.text):
            column = cache.get(token)
            if column is None:
                lemma = lemmatize_token(lexicon, token)
                column = -1 if lemma is None else index.get(lemma, -1)
                cache[token] = column
            if column >= 0:
                columns.add(column)
        return tuple(sorted(columns))

    if threads == 1:
        rows = tuple(row_for(review) for review in reviews)
    else:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            rows = tuple(pool.map(row_for, reviews))

    return DocTermMatrix(
        doc_ids=tuple(review.id for review in reviews),
        terms=dictionary.terms,
        rows=rows,
    )


def column_stats(matrix: DocTermMatrix) -> tuple[ColumnStats, ...]:
    """Document frequency, rate p = df/n, and Bernoulli variance p(1-p)."""
    if matrix.n_docs == 0:
        raise EmptyMatrixError("cannot compute column stats of an empty matrix")
    flat = np.fromiter(
        (column for row in matrix.rows for column in row),
        dtype=np.int64,
        count=matrix.nnz(),
    )
    counts = np.bincount(flat, minlength=matrix.n_terms) if flat.size else np.zeros(
        matrix.n_terms, dtype=np.int64
    )
    n = matrix.n_docs
    stats = []
    for df in counts.tolist():
        p = df / n
        stats.append(ColumnStats(df=df, p=p, variance=p * (1.0 - p)))
    return tuple(stats)


def _select_columns(matrix: DocTermMatrix, keep: Sequence[int]) -> DocTermMatrix:
    """Project the matrix onto ``keep`` (ascending original column indices)."""
    remap = {old: new for new, old in enumerate(keep)}
    rows = tuple(
        tuple(remap[column] for column in row if column in remap) for row in matrix.rows
    )
    return DocTermMatrix(
        doc_ids=matrix.doc_ids,
        terms=tuple(matrix.terms[old] for old in keep),
        rows=rows,
    )


def filter_low_variance(
    matrix: DocTermMatrix,
    min_variance: float,
    stats: Sequence[ColumnStats] | None = None,
) -> tuple[DocTermMatrix, tuple[int, ...]]:
    """Keep columns with variance >= ``min_variance``; also return their
    original column indices."""
    if not 0.0 <= min_variance <= 0.25:
        raise ValidationError(f"min_variance must lie in [0, 0.25], got {min_variance}")
    if stats is None:
        stats = column_stats(matrix)
    keep = tuple(i for i, s in enumerate(stats) if s.variance >= min_variance)
    if not keep:
        raise EmptyMatrixError(f"no columns with variance >= {min_variance}")
    return _select_columns(matrix, keep), keep


def filter_top_variance(
    matrix: DocTermMatrix,
    k: int,
    stats: Sequence[ColumnStats] | None = None,
) -> tuple[DocTermMatrix, tuple[int, ...]]:
    """Keep the ``k`` highest-variance columns (ties go to the lower
    column index); also return their original indices."""
    if k < 1:
        raise ValidationError(f"k must be positive, got {k}")
    if stats is None:
        stats = column_stats(matrix)
    ranked = sorted(range(len(stats)), key=lambda i: (-stats[i].variance, i))
    keep = tuple(sorted(ranked[: min(k, len(ranked))]))
    if not keep:
        raise EmptyMatrixError("matrix has no columns")
    return _select_columns(matrix, keep), keep


def empty_row_count(matrix: DocTermMatrix) -> int:
    """Number of documents that mention no dictionary term."""
    return sum(1 for row in matrix.rows if not row)
