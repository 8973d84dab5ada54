"""Matrix Market persistence for the binary document-term matrix.

The matrix itself goes into a ``coordinate pattern`` Matrix Market file
with 1-based ``row col`` entries in row-major order. Column labels live
in a ``<name>.terms.txt`` sidecar and row ids in ``<name>.docs.txt``,
one per line, aligned with the matrix dimensions.
"""

from __future__ import annotations

from pathlib import Path

from .errors import ParseError
from .matrix import DocTermMatrix

_HEADER = "%%MatrixMarket matrix coordinate pattern general"


def terms_sidecar(mtx_path: str | Path) -> Path:
    return Path(mtx_path).with_suffix(".terms.txt")


def docs_sidecar(mtx_path: str | Path) -> Path:
    return Path(mtx_path).with_suffix(".docs.txt")


def write_matrix_market(matrix: DocTermMatrix, mtx_path: str | Path) -> None:
    """Write the matrix and both sidecars next to ``mtx_path``."""
    mtx_path = Path(mtx_path)
    with open(mtx_path, "w", encoding="utf-8", newline="") as handle:
        handle.write(_HEADER + "\n")
        handle.write(f"{matrix.n_docs} {matrix.n_terms} {matrix.nnz()}\n")
        handle.writelines(
            f"{i + 1} {column + 1}\n"
            for i, row in enumerate(matrix.rows)
            for column in row
        )
    _write_lines(terms_sidecar(mtx_path), matrix.terms)
    _write_lines(docs_sidecar(mtx_path), matrix.doc_ids)


def read_matrix_market(mtx_path: str | Path) -> DocTermMatrix:
    """Read a matrix written by :func:`write_matrix_market`.

    Entries may appear in any order; duplicates and out-of-range indices
    are format errors.
    """
    mtx_path = Path(mtx_path)
    terms = _read_lines(terms_sidecar(mtx_path))
    doc_ids = _read_lines(docs_sidecar(mtx_path))

    with open(mtx_path, encoding="utf-8") as handle:
        header = handle.readline().rstrip("\n")
        if header.split() != _HEADER.split():
            raise ParseError(f"unsupported Matrix Market header: {header!r}", path=str(mtx_path), line=1)
        lineno = 1
        size_line = None
        for raw in handle:
            lineno += 1
            if raw.startswith("%") or not raw.strip():
                continue
            size_line = raw
            break
        if size_line is None:
            raise ParseError("missing size line", path=str(mtx_path))
        try:
            n_docs, n_terms, nnz = (int(x) for x in size_line.split())
        except ValueError as exc:
            raise ParseError(f"malformed size line: {size_line!r}", path=str(mtx_path), line=lineno) from exc
        if n_docs != len(doc_ids):
            raise ParseError(
                f"matrix declares {n_docs} rows but docs sidecar lists {len(doc_ids)}",
                path=str(mtx_path),
            )
        if n_terms != len(terms):
            raise ParseError(
                f"matrix declares {n_terms} columns but terms sidecar lists {len(terms)}",
                path=str(mtx_path),
            )

        row_sets: list[set[int]] = [set() for _ in range(n_docs)]
        seen = 0
        for raw in handle:
            lineno += 1
            if raw.startswith("%") or not raw.strip():
                continue
            try:
                row, column = (int(x) for x in raw.split())
            except ValueError as exc:
                raise ParseError(f"malformed entry: {raw.strip()!r}", path=str(mtx_path), line=lineno) from exc
            if not (1 <= row <= n_docs and 1 <= column <= n_terms):
                raise ParseError(
                    f"entry ({row}, {column}) outside {n_docs}x{n_terms}",
                    path=str(mtx_path),
                    line=lineno,
                )
            if column - 1 in row_sets[row - 1]:
                raise ParseError(f"duplicate entry ({row}, {column})", path=str(mtx_path), line=lineno)
            row_sets[row - 1].add(column - 1)
            seen += 1
        if seen != nnz:
            raise ParseError(f"size line declares {nnz} entries, file has {seen}", path=str(mtx_path))

    return DocTermMatrix(
        doc_ids=tuple(doc_ids),
        terms=tuple(terms),
        rows=tuple(tuple(sorted(row)) for row in row_sets),
    )


def _write_lines(path: Path, lines: tuple[str, ...]) -> None:
    with open(path, "w", encoding="utf-8", newline="") as handle:
        handle.writelines(line + "\n" for line in lines)


def _read_lines(path: Path) -> list[str]:
    if not path.is_file():
        raise ParseError(f"missing sidecar file: {path}", path=str(path))
    with open(path, encoding="utf-8") as handle:
        return [line.rstrip("\n") for line in handle]
