import numpy as np
import pytest

from helpers import from_dense, random_binary
from lexifactor import (
    DocTermMatrix,
    ParseError,
    read_matrix_market,
    write_matrix_market,
)


@pytest.fixture()
def tiny():
    return DocTermMatrix(doc_ids=("d1", "d2"), terms=("a", "b"), rows=((0, 1), (1,)))


class TestWrite:
    def test_exact_bytes(self, tmp_path, tiny):
        path = tmp_path / "m.mtx"
        write_matrix_market(tiny, path)
        assert path.read_text() == (
            "%%MatrixMarket matrix coordinate pattern general\n"
            "2 2 3\n"
            "1 1\n"
            "1 2\n"
            "2 2\n"
        )
        assert (tmp_path / "m.terms.txt").read_text() == "a\nb\n"
        assert (tmp_path / "m.docs.txt").read_text() == "d1\nd2\n"

    def test_writes_are_deterministic(self, tmp_path, tiny):
        write_matrix_market(tiny, tmp_path / "x.mtx")
        write_matrix_market(tiny, tmp_path / "y.mtx")
        assert (tmp_path / "x.mtx").read_bytes() == (tmp_path / "y.mtx").read_bytes()


class TestRoundTrip:
    def test_random_matrices(self, tmp_path):
        rng = np.random.default_rng(11)
        for trial in range(10):
            dense = random_binary(rng, int(rng.integers(1, 30)), int(rng.integers(1, 15)))
            matrix = from_dense(dense)
            path = tmp_path / f"m{trial}.mtx"
            write_matrix_market(matrix, path)
            assert read_matrix_market(path) == matrix

    def test_empty_rows_preserved(self, tmp_path):
        matrix = DocTermMatrix(doc_ids=("a", "b"), terms=("t",), rows=((), (0,)))
        path = tmp_path / "m.mtx"
        write_matrix_market(matrix, path)
        assert read_matrix_market(path) == matrix

    def test_unsorted_entries_tolerated(self, tmp_path, tiny):
        path = tmp_path / "m.mtx"
        write_matrix_market(tiny, path)
        lines = path.read_text().splitlines()
        path.write_text("\n".join([lines[0], lines[1], *reversed(lines[2:])]) + "\n")
        assert read_matrix_market(path) == tiny


class TestReadErrors:
    def write(self, tmp_path, tiny, body):
        path = tmp_path / "m.mtx"
        write_matrix_market(tiny, path)
        path.write_text(body)
        return path

    def test_bad_header(self, tmp_path, tiny):
        path = self.write(
            tmp_path, tiny, "%%MatrixMarket matrix coordinate real general\n2 2 0\n"
        )
        with pytest.raises(ParseError, match="header"):
            read_matrix_market(path)

    def test_entry_out_of_range(self, tmp_path, tiny):
        path = self.write(
            tmp_path,
            tiny,
            "%%MatrixMarket matrix coordinate pattern general\n2 2 1\n3 1\n",
        )
        with pytest.raises(ParseError, match="outside"):
            read_matrix_market(path)

    def test_duplicate_entry(self, tmp_path, tiny):
        path = self.write(
            tmp_path,
            tiny,
            "%%MatrixMarket matrix coordinate pattern general\n2 2 2\n1 1\n1 1\n",
        )
        with pytest.raises(ParseError, match="duplicate"):
            read_matrix_market(path)

    def test_nnz_mismatch(self, tmp_path, tiny):
        path = self.write(
            tmp_path,
            tiny,
            "%%MatrixMarket matrix coordinate pattern general\n2 2 5\n1 1\n",
        )
        with pytest.raises(ParseError, match="declares 5"):
            read_matrix_market(path)

    def test_dimension_mismatch_with_sidecar(self, tmp_path, tiny):
        path = self.write(
            tmp_path,
            tiny,
            "%%MatrixMarket matrix coordinate pattern general\n3 2 0\n",
        )
        with pytest.raises(ParseError, match="sidecar"):
            read_matrix_market(path)

    def test_missing_sidecar(self, tmp_path, tiny):
        path = tmp_path / "m.mtx"
        write_matrix_market(tiny, path)
        (tmp_path / "m.terms.txt").unlink()
        with pytest.raises(ParseError, match="sidecar"):
            read_matrix_market(path)

    def test_malformed_entry(self, tmp_path, tiny):
        path = self.write(
            tmp_path,
            tiny,
            "%%MatrixMarket matrix coordinate pattern general\n2 2 1\n1 x\n",
        )
        with pytest.raises(ParseError, match="malformed entry"):
            read_matrix_market(path)
