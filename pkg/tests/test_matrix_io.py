import io
import json

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from mmin.matrix_io import FORMATS, ParseError, infer_format, parse_matrix, parse_text, render_matrix

finite = st.floats(allow_nan=False, allow_infinity=False, width=64)


def square(n):
    return arrays(np.float64, (n, n), elements=finite)


class TestParse:
    def test_plain(self):
        np.testing.assert_array_equal(parse_text("2\n2 -1\n-1 2", "plain"), [[2, -1], [-1, 2]])

    def test_plain_layout_free(self):
        np.testing.assert_array_equal(parse_text("2 2 -1 -1 2\n", "plain"), [[2, -1], [-1, 2]])

    def test_csv(self):
        np.testing.assert_array_equal(parse_text("2,-1\n-1,2\n", "csv"), [[2, -1], [-1, 2]])

    def test_json(self):
        A = parse_text('{"n": 2, "rows": [[2, -1], [-1, 2.5]]}', "json")
        np.testing.assert_array_equal(A, [[2, -1], [-1, 2.5]])

    def test_csv_wide_row(self):
        with pytest.raises(ParseError, match="row 1"):
            parse_text("1,2,3\n4,5\n", "csv")

    @pytest.mark.parametrize(
        "text, fmt, fragment",
        [
            ("", "plain", "empty"),
            ("x 1", "plain", "integer"),
            ("2\n1 2 3", "plain", "expected 4 entries"),
            ("2\n1 2 3 abc", "plain", "row 2, column 2"),
            ("1\nnan", "plain", "non-finite"),
            ("1,2\n3,x\n", "csv", "row 2, column 2"),
            ("[1]", "json", '"n"'),
            ('{"n": 2, "rows": [[1, 2]]}', "json", "expected 2 rows"),
            ('{"n": 1, "rows": [["a"]]}', "json", "row 1, column 1"),
            ('{"n": 1, "rows": [[1]]', "json", "line 1"),
        ],
    )
    def test_errors_locate_the_problem(self, text, fmt, fragment):
        with pytest.raises(ParseError, match=fragment):
            parse_text(text, fmt)

    def test_unknown_format(self):
        with pytest.raises(ValueError):
            parse_text("1 1", "xml")


class TestSources:
    def test_fixture_name(self, ex3):
        doc = parse_matrix("ex3")
        np.testing.assert_array_equal(doc.matrix, ex3)
        assert doc.source == "ex3"

    def test_file_with_inferred_format(self, tmp_path, ex1):
        for fmt, suffix in (("csv", ".csv"), ("json", ".json"), ("plain", ".txt")):
            path = tmp_path / f"m{suffix}"
            path.write_text(render_matrix(ex1, fmt))
            assert infer_format(str(path)) == fmt
            np.testing.assert_array_equal(parse_matrix(str(path)).matrix, ex1)

    def test_stdin(self, monkeypatch):
        monkeypatch.setattr("sys.stdin", io.StringIO("1\n4\n"))
        assert parse_matrix("-").matrix.tolist() == [[4.0]]

    def test_missing_file(self, tmp_path):
        with pytest.raises(ValueError, match="cannot read"):
            parse_matrix(str(tmp_path / "none.txt"))


class TestRoundTrip:
    @pytest.mark.parametrize("fmt", FORMATS)
    def test_fixtures(self, fmt, ex1, ex2):
        for A in (ex1, ex2):
            B = parse_text(render_matrix(A, fmt), fmt)
            assert B.tobytes() == A.tobytes()

    @settings(max_examples=60, deadline=None)
    @given(st.integers(1, 6).flatmap(square), st.sampled_from(FORMATS))
    def test_bitwise(self, A, fmt):
        B = parse_text(render_matrix(A, fmt), fmt)
        # -0.0 and 0.0 compare equal but differ in bytes; both must survive
        assert B.tobytes() == A.tobytes()

    def test_json_shape(self, ex3):
        doc = json.loads(render_matrix(ex3, "json"))
        assert doc["n"] == 10 and len(doc["rows"]) == 10
