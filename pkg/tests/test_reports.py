"""
Test suite for check reports
"""

import json
import pytest
import sys
import os

# Add repository root to path
sys.path.insert(0, os.path.join(os.path.dirname(__file__), '..'))

from ainf_unitality.exact_linalg import Field
from ainf_unitality.quiver import Gen
from ainf_unitality.reports import CheckReport, CheckRun, Report, describe, file_digest, run_checks
from ainf_unitality.tensor_coalgebra import empty_word, word_of

Q = Field(0)
A = Gen("a", "X", "X", 0)


class TestCheckRun:
    """Witness bookkeeping"""

    def test_first_witness_kept(self):
        """Test only the first nonzero residual becomes the witness"""
        run = CheckRun("demo", 3, Q)
        assert run.record("eq", 1, ["X", "X"], word_of(A), {})
        assert not run.record("eq", 2, ["X", "X", "X"], word_of(A, A), {A: Q(2)})
        assert not run.record("other", 3, [], word_of(A), {A: Q.one})
        report = run.report()
        assert not report.passed
        assert report.checked == 3
        assert report.witness.equation == "eq"
        assert report.witness.word == ["a", "a"]
        assert report.witness.residual == [["a", "2"]]

    def test_zero_coefficients_ignored(self):
        """Test cancelled terms do not fail a check"""
        run = CheckRun("demo", 1, Q)
        assert run.record("eq", 1, [], word_of(A), {A: Q.zero})
        assert run.report().passed

    def test_fail(self):
        """Test failures without a residual"""
        run = CheckRun("demo", 1, Q)
        run.fail("search", "nothing found")
        report = run.report()
        assert not report.passed and report.witness.word == "nothing found"

    def test_describe(self):
        """Test labels for words and tuples"""
        assert describe(empty_word("X")) == ["[X]"]
        assert describe((word_of(A), empty_word("X"))) == [["a"], ["[X]"]]


class TestReport:
    """JSON reports and the check runner"""

    def test_to_json(self):
        """Test the report format and success flag"""
        report = Report("check", 3, "rational", checks=[CheckReport("x", True, 3, 1), CheckReport("y", False, 3, 1)])
        data = json.loads(report.to_json())
        assert data["format"] == 1
        assert data["success"] is False
        assert [c["name"] for c in data["checks"]] == ["x", "y"]

    @pytest.mark.parametrize("workers", [1, 2])
    def test_run_checks_sorted(self, workers):
        """Test results are sorted by name whatever the scheduling"""
        checks = {
            "b": lambda: CheckReport("b", True, 1),
            "a": lambda: [CheckReport("c", True, 1), CheckReport("a", True, 1)],
        }
        assert [r.name for r in run_checks(checks, workers)] == ["a", "b", "c"]

    @pytest.mark.parametrize("workers", [1, 4])
    def test_run_checks_same_names(self, workers):
        """Test reports sharing a name keep group order, then position"""
        checks = {
            "slow": lambda: [CheckReport("dup", True, 1, checked=1), CheckReport("dup", True, 1, checked=2)],
            "fast": lambda: CheckReport("dup", True, 1, checked=3),
        }
        assert [r.checked for r in run_checks(checks, workers)] == [1, 2, 3]

    def test_fail_path(self):
        """Test a failure without residual keeps its object path"""
        run = CheckRun("demo", 2, Q)
        assert not run.fail("hom", "no solution", ("X", "Y"))
        assert run.report().witness.path == ["X", "Y"]
        assert run.report().witness.arity is None

    def test_file_digest(self, tmp_path):
        """Test the sha256 digest of a file"""
        path = tmp_path / "empty.json"
        path.write_bytes(b"")
        assert file_digest(str(path)) == "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855"


if __name__ == "__main__":
    pytest.main([__file__, "-v"])
