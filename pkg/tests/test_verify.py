"""Tests for the acceptance suite."""

import pytest

from tools.errors import VerificationError
from verify.suite import (
    check_decay_rate,
    check_double_barrier_spectrum,
    check_oracle_equivalence,
    check_quasi_periodicity,
    check_triple_barrier,
    resolve_suite,
    run_suite,
)


class TestChecks:
    """Test individual acceptance checks."""

    def test_should_pass_double_barrier_spectrum(self):
        """Test the spectrum check without the parameter sweep."""
        result = check_double_barrier_spectrum(sweep=False)

        assert result["success"], result["message"]
        assert result["name"]
        assert result["elapsed"] >= 0

    def test_should_pass_oracle_equivalence(self):
        """Test σ roots against the cut-off eigenvalues on a few random walks."""
        result = check_oracle_equivalence(count=5, max_k=4, seed=7)

        assert result["success"], result["message"]

    def test_should_pass_quasi_periodicity(self):
        """Test the period-10 law on the double barrier."""
        assert check_quasi_periodicity()["success"]

    def test_should_pass_decay_rate(self):
        """Test the fitted survival rate."""
        assert check_decay_rate()["success"]

    def test_should_pass_triple_barrier(self):
        """Test the double roots ±i/√2."""
        result = check_triple_barrier()

        assert result["success"], result["message"]
        assert set(result) == {"name", "success", "message", "elapsed", "details"}


class TestRunSuite:
    """Test the suite runner."""

    def test_should_reject_unknown_suite(self):
        """Test that only the registered suites run."""
        with pytest.raises(VerificationError, match="unknown suite"):
            run_suite("nightly")

    def test_should_resolve_suite_aliases(self):
        """Test that the alias names the full suite and the others map to themselves."""
        assert resolve_suite("paper") == "full"
        assert resolve_suite("full") == "full"
        assert resolve_suite("quick") == "quick"

    @pytest.mark.slow
    def test_should_pass_quick_suite(self):
        """Test that every check of the quick suite passes."""
        result = run_suite("quick", seed=1)

        assert result["success"], result["failed"]
        assert result["passed"] == len(result["results"]) == 11
        assert result["failed"] == []
