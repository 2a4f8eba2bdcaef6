"""Tests for environment-driven configuration."""

import os

import pytest

from config.globals import parse_threads
from tools.errors import DomainError


class TestParseThreads:
    """Test the QWRES_THREADS worker cap."""

    def test_should_default_to_cpu_count(self):
        """Test that an unset or blank variable falls back to the CPU count."""
        expected = max(1, os.cpu_count() or 1)

        assert parse_threads(None) == expected
        assert parse_threads("  ") == expected

    def test_should_clamp_to_one(self):
        """Test that zero and negative caps become a single worker."""
        assert parse_threads("0") == 1
        assert parse_threads("-3") == 1
        assert parse_threads("4") == 4

    def test_should_reject_non_integer(self):
        """Test that a malformed value raises a domain error naming the variable."""
        with pytest.raises(DomainError, match="QWRES_THREADS"):
            parse_threads("four")
