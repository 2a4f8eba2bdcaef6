"""Acceptance checks against closed forms, oracles and direct simulation."""

from verify.suite import SUITES, run_suite

__all__ = ["SUITES", "run_suite"]
