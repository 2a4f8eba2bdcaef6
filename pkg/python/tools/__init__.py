"""Shared helpers: logging, errors, formatting."""
