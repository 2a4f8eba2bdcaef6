"""Configuration module for qwres."""
