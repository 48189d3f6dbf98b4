"""Exceptions shared across the package."""


class DataError(Exception):
    """Malformed or inconsistent input data (files, annotations, beat counts)."""
