"""Shared exception types."""


class CapExceeded(RuntimeError):
    """A configured desk-scale cap (degree or rank) was exceeded."""


class SearchExhausted(RuntimeError):
    """A bounded search ended without finding a witness (not a disproof)."""
