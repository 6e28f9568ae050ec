"""API layer tests."""
