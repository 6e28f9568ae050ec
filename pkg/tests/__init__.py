"""Test suite for dmpfem."""
