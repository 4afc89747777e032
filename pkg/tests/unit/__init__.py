"""Unit tests for mtcsim."""
