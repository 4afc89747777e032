"""Integration tests for mtcsim."""
