"""Test suite for mtcsim."""
