"""End-to-end tests for mtcsim."""
