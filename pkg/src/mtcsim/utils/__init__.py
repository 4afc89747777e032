"""Formatting utilities and artifact writers."""
