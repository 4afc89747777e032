"""Finite-volume heat conduction: assembly, CG, steady and transient solves."""
