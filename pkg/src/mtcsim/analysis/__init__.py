"""Figures of merit: sweeps, fits, calibration, time constants and run records."""
