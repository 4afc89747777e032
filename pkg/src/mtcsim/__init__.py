"""
mtcsim

Thermal simulation and analysis toolkit for micromachined thermal
converter (MTC) micro-hotplates:
- 3-D finite-volume steady and transient conduction with k(T)
- P-T sweeps, quadratic fit, thermal resistance, sensor calibration
- Thermal time-constant extraction from step responses
"""

__version__ = "0.1.0"
