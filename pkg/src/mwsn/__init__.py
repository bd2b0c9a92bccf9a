"""Monogenic wavelet scattering network."""
__version__ = "0.1.0"
