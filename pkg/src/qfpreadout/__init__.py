"""Dispersive readout of flux qubits through quantum flux parametrons."""

__version__ = "0.1.0"
