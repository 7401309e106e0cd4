"""Quantum-speed-limit toolkit for qubits in finite-temperature bosonic baths."""

__version__ = "0.1.0"
