"""decotm: transfer-matrix decoherence of a qubit under piecewise-constant random fields."""

__version__ = "0.1.0"
