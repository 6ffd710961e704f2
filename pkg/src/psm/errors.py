"""Exception types shared across the toolkit."""


class PsmError(Exception):
    """Base class for all toolkit errors."""


class ParameterError(PsmError, ValueError):
    """Invalid lattice/material parameters or strain out of range."""


class SpecError(PsmError, ValueError):
    """Muscle spec fails schema or geometric validation."""


class GenerationError(PsmError, RuntimeError):
    """Mesh generation failed (blocked lumen, escaping tube, empty lattice...)."""


class MeshError(PsmError, RuntimeError):
    """Mesh file unreadable or structurally corrupt."""


class SolverError(PsmError, RuntimeError):
    """Equilibrium solve did not converge; carries the best iterate."""

    def __init__(self, message, state=None):
        super().__init__(message)
        self.state = state
