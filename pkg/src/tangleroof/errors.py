"""Exception types shared across the package."""


class TangleRoofError(Exception):
    """Base class for all package-specific errors."""


class ParseError(TangleRoofError):
    """Malformed input document (non-numeric amplitude, bad schema)."""


class DuplicateTerm(TangleRoofError):
    """Two terms address the same basis bitstring."""


class ShapeError(TangleRoofError):
    """Dimension mismatch (wrong qubit count, inconsistent bitstring lengths)."""


class RankError(TangleRoofError):
    """Density matrix has numerical rank above the supported limit."""


class CollisionError(TangleRoofError):
    """A spin-flipped bitstring collides with the existing support."""


class DegenerateChord(TangleRoofError):
    """No interior chord exists (pure state with a mismatched anchor)."""


class UnknownState(TangleRoofError):
    """Catalog name not recognized."""


class ParamError(TangleRoofError):
    """Invalid parameter set (probabilities negative or not summing to 1)."""


class IncompleteInput(TangleRoofError):
    """A required entry (e.g. a roof value for a triple) is missing."""
