"""Exception types raised by the alphax package."""


class AlphaxError(Exception):
    """Base class for all alphax errors."""


class EmptyInput(AlphaxError):
    """No balls were supplied."""


class NonFiniteCoordinate(AlphaxError):
    """A ball center contains NaN or infinity."""


class DuplicateCenter(AlphaxError):
    """Two balls share the exact same center (degenerate input)."""


class DegenerateSimplex(AlphaxError):
    """Simplex centers are affinely dependent (collinear/coplanar/coincident)."""

    def __init__(self, message, vertices=None):
        super().__init__(message)
        self.vertices = tuple(vertices) if vertices is not None else None


class MalformedLine(AlphaxError):
    """A text input line could not be parsed."""

    def __init__(self, line_number, message):
        super().__init__(f"line {line_number}: {message}")
        self.line_number = line_number


class MalformedRecord(AlphaxError):
    """A PDB record could not be parsed."""

    def __init__(self, line_number, message):
        super().__init__(f"line {line_number}: {message}")
        self.line_number = line_number


class NonPositiveRadius(AlphaxError):
    """An input radius was zero or negative where a positive one is required."""

    def __init__(self, line_number, value):
        super().__init__(f"line {line_number}: radius must be positive, got {value!r}")
        self.line_number = line_number


class NonFiniteValue(AlphaxError):
    """An input numeric field was NaN or infinite."""

    def __init__(self, line_number, message):
        super().__init__(f"line {line_number}: {message}")
        self.line_number = line_number


class NoAtoms(AlphaxError):
    """A PDB file contained no ATOM/HETATM records."""
