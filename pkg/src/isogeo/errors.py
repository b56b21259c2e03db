"""Exception types raised across the package."""


class IsogeoError(Exception):
    """Base class for all package errors."""


class LightlikePlane(IsogeoError):
    """A plane with vanishing l-coefficient has no unit normal."""


class LineInsideIsotropicSpace(IsogeoError):
    """A contact line lies inside isotropic space and has no unique contact point."""


class DegenerateGrid(IsogeoError):
    """The sampling grid is too small for the requested stencil."""


class NonSpacelike(IsogeoError):
    """The tangent plane is (numerically) lightlike."""


class NonConformal(IsogeoError):
    """The parametrization violates the conformality tolerance."""


class ParseError(IsogeoError):
    """Malformed holomorphic expression.

    Attributes
    ----------
    offset : int
        Byte offset of the offending token in the UTF-8 encoded input.
    expected : str
        Human readable description of what the parser expected.
    """

    def __init__(self, offset, expected, text=""):
        self.offset = offset
        self.expected = expected
        self.text = text
        super().__init__(f"at offset {offset}: expected {expected}")

    def render(self):
        """Two-line caret diagnostic pointing at the error position."""
        prefix = self.text.encode("utf-8")[: self.offset].decode("utf-8", "replace")
        return f"{self.text}\n{' ' * len(prefix)}^ {self}"


class PoleError(IsogeoError, ZeroDivisionError):
    """Evaluation hit a pole (division by zero or log of zero)."""

    def __init__(self, z, message="pole"):
        self.z = complex(z)
        super().__init__(f"{message} at z = {self.z}")


class IntegrabilityError(IsogeoError):
    """A differential form failed the closedness check on the grid."""

    def __init__(self, loop_residual, threshold):
        self.loop_residual = loop_residual
        self.threshold = threshold
        super().__init__(f"loop residual {loop_residual:.3e} exceeds {threshold:.3e}")


class CompatibilityError(IsogeoError):
    """Spinor data violates the compatibility condition."""


class NonFiniteError(IsogeoError, ValueError):
    """A sampled field contains NaN or infinite values."""
