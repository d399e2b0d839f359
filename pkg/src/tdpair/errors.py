"""Exception types shared across the package."""


class FieldError(ValueError):
    """Bad field construction, mixed-field arithmetic, or unparsable scalar."""


class ShapeError(ValueError):
    """Dimension mismatch, non-square input, or empty matrix."""


class SingularMatrixError(ValueError):
    """Inversion of a singular matrix was requested."""


class NotSplitError(Exception):
    """A characteristic polynomial does not factor into linear factors
    over the ground field.  `cofactor_degree` is the degree of the
    non-split cofactor."""

    def __init__(self, cofactor_degree, message=None):
        self.cofactor_degree = cofactor_degree
        super().__init__(message or f"characteristic polynomial has a non-split cofactor of degree {cofactor_degree}")


class NotDiagonalizableError(Exception):
    """Eigenvalues all lie in the field, but some eigenspace is smaller
    than its algebraic multiplicity."""

    def __init__(self, eigenvalue, geometric, algebraic):
        self.eigenvalue = eigenvalue
        self.geometric = geometric
        self.algebraic = algebraic
        super().__init__(f"eigenvalue {eigenvalue!r}: geometric multiplicity {geometric} < algebraic {algebraic}")


class InconclusiveError(Exception):
    """An irreducibility test could not settle the question either way.
    Never silently converted into a boolean."""


class ConsistencyError(RuntimeError):
    """An internal invariant that must hold on verified input failed.
    Signals a bug upstream, not a property of the input."""
