"""Diagonalizability testing, eigenspace decomposition, and primitive
idempotents.

Idempotents are built by the Lagrange product formula

    E_i = prod_{j != i} (A - theta_j I) / (theta_i - theta_j),

so the three identity families (idempotency and orthogonality, sum to
the identity, A E_i = theta_i E_i) hold by construction in exact
arithmetic.  Eigenvalues must lie in the input field; when they do not
we fail with NotSplitError instead of silently extending the field, and
callers may retry over a quadratic extension.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import NotDiagonalizableError, NotSplitError, ShapeError
from .linalg import Matrix, Subspace, kernel
from .poly import char_poly, roots_in_field


@dataclass(frozen=True)
class EigenData:
    """One eigenvalue with its eigenspace and primitive idempotent."""

    eigenvalue: object
    eigenspace: Subspace
    idempotent: Matrix
    algebraic_multiplicity: int


@dataclass(frozen=True)
class SpectralDecomposition:
    operator: Matrix
    eigens: tuple[EigenData, ...]

    @property
    def field(self):
        return self.operator.field

    @property
    def eigenvalues(self):
        return tuple(e.eigenvalue for e in self.eigens)

    def reordered(self, ordering) -> "SpectralDecomposition":
        return SpectralDecomposition(self.operator, tuple(self.eigens[i] for i in ordering))


def diagonalize(a: Matrix) -> SpectralDecomposition:
    """Spectral decomposition of a diagonalizable matrix.

    Raises NotSplitError when the characteristic polynomial has roots
    outside the field and NotDiagonalizableError when it splits but some
    eigenspace is too small.  Eigen data comes back sorted by the
    field's canonical order on eigenvalues.
    """
    if not a.is_square:
        raise ShapeError("diagonalization needs a square matrix")
    field = a.field
    n = a.n_rows
    cp = char_poly(a)
    roots, fully_split = roots_in_field(cp)
    if not fully_split:
        covered = sum(mult for _, mult in roots)
        raise NotSplitError(n - covered)
    identity = Matrix.identity(field, n)
    shifted = [a.sub(identity.scale(theta)) for theta, _ in roots]
    spaces = []
    for (theta, mult), shift in zip(roots, shifted):
        space = kernel(shift)
        if space.dim != mult:
            raise NotDiagonalizableError(theta, space.dim, mult)
        spaces.append(space)
    # Lagrange products, shared via prefix/suffix partial products.
    k = len(roots)
    prefix = [identity]
    for shift in shifted[:-1]:
        prefix.append(prefix[-1].mul(shift))
    suffix = [identity]
    for shift in reversed(shifted[1:]):
        suffix.append(suffix[-1].mul(shift))
    suffix.reverse()
    eigens = []
    for i, (theta, mult) in enumerate(roots):
        denom = field.one()
        for j, (other, _) in enumerate(roots):
            if j != i:
                denom = field.mul(denom, field.sub(theta, other))
        numerator = prefix[i].mul(suffix[i]) if k > 1 else identity
        eigens.append(
            EigenData(
                eigenvalue=theta,
                eigenspace=spaces[i],
                idempotent=numerator.scale(field.inv(denom)),
                algebraic_multiplicity=mult,
            )
        )
    return SpectralDecomposition(a, tuple(eigens))


def verify_idempotent_identities(sd: SpectralDecomposition) -> bool:
    """Exact check of the three identity families: orthogonal
    idempotency, sum to the identity, and the eigenvalue equation."""
    a = sd.operator
    field = a.field
    n = a.n_rows
    total = Matrix.zeros(field, n)
    for e in sd.eigens:
        total = total.add(e.idempotent)
    if total != Matrix.identity(field, n):
        return False
    for i, ei in enumerate(sd.eigens):
        for j, ej in enumerate(sd.eigens):
            prod = ei.idempotent.mul(ej.idempotent)
            expected = ei.idempotent if i == j else Matrix.zeros(field, n)
            if prod != expected:
                return False
    for e in sd.eigens:
        scaled = e.idempotent.scale(e.eigenvalue)
        if a.mul(e.idempotent) != scaled or e.idempotent.mul(a) != scaled:
            return False
    return True
