"""The split decomposition of a TD system: summands U_i, projections
F_i, the shape vector, and the two-parameter subspace lattice behind
them.

U_i is computed directly by the intersection formula

    U_i = (E*_0 V + ... + E*_i V)  cap  (E_i V + ... + E_d V),

and the independent characterizations (direct sum with the raising /
lowering action conditions, and the two telescoping sum families) are
then verified as exact cross-checks.  Any violation raises
ConsistencyError: on a verified TD system these are theorems.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import ConsistencyError
from .linalg import Matrix, Subspace, inverse, stack_bases
from .tdcore import TDSystem


@dataclass(frozen=True)
class SplitData:
    phi: TDSystem
    summands: tuple[Subspace, ...]  # U_0 .. U_d
    projections: tuple[Matrix, ...]  # F_0 .. F_d
    shape: tuple[int, ...]  # dim U_0 .. dim U_d


@dataclass(frozen=True)
class VijLattice:
    phi: TDSystem
    entries: dict  # (i, j) -> Subspace for -1 <= i, j <= d+1

    def at(self, i: int, j: int) -> Subspace:
        return self.entries[(i, j)]


def _prefix_dual_sums(phi: TDSystem):
    field, n = phi.field, phi.dimension
    sums = []
    acc = Subspace.zero(field, n)
    for e in phi.dual_eigens:
        acc = acc.add(e.eigenspace)
        sums.append(acc)
    return sums


def _suffix_primary_sums(phi: TDSystem):
    field, n = phi.field, phi.dimension
    sums = [None] * len(phi.eigens)
    acc = Subspace.zero(field, n)
    for i in range(len(phi.eigens) - 1, -1, -1):
        acc = acc.add(phi.eigens[i].eigenspace)
        sums[i] = acc
    return sums


def split_subspaces(phi: TDSystem):
    """The summands U_0..U_d by the intersection formula, with the
    direct-sum, action, and telescoping-sum conditions verified."""
    field, n, d = phi.field, phi.dimension, phi.d
    prefix = _prefix_dual_sums(phi)
    suffix = _suffix_primary_sums(phi)
    summands = tuple(prefix[i].intersect(suffix[i]) for i in range(d + 1))

    if sum(u.dim for u in summands) != n:
        raise ConsistencyError("split summand dimensions do not add up")
    if any(u.is_zero() for u in summands):
        raise ConsistencyError("split summand vanishes")
    from .linalg import rank

    if rank(stack_bases(field, summands, n)) != n:
        raise ConsistencyError("split summands are not independent")

    identity = Matrix.identity(field, n)
    theta, theta_star = phi.theta, phi.theta_star
    for i, u in enumerate(summands):
        raised = u.image_under(phi.a.sub(identity.scale(theta[i])))
        if i < d:
            if not summands[i + 1].contains(raised):
                raise ConsistencyError("raising action condition fails")
        elif not raised.is_zero():
            raise ConsistencyError("top summand is not annihilated")
        lowered = u.image_under(phi.a_star.sub(identity.scale(theta_star[i])))
        if i > 0:
            if not summands[i - 1].contains(lowered):
                raise ConsistencyError("lowering action condition fails")
        elif not lowered.is_zero():
            raise ConsistencyError("bottom summand is not annihilated")

    acc = Subspace.zero(field, n)
    for i in range(d, -1, -1):
        acc = acc.add(summands[i])
        if acc != suffix[i]:
            raise ConsistencyError("suffix telescoping identity fails")
    acc = Subspace.zero(field, n)
    for i in range(d + 1):
        acc = acc.add(summands[i])
        if acc != prefix[i]:
            raise ConsistencyError("prefix telescoping identity fails")
    return summands


def split_projections(phi: TDSystem, summands):
    """Projections F_i onto U_i along the direct sum, built by exact
    change of basis to the concatenated summand basis."""
    field, n = phi.field, phi.dimension
    basis = stack_bases(field, summands, n)  # rows are basis vectors
    columns = basis.transpose()
    columns_inv = inverse(columns)
    projections = []
    offset = 0
    zero, one = field.zero(), field.one()
    for u in summands:
        diag = [one if offset <= k < offset + u.dim else zero for k in range(n)]
        selector = Matrix.diagonal(field, diag)
        projections.append(columns.mul(selector).mul(columns_inv))
        offset += u.dim
    identity = Matrix.identity(field, n)
    total = Matrix.zeros(field, n)
    for f in projections:
        total = total.add(f)
    if total != identity:
        raise ConsistencyError("projections do not sum to the identity")
    for i, fi in enumerate(projections):
        for j, fj in enumerate(projections):
            expected = fi if i == j else Matrix.zeros(field, n)
            if fi.mul(fj) != expected:
                raise ConsistencyError("projection orthogonality fails")
    return tuple(projections)


def shape(phi: TDSystem, summands) -> tuple[int, ...]:
    """Shape vector: common dimensions of E_i V, U_i, E*_i V, with
    symmetry and unimodality asserted."""
    d = phi.d
    rho = tuple(u.dim for u in summands)
    for i in range(d + 1):
        if rho[i] != phi.eigens[i].eigenspace.dim or rho[i] != phi.dual_eigens[i].eigenspace.dim:
            raise ConsistencyError("shape differs between the three space families")
    if any(r < 1 for r in rho):
        raise ConsistencyError("shape entry vanishes")
    for i in range(d + 1):
        if rho[i] != rho[d - i]:
            raise ConsistencyError("shape is not symmetric")
    for i in range(1, d + 1):
        if 2 * i <= d and rho[i - 1] > rho[i]:
            raise ConsistencyError("shape is not unimodal")
    return rho


def build_split(phi: TDSystem) -> SplitData:
    summands = split_subspaces(phi)
    projections = split_projections(phi, summands)
    rho = shape(phi, summands)
    return SplitData(phi=phi, summands=summands, projections=projections, shape=rho)


def vij_lattice(phi: TDSystem) -> VijLattice:
    """All intersections V_ij of dual prefix sums with primary suffix
    sums, for -1 <= i, j <= d+1 with the boundary conventions (prefix
    empty below, full above; suffix full below, empty above).  The
    raising / lowering inclusions and the vanishing below the diagonal
    are verified."""
    field, n, d = phi.field, phi.dimension, phi.d
    prefix = _prefix_dual_sums(phi)
    suffix = _suffix_primary_sums(phi)
    zero_space = Subspace.zero(field, n)
    full_space = Subspace.full(field, n)

    def dual_prefix(i):
        if i < 0:
            return zero_space
        if i > phi.delta:
            return full_space
        return prefix[i]

    def primary_suffix(j):
        if j < 0:
            return full_space
        if j > d:
            return zero_space
        return suffix[j]

    entries = {}
    for i in range(-1, d + 2):
        for j in range(-1, d + 2):
            entries[(i, j)] = dual_prefix(i).intersect(primary_suffix(j))

    lattice = VijLattice(phi=phi, entries=entries)
    identity = Matrix.identity(field, n)
    theta, theta_star = phi.theta, phi.theta_star
    for i in range(d + 1):
        for j in range(d + 1):
            vij = entries[(i, j)]
            if i < j and not vij.is_zero():
                raise ConsistencyError("lattice entry below the diagonal is nonzero")
            raised = vij.image_under(phi.a.sub(identity.scale(theta[j])))
            if not entries[(i + 1, j + 1)].contains(raised):
                raise ConsistencyError("lattice raising inclusion fails")
            lowered = vij.image_under(phi.a_star.sub(identity.scale(theta_star[i])))
            if not entries[(i - 1, j - 1)].contains(lowered):
                raise ConsistencyError("lattice lowering inclusion fails")
    return lattice
