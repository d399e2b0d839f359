"""Tridiagonal-pair verification: ordering discovery, irreducibility
testing, assembly of TD systems, and the eight dihedral relatives.

A pair (A, A*) of diagonalizable transformations is tridiagonal when
each acts block-tridiagonally on some ordering of the other's
eigenspaces and the two share no proper invariant subspace.  Ordering
discovery reduces to recognizing a spanning path in the support graph
whose edges mark nonvanishing blocks E_i A* E_j; irreducibility is
certified by algebra-closure (Burnside), by a nullity-one kernel-spin
test, or by exhaustive subspace search over small prime fields.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, replace

from .errors import (
    ConsistencyError,
    FieldError,
    InconclusiveError,
    NotDiagonalizableError,
    NotSplitError,
    ShapeError,
)
from .fields import PrimeField
from .linalg import Matrix, Subspace
from .spectra import EigenData, SpectralDecomposition, diagonalize

NORTON_WORD_DEGREE_CAP = 6
NORTON_TRIALS = 64

CERT_BURNSIDE = "BurnsideFullAlgebra"
CERT_NORTON = "NortonTest"
CERT_EXHAUSTIVE = "ExhaustiveInvariantSubspaceSearch"


@dataclass(frozen=True)
class FailureReason:
    kind: str  # NotDiagonalizable | NotSplit | NoTridiagonalOrdering | Reducible | Inconclusive
    operator: str | None = None  # "A" or "A*"
    detail: str | None = None

    def to_json(self):
        doc = {"kind": self.kind}
        if self.operator is not None:
            doc["operator"] = self.operator
        if self.detail is not None:
            doc["detail"] = self.detail
        return doc


@dataclass(frozen=True)
class TDSystem:
    """A TD pair together with chosen orderings of both idempotent
    families."""

    a: Matrix
    a_star: Matrix
    eigens: tuple[EigenData, ...]
    dual_eigens: tuple[EigenData, ...]

    @property
    def field(self):
        return self.a.field

    @property
    def dimension(self) -> int:
        return self.a.n_rows

    @property
    def d(self) -> int:
        return len(self.eigens) - 1

    @property
    def delta(self) -> int:
        return len(self.dual_eigens) - 1

    @property
    def theta(self):
        return tuple(e.eigenvalue for e in self.eigens)

    @property
    def theta_star(self):
        return tuple(e.eigenvalue for e in self.dual_eigens)

    def idempotents(self):
        return tuple(e.idempotent for e in self.eigens)

    def dual_idempotents(self):
        return tuple(e.idempotent for e in self.dual_eigens)

    def validate(self, support_primary=None, support_dual=None):
        """Assert every structural invariant of a TD system; raises
        ConsistencyError on violation (these cannot fail on output of
        verify_td_pair unless there is a bug upstream).

        The optional support grids are boolean matrices, aligned to this
        system's orderings, marking nonzero blocks E_i A* E_j (primary)
        and E*_i A E*_j (dual); when absent they are recomputed from the
        idempotents."""
        field = self.field
        n = self.dimension
        if self.d != self.delta:
            raise ConsistencyError("diameter and dual diameter differ")
        for seq in (self.theta, self.theta_star):
            if len(set(seq)) != len(seq):
                raise ConsistencyError("eigenvalues are not mutually distinct")
        zero = Matrix.zeros(field, n)
        for ops, other, grid in (
            (self.idempotents(), self.a_star, support_primary),
            (self.dual_idempotents(), self.a, support_dual),
        ):
            m = len(ops)
            if grid is None:
                blocks = _support_blocks(ops, other)
                grid = [[blocks[i][j] != zero for j in range(m)] for i in range(m)]
            for i in range(m):
                for j in range(m):
                    if abs(i - j) > 1 and grid[i][j]:
                        raise ConsistencyError("block-tridiagonal condition violated")
                    if abs(i - j) == 1 and not grid[i][j]:
                        raise ConsistencyError("adjacent block vanishes")
        # Three-interval containments on eigenspace images.
        for eigs, op in (
            (self.eigens, self.a_star),
            (self.dual_eigens, self.a),
        ):
            m = len(eigs)
            for i in range(m):
                window = Subspace.zero(field, n)
                for k in (i - 1, i, i + 1):
                    if 0 <= k < m:
                        window = window.add(eigs[k].eigenspace)
                if not window.contains(eigs[i].eigenspace.image_under(op)):
                    raise ConsistencyError("eigenspace image escapes the three-interval window")
        return self


@dataclass(frozen=True)
class VerificationReport:
    is_td_pair: bool
    failure_reason: FailureReason | None
    orderings: tuple[TDSystem, ...]
    irreducibility_certificate: str | None
    ordering_counts: tuple = (0, 0)  # orderings found for (A, A*)


def _support_blocks(idempotents, middle: Matrix):
    left = [e.mul(middle) for e in idempotents]
    return [[l.mul(e) for e in idempotents] for l in left]


def support_grid(sd: SpectralDecomposition, other: Matrix):
    """Boolean grid marking the nonzero blocks E_i * other * E_j."""
    idems = [e.idempotent for e in sd.eigens]
    blocks = _support_blocks(idems, other)
    zero = Matrix.zeros(other.field, other.n_rows)
    m = len(idems)
    return [[blocks[i][j] != zero for j in range(m)] for i in range(m)]


def find_tridiagonal_orderings(sd: SpectralDecomposition, other: Matrix, grid=None):
    """Orderings of sd's eigenspaces on which `other` acts
    block-tridiagonally.

    Builds the support graph with an edge {i, j} (i != j) whenever
    E_i * other * E_j is nonzero.  Valid orderings exist iff the graph
    is a simple path through all vertices; the path read in both
    directions gives the orderings (one trivial ordering when there is
    a single eigenspace).  Returns a list of index tuples.
    """
    m = len(sd.eigens)
    if m == 1:
        return [(0,)]
    if grid is None:
        grid = support_grid(sd, other)
    adjacency = [set() for _ in range(m)]
    edges = 0
    for i in range(m):
        for j in range(i + 1, m):
            if grid[i][j] or grid[j][i]:
                adjacency[i].add(j)
                adjacency[j].add(i)
                edges += 1
    if edges != m - 1 or any(len(nbrs) > 2 for nbrs in adjacency):
        return []
    endpoints = [i for i in range(m) if len(adjacency[i]) == 1]
    if len(endpoints) != 2:
        return []
    path = [endpoints[0]]
    seen = {endpoints[0]}
    while len(path) < m:
        nxt = [v for v in adjacency[path[-1]] if v not in seen]
        if len(nxt) != 1:
            return []
        path.append(nxt[0])
        seen.add(nxt[0])
    first, second = tuple(path), tuple(reversed(path))
    key = sd.field.sort_key
    if key(sd.eigens[second[0]].eigenvalue) < key(sd.eigens[first[0]].eigenvalue):
        first, second = second, first
    return [first, second]


def _spin(vectors, operators, n, field) -> Subspace:
    """Smallest subspace containing `vectors` invariant under all
    `operators`."""
    space = Subspace.from_vectors(field, n, vectors)
    frontier = list(space.rows)
    while frontier:
        new_frontier = []
        for v in frontier:
            for op in operators:
                w = op.apply(v)
                if not space.contains_vector(w):
                    space = space.add(Subspace.from_vectors(field, n, [w]))
                    new_frontier.append(w)
        frontier = new_frontier
    return space


def _algebra_dimension(a: Matrix, a_star: Matrix, cap: int):
    """Dimension of the unital algebra generated by a and a_star,
    computed by spanning-set closure over left multiplication."""
    field = a.field
    n = a.n_rows
    basis_rows: list[list] = []
    pivots: list[int] = []
    elements: list[Matrix] = []

    def reduce_and_add(m: Matrix) -> bool:
        v = [x for row in m.rows for x in row]
        zero = field.zero()
        for row, piv in zip(basis_rows, pivots):
            c = v[piv]
            if c != zero:
                for j in range(piv, len(v)):
                    if row[j] != zero:
                        v[j] = field.sub(v[j], field.mul(c, row[j]))
        lead = next((j for j, x in enumerate(v) if x != zero), None)
        if lead is None:
            return False
        inv = field.inv(v[lead])
        v = [field.mul(inv, x) for x in v]
        basis_rows.append(v)
        pivots.append(lead)
        elements.append(m)
        return True

    reduce_and_add(Matrix.identity(field, n))
    frontier = []
    for gen in (a, a_star):
        if reduce_and_add(gen):
            frontier.append(gen)
    while frontier and len(basis_rows) < cap:
        next_frontier = []
        for m in frontier:
            for gen in (a, a_star):
                prod = gen.mul(m)
                if reduce_and_add(prod):
                    next_frontier.append(prod)
                    if len(basis_rows) >= cap:
                        break
            if len(basis_rows) >= cap:
                break
        frontier = next_frontier
    return len(basis_rows), elements


def _all_subspaces_invariant_check(a: Matrix, a_star: Matrix):
    """Exhaustive invariant-subspace search over a small prime field.
    Returns a proper invariant subspace or None."""
    field: PrimeField = a.field
    n = a.n_rows
    p = field.p
    from itertools import combinations, product

    for k in range(1, n):
        for pivot_cols in combinations(range(n), k):
            free_positions = []
            for r, pc in enumerate(pivot_cols):
                for c in range(pc + 1, n):
                    if c not in pivot_cols:
                        free_positions.append((r, c))
            for values in product(range(p), repeat=len(free_positions)):
                rows = [[0] * n for _ in range(k)]
                for r, pc in enumerate(pivot_cols):
                    rows[r][pc] = 1
                for (r, c), v in zip(free_positions, values):
                    rows[r][c] = v
                space = Subspace(field, n, rows)
                im_a = space.image_under(a)
                if not space.contains(im_a):
                    continue
                im_b = space.image_under(a_star)
                if space.contains(im_b):
                    return space
    return None


def is_irreducible(a: Matrix, a_star: Matrix, *, word_degree_cap: int = NORTON_WORD_DEGREE_CAP, trials: int = NORTON_TRIALS, seed: int = 0):
    """Decide whether the only common invariant subspaces of (a, a_star)
    are 0 and the full space.

    Strategy: (1) Burnside algebra closure, (2) kernel-spin testing from
    singular algebra elements with a nullity-one two-sided certificate,
    (3) exhaustive subspace search for n <= 4 over a prime field.
    Raises InconclusiveError when none of these settles the question.
    Returns (flag, certificate); on a negative answer the certificate
    is a proper invariant subspace.
    """
    if not a.is_square or not a_star.is_square or a.n_rows != a_star.n_rows:
        raise ShapeError("the two operators must be square and equally sized")
    if a.field != a_star.field:
        raise FieldError("operands live in different fields")
    field = a.field
    n = a.n_rows
    if n == 1:
        return True, CERT_BURNSIDE

    dim, algebra_elements = _algebra_dimension(a, a_star, cap=n * n)
    if dim == n * n:
        return True, CERT_BURNSIDE

    a_t, a_star_t = a.transpose(), a_star.transpose()
    ops = (a, a_star)
    ops_t = (a_t, a_star_t)

    def proper_from_transpose(space_t: Subspace) -> Subspace:
        # The annihilator of a transpose-invariant subspace is invariant
        # for the original pair.
        from .linalg import kernel as _kernel

        return _kernel(space_t.basis_matrix())

    seeds: list[Matrix] = []
    from .poly import char_poly, roots_in_field

    for op in (a, a_star):
        cp = char_poly(op)
        roots, _ = roots_in_field(cp)
        for theta, _mult in roots:
            seeds.append(op.sub(Matrix.identity(field, n).scale(theta)))
    rng = random.Random(f"norton:{seed}")
    for _ in range(trials):
        word_len = rng.randrange(2, word_degree_cap + 1)
        m = Matrix.identity(field, n)
        for _ in range(word_len):
            m = m.mul(a if rng.randrange(2) == 0 else a_star)
        seeds.append(m)
    for z in algebra_elements:
        seeds.append(z)

    from .linalg import kernel as _kernel

    for z in seeds:
        ker = _kernel(z)
        if ker.dim == 0 or ker.dim == n:
            continue
        spins_full = True
        for v in ker.rows:
            span = _spin([v], ops, n, field)
            if span.dim < n:
                return False, span
            spins_full = spins_full and span.is_full()
        if ker.dim == 1 and spins_full:
            ker_t = _kernel(z.transpose())
            if ker_t.dim == 1:
                span_t = _spin([ker_t.rows[0]], ops_t, n, field)
                if span_t.is_full():
                    return True, CERT_NORTON
                return False, proper_from_transpose(span_t)

    if isinstance(field, PrimeField) and n <= 4 and field.p <= 13:
        witness = _all_subspaces_invariant_check(a, a_star)
        if witness is None:
            return True, CERT_EXHAUSTIVE
        return False, witness

    raise InconclusiveError("irreducibility could not be decided")


def verify_td_pair(a: Matrix, a_star: Matrix, *, seed: int = 0) -> VerificationReport:
    """Full verification pipeline.  Returns a report carrying every
    valid TD system (ordering choices for each operator) on success, or
    the first failure reason otherwise."""
    if not a.is_square or not a_star.is_square:
        raise ShapeError("operators must be square")
    if a.n_rows != a_star.n_rows:
        raise ShapeError("operators must act on the same space")
    if a.field != a_star.field:
        raise FieldError("operators live in different fields")

    counts = [0, 0]

    def failure(kind, operator=None, detail=None):
        return VerificationReport(
            False, FailureReason(kind, operator, detail), (), None, tuple(counts)
        )

    try:
        sd_a = diagonalize(a)
    except NotSplitError as exc:
        return failure("NotSplit", "A", f"non-split cofactor degree {exc.cofactor_degree}")
    except NotDiagonalizableError as exc:
        return failure("NotDiagonalizable", "A", str(exc))
    try:
        sd_astar = diagonalize(a_star)
    except NotSplitError as exc:
        return failure("NotSplit", "A*", f"non-split cofactor degree {exc.cofactor_degree}")
    except NotDiagonalizableError as exc:
        return failure("NotDiagonalizable", "A*", str(exc))

    grid_a = support_grid(sd_a, a_star)
    grid_astar = support_grid(sd_astar, a)
    orderings_a = find_tridiagonal_orderings(sd_a, a_star, grid_a)
    orderings_astar = find_tridiagonal_orderings(sd_astar, a, grid_astar)
    counts = [len(orderings_a), len(orderings_astar)]
    if not orderings_a or not orderings_astar:
        # Reducibility is the more fundamental failure; report it when it
        # explains the missing ordering (a commuting pair, for instance).
        which = "A" if not orderings_a else "A*"
        try:
            irreducible, certificate = is_irreducible(a, a_star, seed=seed)
        except InconclusiveError:
            return failure("NoTridiagonalOrdering", which)
        if not irreducible:
            detail = (
                f"invariant subspace of dimension {certificate.dim}"
                if isinstance(certificate, Subspace)
                else None
            )
            return failure("Reducible", None, detail)
        return failure("NoTridiagonalOrdering", which)

    try:
        irreducible, certificate = is_irreducible(a, a_star, seed=seed)
    except InconclusiveError:
        return failure("Inconclusive", None, "irreducibility undecided over this field")
    if not irreducible:
        detail = f"invariant subspace of dimension {certificate.dim}" if isinstance(certificate, Subspace) else None
        return failure("Reducible", None, detail)

    if len(sd_a.eigens) != len(sd_astar.eigens):
        raise ConsistencyError("diameter and dual diameter differ on an accepted pair")

    systems = []
    for ord_a in orderings_a:
        for ord_b in orderings_astar:
            system = TDSystem(
                a=a,
                a_star=a_star,
                eigens=tuple(sd_a.eigens[i] for i in ord_a),
                dual_eigens=tuple(sd_astar.eigens[i] for i in ord_b),
            )
            support_primary = [[grid_a[x][y] for y in ord_a] for x in ord_a]
            support_dual = [[grid_astar[x][y] for y in ord_b] for x in ord_b]
            systems.append(system.validate(support_primary, support_dual))
    return VerificationReport(True, None, tuple(systems), certificate, tuple(counts))


def relatives(phi: TDSystem) -> dict:
    """The eight dihedral relatives.  Key syntax: "down" reverses the
    dual idempotent order, "ddown" reverses the primary order, a "star"
    suffix exchanges the roles of the two operators afterwards."""
    grid_primary = support_grid(
        SpectralDecomposition(phi.a, phi.eigens), phi.a_star
    )
    grid_dual = support_grid(
        SpectralDecomposition(phi.a_star, phi.dual_eigens), phi.a
    )

    def flip(grid):
        return [list(reversed(row)) for row in reversed(grid)]

    def down(item):
        s, gp, gd = item
        return replace(s, dual_eigens=tuple(reversed(s.dual_eigens))), gp, flip(gd)

    def ddown(item):
        s, gp, gd = item
        return replace(s, eigens=tuple(reversed(s.eigens))), flip(gp), gd

    def star(item):
        s, gp, gd = item
        swapped = TDSystem(a=s.a_star, a_star=s.a, eigens=s.dual_eigens, dual_eigens=s.eigens)
        return swapped, gd, gp

    base = (phi, grid_primary, grid_dual)
    table = {
        "id": base,
        "down": down(base),
        "ddown": ddown(base),
        "down_ddown": down(ddown(base)),
        "star": star(base),
        "down_star": star(down(base)),
        "ddown_star": star(ddown(base)),
        "down_ddown_star": star(down(ddown(base))),
    }
    out = {}
    for key, (system, gp, gd) in table.items():
        system.validate(gp, gd)
        out[key] = system
    return out


def affine_transform(phi: TDSystem, alpha, beta_shift, alpha_star, beta_star_shift) -> TDSystem:
    """Replace A by alpha*A + beta*I and A* by alpha*.A* + beta*.I;
    idempotents are unchanged and eigenvalues move affinely."""
    field = phi.field
    if field.is_zero(alpha) or field.is_zero(alpha_star):
        raise ValueError("affine scale factors must be nonzero")
    n = phi.dimension
    identity = Matrix.identity(field, n)

    def shift_op(m, scale, shift):
        return m.scale(scale).add(identity.scale(shift))

    def shift_eigens(eigens, scale, shift):
        return tuple(
            EigenData(
                eigenvalue=field.add(field.mul(scale, e.eigenvalue), shift),
                eigenspace=e.eigenspace,
                idempotent=e.idempotent,
                algebraic_multiplicity=e.algebraic_multiplicity,
            )
            for e in eigens
        )

    return TDSystem(
        a=shift_op(phi.a, alpha, beta_shift),
        a_star=shift_op(phi.a_star, alpha_star, beta_star_shift),
        eigens=shift_eigens(phi.eigens, alpha, beta_shift),
        dual_eigens=shift_eigens(phi.dual_eigens, alpha_star, beta_star_shift),
    ).validate()
