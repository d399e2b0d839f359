"""The two cubic operator relations, their specializations, and the
generalized-pair test.

Both relations are commutators that are affine-linear in the five
parameters (beta, gamma, gamma*, varrho, varrho*), so solving for
parameters on an arbitrary pair is exact linear algebra over the
entries of four constant commutator matrices per relation.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import ConsistencyError
from .linalg import Matrix, solve_affine_system
from .recurrence import ParameterSet, derive_parameters, fit_closed_form
from .tdcore import TDSystem, is_irreducible

SPECIAL_DOLAN_GRADY = "DolanGrady"
SPECIAL_QUANTUM_SERRE = "QuantumSerre"
SPECIAL_GENERAL = "General"


@dataclass(frozen=True)
class Specialization:
    kind: str
    b: object | None = None
    b_star: object | None = None
    q: object | None = None
    q_field: object | None = None


@dataclass(frozen=True)
class RelationReport:
    params: ParameterSet
    relation_a_holds: bool
    relation_a_star_holds: bool
    specialization: Specialization


def _relation_matrix(a: Matrix, a_star: Matrix, beta, gamma, varrho) -> Matrix:
    field = a.field
    a2 = a.mul(a)
    inner = (
        a2.mul(a_star)
        .sub(a.mul(a_star).mul(a).scale(beta))
        .add(a_star.mul(a2))
        .sub(a.mul(a_star).add(a_star.mul(a)).scale(gamma))
        .sub(a_star.scale(varrho))
    )
    return a.commutator(inner)


def check_tridiagonal_relations(a: Matrix, a_star: Matrix, params: ParameterSet):
    """Evaluate both cubic commutator relations exactly; returns one
    boolean per relation."""
    first = _relation_matrix(a, a_star, params.beta, params.gamma, params.varrho)
    second = _relation_matrix(a_star, a, params.beta, params.gamma_star, params.varrho_star)
    return first.is_zero(), second.is_zero()


def classify_specialization(phi: TDSystem, params: ParameterSet) -> Specialization:
    field = phi.field
    zero = field.zero()
    flat = (
        params.gamma == zero
        and params.gamma_star == zero
        and params.varrho == zero
        and params.varrho_star == zero
    )
    if flat:
        two = field.from_int(2)
        if params.beta == two:
            return Specialization(SPECIAL_QUANTUM_SERRE, q=field.one(), q_field=field)
        if params.beta == field.neg(two):
            return Specialization(SPECIAL_QUANTUM_SERRE, q=field.neg(field.one()), q_field=field)
        fit = fit_closed_form(list(phi.theta), params.beta, field)
        return Specialization(SPECIAL_QUANTUM_SERRE, q=fit.q, q_field=fit.fit_field)
    if (
        params.beta == field.from_int(2)
        and params.gamma == zero
        and params.gamma_star == zero
        and params.varrho != zero
        and params.varrho_star != zero
    ):
        b = field.sqrt(params.varrho)
        b_star = field.sqrt(params.varrho_star)
        if b is not None and b_star is not None:
            return Specialization(SPECIAL_DOLAN_GRADY, b=b, b_star=b_star)
    return Specialization(SPECIAL_GENERAL)


def solve_parameters_and_verify(phi: TDSystem) -> RelationReport:
    """Derive the parameters from the eigenvalue data, assert both
    relations hold (guaranteed on a verified system; failure is an
    internal bug, never swallowed), and classify the specialization."""
    params = derive_parameters(phi)
    ok_a, ok_astar = check_tridiagonal_relations(phi.a, phi.a_star, params)
    if not (ok_a and ok_astar):
        raise ConsistencyError("cubic relations fail with derived parameters")
    return RelationReport(
        params=params,
        relation_a_holds=ok_a,
        relation_a_star_holds=ok_astar,
        specialization=classify_specialization(phi, params),
    )


def parameter_solution_space(a: Matrix, a_star: Matrix):
    """Solve for all (beta, gamma, gamma*, varrho, varrho*) making both
    relations vanish.  Returns (solvable, particular, unique)."""
    field = a.field
    zero = field.zero()

    def pieces(x, y):
        # [x, x^2 y + y x^2] - beta [x, x y x] - gamma [x, x y + y x] - varrho [x, y]
        x2 = x.mul(x)
        m0 = x.commutator(x2.mul(y).add(y.mul(x2)))
        m1 = x.commutator(x.mul(y).mul(x))
        m2 = x.commutator(x.mul(y).add(y.mul(x)))
        m3 = x.commutator(y)
        return m0, m1, m2, m3

    m0, m1, m2, m3 = pieces(a, a_star)
    n0, n1, n2, n3 = pieces(a_star, a)
    rows, rhs = [], []
    n = a.n_rows
    for i in range(n):
        for j in range(n):
            rows.append([m1.entry(i, j), m2.entry(i, j), zero, m3.entry(i, j), zero])
            rhs.append(m0.entry(i, j))
            rows.append([n1.entry(i, j), zero, n2.entry(i, j), zero, n3.entry(i, j)])
            rhs.append(n0.entry(i, j))
    return solve_affine_system(field, rows, rhs)


def is_generalized_td_pair(a: Matrix, a_star: Matrix, *, seed: int = 0):
    """True iff some parameter choice makes both relations hold and the
    pair is irreducible.  Returns (flag, witness ParameterSet or None);
    the witness is the exact particular solution with free parameters
    set to zero.  InconclusiveError propagates from the irreducibility
    test."""
    solvable, particular, unique = parameter_solution_space(a, a_star)
    if not solvable:
        return False, None
    irreducible, _certificate = is_irreducible(a, a_star, seed=seed)
    if not irreducible:
        return False, None
    beta, gamma, gamma_star, varrho, varrho_star = particular
    witness = ParameterSet(
        beta=beta,
        gamma=gamma,
        gamma_star=gamma_star,
        varrho=varrho,
        varrho_star=varrho_star,
        unique=unique,
    )
    return True, witness
