"""Three-term recurrence classification of scalar sequences, closed-form
fitting, and derivation of the five relation parameters from a TD
system's eigenvalue data.

A sequence theta_0..theta_d supports four nested recurrence levels:

* recurrent: (theta_{i-2} - theta_{i+1}) / (theta_{i-1} - theta_i) is
  defined and constant for 2 <= i <= d-1,
* beta-recurrent: theta_{i-2} - (beta+1) theta_{i-1}
  + (beta+1) theta_i - theta_{i+1} = 0 on the same range,
* (beta, gamma)-recurrent: theta_{i-1} - beta theta_i + theta_{i+1}
  = gamma for 1 <= i <= d-1,
* (beta, gamma, varrho)-recurrent:
  theta_{i-1}^2 - beta theta_{i-1} theta_i + theta_i^2
  - gamma (theta_{i-1} + theta_i) = varrho for 1 <= i <= d.

Levels whose determining range is empty report the NON_UNIQUE sentinel;
a level that cannot be satisfied at all reports None.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import ConsistencyError, FieldError
from .fields import Field, QuadraticExtension
from .linalg import solve_affine_system

CASE_Q_GENERIC = "QGeneric"
CASE_BETA_TWO = "Beta2"
CASE_BETA_MINUS_TWO = "BetaMinus2"
CASE_CHAR2_BETA_ZERO = "Char2Beta0"


class _NonUnique:
    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return "NonUnique"


NON_UNIQUE = _NonUnique()


@dataclass(frozen=True)
class RawFit:
    """Solvability of the level-four equations as a linear system in
    (beta, gamma, varrho), independent of the distinctness conditions."""

    solvable: bool
    unique: bool
    witness: tuple | None


@dataclass(frozen=True)
class RecurrenceClass:
    is_recurrent: bool
    beta: object  # scalar payload, NON_UNIQUE, or None
    gamma: object
    varrho: object
    witnesses: dict  # level -> inclusive index range checked
    repeats: tuple  # indices i with theta_{i-1} == theta_i
    raw_fit: RawFit | None


def classify_sequence(theta, field: Field) -> RecurrenceClass:
    theta = list(theta)
    if not theta:
        raise ValueError("empty sequence")
    d = len(theta) - 1
    witnesses = {
        "recurrent": (2, d - 1),
        "beta": (2, d - 1),
        "gamma": (1, d - 1),
        "varrho": (1, d),
    }
    repeats = tuple(i for i in range(1, d + 1) if theta[i - 1] == theta[i])

    distinct_ok = all(theta[i - 1] != theta[i] for i in range(2, d))
    ratios = []
    if distinct_ok:
        for i in range(2, d):
            num = field.sub(theta[i - 2], theta[i + 1])
            den = field.sub(theta[i - 1], theta[i])
            ratios.append(field.div(num, den))
    is_recurrent = distinct_ok and all(r == ratios[0] for r in ratios)

    one = field.one()
    if d < 3:
        beta = NON_UNIQUE
    elif is_recurrent:
        beta = field.sub(ratios[0], one)
    else:
        # Solve the beta-recurrence conditions as a linear system in
        # (beta + 1); repeated entries may leave it free or unsatisfiable.
        rows, rhs = [], []
        for i in range(2, d):
            rows.append([field.sub(theta[i - 1], theta[i])])
            rhs.append(field.sub(theta[i - 2], theta[i + 1]))
        solvable, particular, unique = solve_affine_system(field, rows, rhs)
        if not solvable:
            beta = None
        elif unique:
            beta = field.sub(particular[0], one)
        else:
            beta = NON_UNIQUE

    if beta is None:
        gamma = None
    elif beta is NON_UNIQUE or d < 2:
        gamma = NON_UNIQUE
    else:
        values = [
            field.add(field.sub(theta[i - 1], field.mul(beta, theta[i])), theta[i + 1])
            for i in range(1, d)
        ]
        gamma = values[0] if all(v == values[0] for v in values) else None

    if gamma is None:
        varrho = None
    elif gamma is NON_UNIQUE or d < 1:
        varrho = NON_UNIQUE
    else:
        values = []
        for i in range(1, d + 1):
            t0, t1 = theta[i - 1], theta[i]
            v = field.sub(
                field.add(field.mul(t0, t0), field.mul(t1, t1)),
                field.mul(beta, field.mul(t0, t1)),
            )
            v = field.sub(v, field.mul(gamma, field.add(t0, t1)))
            values.append(v)
        varrho = values[0] if all(v == values[0] for v in values) else None

    raw_fit = None
    if d >= 1:
        rows, rhs = [], []
        for i in range(1, d + 1):
            t0, t1 = theta[i - 1], theta[i]
            rows.append(
                [
                    field.neg(field.mul(t0, t1)),
                    field.neg(field.add(t0, t1)),
                    field.neg(one),
                ]
            )
            rhs.append(field.neg(field.add(field.mul(t0, t0), field.mul(t1, t1))))
        solvable, particular, unique = solve_affine_system(field, rows, rhs)
        raw_fit = RawFit(solvable=solvable, unique=unique, witness=particular)

    return RecurrenceClass(
        is_recurrent=is_recurrent,
        beta=beta,
        gamma=gamma,
        varrho=varrho,
        witnesses=witnesses,
        repeats=repeats,
        raw_fit=raw_fit,
    )


def is_beta_recurrent(theta, beta, field: Field) -> bool:
    d = len(theta) - 1
    c = field.add(beta, field.one())
    for i in range(2, d):
        v = field.sub(theta[i - 2], field.mul(c, theta[i - 1]))
        v = field.add(v, field.mul(c, theta[i]))
        v = field.sub(v, theta[i + 1])
        if not field.is_zero(v):
            return False
    return True


def satisfies_level_four(theta, beta, gamma, varrho, field: Field) -> bool:
    """The quadratic recurrence at every index 1 <= i <= d."""
    d = len(theta) - 1
    for i in range(1, d + 1):
        t0, t1 = theta[i - 1], theta[i]
        v = field.sub(
            field.add(field.mul(t0, t0), field.mul(t1, t1)),
            field.mul(beta, field.mul(t0, t1)),
        )
        v = field.sub(v, field.mul(gamma, field.add(t0, t1)))
        if v != varrho:
            return False
    return True


@dataclass(frozen=True)
class ClosedFormFit:
    case: str
    q: object | None  # payload in fit_field for the QGeneric case
    alpha1: object
    alpha2: object
    alpha3: object
    extension_used: bool
    fit_field: Field
    base_field: Field
    beta: object

    def predict(self, i: int):
        f = self.fit_field
        if self.case == CASE_Q_GENERIC:
            term = f.add(
                f.mul(self.alpha2, f.power(self.q, i)),
                f.mul(self.alpha3, f.power(self.q, -i)),
            )
            return f.add(self.alpha1, term)
        if self.case == CASE_BETA_TWO:
            fi = f.from_int(i)
            return f.add(
                self.alpha1,
                f.add(f.mul(self.alpha2, fi), f.mul(self.alpha3, f.mul(fi, fi))),
            )
        if self.case == CASE_BETA_MINUS_TWO:
            sign = f.one() if i % 2 == 0 else f.neg(f.one())
            return f.add(
                self.alpha1,
                f.mul(sign, f.add(self.alpha2, f.mul(self.alpha3, f.from_int(i)))),
            )
        parity = f.one() if i % 4 in (2, 3) else f.zero()
        return f.add(
            self.alpha1,
            f.add(f.mul(self.alpha2, f.from_int(i)), f.mul(self.alpha3, parity)),
        )

    def lift(self, x):
        """Take a base-field payload into the fit field."""
        if self.extension_used:
            return self.fit_field.embed(x)
        return x


def _fit_three_parameter(field, theta, columns):
    """Exact 3-parameter fit against basis columns evaluated at 0..d,
    using the first min(3, d+1) indices and verifying the rest."""
    d = len(theta) - 1
    k = min(3, d + 1)
    # Short sequences pin the unused trailing parameters to zero.
    rows = [[columns[c](i) for c in range(k)] for i in range(k)]
    rhs = theta[:k]
    solvable, particular, _unique = solve_affine_system(field, rows, rhs)
    if not solvable:
        return None
    params = list(particular) + [field.zero()] * (3 - k)
    return params


def fit_closed_form(theta, beta, field: Field) -> ClosedFormFit:
    """Fit one of the four parametric closed forms to a beta-recurrent
    sequence, extending the field quadratically when the geometric ratio
    lives outside it."""
    theta = list(theta)
    d = len(theta) - 1
    if not is_beta_recurrent(theta, beta, field):
        raise ValueError("sequence is not recurrent for this beta")
    char = field.characteristic()
    two = field.from_int(2)
    minus_two = field.neg(two)

    if char == 2:
        if field.is_zero(beta):
            case = CASE_CHAR2_BETA_ZERO
        else:
            raise FieldError(
                "characteristic 2 with nonzero beta admits no supported closed form"
            )
    elif beta == two:
        case = CASE_BETA_TWO
    elif beta == minus_two:
        case = CASE_BETA_MINUS_TWO
    else:
        case = CASE_Q_GENERIC

    if case == CASE_Q_GENERIC:
        disc = field.sub(field.mul(beta, beta), field.from_int(4))
        root = field.sqrt(disc)
        if root is not None:
            work: Field = field
            lift = lambda x: x  # noqa: E731
            extension_used = False
            sqrt_disc = root
        else:
            work = QuadraticExtension(field, disc)
            lift = work.embed
            extension_used = True
            sqrt_disc = work.generator()
        half = work.inv(work.from_int(2))
        beta_w = lift(beta)
        q_candidates = [
            work.mul(work.add(beta_w, sqrt_disc), half),
            work.mul(work.sub(beta_w, sqrt_disc), half),
        ]
        theta_w = [lift(t) for t in theta]
        fits = []
        for q in q_candidates:
            if d == 0:
                params = [theta_w[0], work.zero(), work.zero()]
            elif d == 1:
                alpha2 = work.div(
                    work.sub(theta_w[1], theta_w[0]), work.sub(q, work.one())
                )
                params = [work.sub(theta_w[0], alpha2), alpha2, work.zero()]
            else:
                qi = [work.power(q, i) for i in range(3)]
                qmi = [work.power(q, -i) for i in range(3)]
                rows = [[work.one(), qi[i], qmi[i]] for i in range(3)]
                solvable, particular, _ = solve_affine_system(work, rows, theta_w[:3])
                if not solvable:
                    continue
                params = list(particular)
            fits.append((q, params))
        if not fits:
            raise ConsistencyError("geometric fit failed on a recurrent sequence")

        def preference(item):
            q, params = item
            return (work.is_zero(params[1]), work.sort_key(q))

        q, params = min(fits, key=preference)
        fit = ClosedFormFit(
            case=case,
            q=q,
            alpha1=params[0],
            alpha2=params[1],
            alpha3=params[2],
            extension_used=extension_used,
            fit_field=work,
            base_field=field,
            beta=beta,
        )
        for i, t in enumerate(theta_w):
            if fit.predict(i) != t:
                raise ValueError("sequence does not match its fitted closed form")
        return fit

    if case == CASE_BETA_TWO:
        columns = [
            lambda i: field.one(),
            lambda i: field.from_int(i),
            lambda i: field.mul(field.from_int(i), field.from_int(i)),
        ]
    elif case == CASE_BETA_MINUS_TWO:
        columns = [
            lambda i: field.one(),
            lambda i: field.one() if i % 2 == 0 else field.neg(field.one()),
            lambda i: field.mul(
                field.from_int(i),
                field.one() if i % 2 == 0 else field.neg(field.one()),
            ),
        ]
    else:
        columns = [
            lambda i: field.one(),
            lambda i: field.from_int(i),
            lambda i: field.one() if i % 4 in (2, 3) else field.zero(),
        ]
    params = _fit_three_parameter(field, theta, columns)
    if params is None:
        raise ValueError("sequence does not match its fitted closed form")
    fit = ClosedFormFit(
        case=case,
        q=None,
        alpha1=params[0],
        alpha2=params[1],
        alpha3=params[2],
        extension_used=False,
        fit_field=field,
        base_field=field,
        beta=beta,
    )
    for i, t in enumerate(theta):
        if fit.predict(i) != t:
            raise ValueError("sequence does not match its fitted closed form")
    return fit


def field_constraints_check(fit: ClosedFormFit, d: int, char: int) -> bool:
    """Case-specific admissibility constraints for an eigenvalue
    sequence of diameter d over a field of the given characteristic."""
    if fit.case == CASE_Q_GENERIC:
        work = fit.fit_field
        one = work.one()
        acc = fit.q
        for _ in range(1, d + 1):
            if acc == one:
                return False
            acc = work.mul(acc, fit.q)
        return True
    if fit.case == CASE_BETA_TWO:
        return char == 0 or char > d
    if fit.case == CASE_BETA_MINUS_TWO:
        return char == 0 or 2 * char > d
    return d <= 3


@dataclass(frozen=True)
class ParameterSet:
    beta: object
    gamma: object
    gamma_star: object
    varrho: object
    varrho_star: object
    unique: bool


def derive_parameters(phi) -> ParameterSet:
    """The five relation parameters of a TD system, from its eigenvalue
    sequences.  Unique for diameter at least 3; the canonical
    representative (beta = 0, then the textbook recipe) otherwise."""
    field = phi.field
    theta, theta_star = list(phi.theta), list(phi.theta_star)
    d = phi.d

    def level_two(seq, beta):
        values = [
            field.add(field.sub(seq[i - 1], field.mul(beta, seq[i])), seq[i + 1])
            for i in range(1, len(seq) - 1)
        ]
        if any(v != values[0] for v in values):
            raise ConsistencyError("three-term value is index-dependent on a verified system")
        return values[0]

    def level_four(seq, beta, gamma):
        values = []
        for i in range(1, len(seq)):
            t0, t1 = seq[i - 1], seq[i]
            v = field.sub(
                field.add(field.mul(t0, t0), field.mul(t1, t1)),
                field.mul(beta, field.mul(t0, t1)),
            )
            values.append(field.sub(v, field.mul(gamma, field.add(t0, t1))))
        if any(v != values[0] for v in values):
            raise ConsistencyError("quadratic value is index-dependent on a verified system")
        return values[0]

    if d >= 3:
        primal = classify_sequence(theta, field)
        dual = classify_sequence(theta_star, field)
        if not (primal.is_recurrent and dual.is_recurrent):
            raise ConsistencyError("eigenvalue sequence of a verified system is not recurrent")
        if primal.beta != dual.beta:
            raise ConsistencyError("the two eigenvalue sequences disagree on the common ratio")
        beta = primal.beta
        unique = True
    else:
        beta = field.zero()
        unique = False

    if d >= 2:
        gamma = level_two(theta, beta)
        gamma_star = level_two(theta_star, beta)
    else:
        gamma = field.zero()
        gamma_star = field.zero()
    if d >= 1:
        varrho = level_four(theta, beta, gamma)
        varrho_star = level_four(theta_star, beta, gamma_star)
    else:
        varrho = field.zero()
        varrho_star = field.zero()
    return ParameterSet(
        beta=beta,
        gamma=gamma,
        gamma_star=gamma_star,
        varrho=varrho,
        varrho_star=varrho_star,
        unique=unique,
    )


def fit_geometric_pair(theta, theta_star, field: Field):
    """Detect the paired geometric eigenvalue form theta_i = a + b q^i,
    theta*_i = a* + c* q^(-i) with a common in-field ratio q.  Returns q
    or None; needs diameter >= 2 to pin the ratio."""
    d = len(theta) - 1
    if d < 2 or len(theta_star) != d + 1:
        return None
    diffs = [field.sub(theta[i + 1], theta[i]) for i in range(d)]
    dual_diffs = [field.sub(theta_star[i + 1], theta_star[i]) for i in range(d)]
    if any(field.is_zero(x) for x in diffs + dual_diffs):
        return None
    q = field.div(diffs[1], diffs[0])
    if field.is_zero(q) or field.is_one(q):
        return None
    for i in range(1, d):
        if diffs[i] != field.mul(q, diffs[i - 1]):
            return None
    q_inv = field.inv(q)
    for i in range(1, d):
        if dual_diffs[i] != field.mul(q_inv, dual_diffs[i - 1]):
            return None
    return q
