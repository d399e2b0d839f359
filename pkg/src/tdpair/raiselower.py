"""Raising and lowering maps of a split decomposition, their rank
profile, the lattice-path rewriting of words in the two operators, and
the cubic / quantum Serre relation checks for the maps themselves.

The rewriting rule: sandwiched between projections, a word B_1...B_n
over {A, A*} expands as a sum over integer paths (i_0, ..., i_n) from r
to s where applying A either keeps the index or steps it down by one
(contributing the raising map R), and A* either keeps it or steps it up
by one (contributing the lowering map L); staying put contributes the
scalar theta_{i_j} or theta*_{i_j}.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import ConsistencyError, FieldError
from .fields import QuadraticExtension
from .linalg import Matrix
from .split import SplitData

TOKEN_A = "A"
TOKEN_ASTAR = "A*"


@dataclass(frozen=True)
class RaiseLowerData:
    sp: SplitData
    raising: Matrix  # R
    lowering: Matrix  # L
    epsilon: tuple  # epsilon_0 .. epsilon_{d-2}

    @property
    def phi(self):
        return self.sp.phi

    @property
    def field(self):
        return self.sp.phi.field


def build_rl(sp: SplitData) -> RaiseLowerData:
    """R and L with every structural invariant asserted exactly."""
    phi = sp.phi
    field, n, d = phi.field, phi.dimension, phi.d
    theta, theta_star = phi.theta, phi.theta_star
    projections = sp.projections
    summands = sp.summands

    diag_a = Matrix.zeros(field, n)
    diag_astar = Matrix.zeros(field, n)
    for h in range(d + 1):
        diag_a = diag_a.add(projections[h].scale(theta[h]))
        diag_astar = diag_astar.add(projections[h].scale(theta_star[h]))
    raising = phi.a.sub(diag_a)
    lowering = phi.a_star.sub(diag_astar)

    zero = Matrix.zeros(field, n)
    for i, u in enumerate(summands):
        image_r = u.image_under(raising)
        if i < d:
            if not summands[i + 1].contains(image_r):
                raise ConsistencyError("raising map does not raise")
        elif not image_r.is_zero():
            raise ConsistencyError("raising map does not annihilate the top")
        image_l = u.image_under(lowering)
        if i > 0:
            if not summands[i - 1].contains(image_l):
                raise ConsistencyError("lowering map does not lower")
        elif not image_l.is_zero():
            raise ConsistencyError("lowering map does not annihilate the bottom")

    for i in range(d + 1):
        rf = raising.mul(projections[i])
        lf = lowering.mul(projections[i])
        fr_next = projections[i + 1].mul(raising) if i < d else zero
        fl_prev = projections[i - 1].mul(lowering) if i > 0 else zero
        if rf != fr_next or lf != fl_prev:
            raise ConsistencyError("projection intertwining fails")
    if projections[0].mul(raising) != zero or projections[d].mul(lowering) != zero:
        raise ConsistencyError("boundary projection products do not vanish")

    r_powers = [Matrix.identity(field, n)]
    l_powers = [Matrix.identity(field, n)]
    for _ in range(d + 1):
        r_powers.append(r_powers[-1].mul(raising))
        l_powers.append(l_powers[-1].mul(lowering))
    if not r_powers[d + 1].is_zero() or not l_powers[d + 1].is_zero():
        raise ConsistencyError("raising or lowering map is not nilpotent of the right order")
    for i in range(d + 1):
        for j in range(i, d + 1):
            if r_powers[j - i].mul(projections[i]).is_zero():
                raise ConsistencyError("raising power annihilates a projection it should not")
            if l_powers[j - i].mul(projections[j]).is_zero():
                raise ConsistencyError("lowering power annihilates a projection it should not")

    sub, mul = field.sub, field.mul
    epsilon = tuple(
        sub(
            mul(sub(theta[i], theta[i + 2]), sub(theta_star[i + 1], theta_star[i + 2])),
            mul(sub(theta_star[i + 2], theta_star[i]), sub(theta[i + 1], theta[i])),
        )
        for i in range(d - 1)
    )
    return RaiseLowerData(sp=sp, raising=raising, lowering=lowering, epsilon=epsilon)


@dataclass(frozen=True)
class RestrictionFlags:
    injective: bool
    surjective: bool

    @property
    def bijective(self) -> bool:
        return self.injective and self.surjective


def rank_profile(rl: RaiseLowerData):
    """Injectivity/surjectivity of R^(j-i): U_i -> U_j and
    L^(j-i): U_j -> U_i for all 0 <= i <= j <= d, checked against the
    expected trichotomy (injective when the index sum is at most d,
    bijective at d, surjective at least d, with the roles swapped
    for L)."""
    sp = rl.sp
    d = sp.phi.d
    field, n = rl.field, sp.phi.dimension
    summands = sp.summands
    r_powers = [Matrix.identity(field, n)]
    l_powers = [Matrix.identity(field, n)]
    for _ in range(d):
        r_powers.append(r_powers[-1].mul(rl.raising))
        l_powers.append(l_powers[-1].mul(rl.lowering))
    profile = {}
    for i in range(d + 1):
        for j in range(i, d + 1):
            r_rank = summands[i].image_under(r_powers[j - i]).dim
            l_rank = summands[j].image_under(l_powers[j - i]).dim
            r_flags = RestrictionFlags(
                injective=r_rank == summands[i].dim,
                surjective=r_rank == summands[j].dim,
            )
            l_flags = RestrictionFlags(
                injective=l_rank == summands[j].dim,
                surjective=l_rank == summands[i].dim,
            )
            if i + j <= d and not r_flags.injective:
                raise ConsistencyError("raising restriction should be injective")
            if i + j >= d and not r_flags.surjective:
                raise ConsistencyError("raising restriction should be surjective")
            if i + j >= d and not l_flags.injective:
                raise ConsistencyError("lowering restriction should be injective")
            if i + j <= d and not l_flags.surjective:
                raise ConsistencyError("lowering restriction should be surjective")
            profile[(i, j)] = {"raising": r_flags, "lowering": l_flags}
    return profile


class SymbolicCoefficient:
    """Integer combination of monomials in the symbols theta_k and
    theta*_k.  A monomial is a sorted tuple of ("t", k) / ("s", k)
    atoms."""

    __slots__ = ("monomials",)

    def __init__(self, monomials=None):
        self.monomials = dict(monomials or {})

    @classmethod
    def one(cls):
        return cls({(): 1})

    def times_symbol(self, atom) -> "SymbolicCoefficient":
        return SymbolicCoefficient(
            {tuple(sorted(mono + (atom,))): c for mono, c in self.monomials.items()}
        )

    def plus(self, other: "SymbolicCoefficient") -> "SymbolicCoefficient":
        out = dict(self.monomials)
        for mono, c in other.monomials.items():
            total = out.get(mono, 0) + c
            if total:
                out[mono] = total
            else:
                out.pop(mono, None)
        return SymbolicCoefficient(out)

    def is_zero(self) -> bool:
        return not self.monomials

    def __eq__(self, other):
        return isinstance(other, SymbolicCoefficient) and other.monomials == self.monomials

    def __repr__(self):
        return f"SymbolicCoefficient({self.render()})"

    def render(self) -> str:
        if not self.monomials:
            return "0"
        parts = []
        for mono, c in sorted(self.monomials.items()):
            syms = "*".join(
                ("theta" if kind == "t" else "theta*") + f"_{k}" for kind, k in mono
            )
            if not syms:
                parts.append(str(c))
            elif c == 1:
                parts.append(syms)
            else:
                parts.append(f"{c}*{syms}")
        return " + ".join(parts)

    def to_json(self):
        return [
            {
                "coef": c,
                "theta": [k for kind, k in mono if kind == "t"],
                "theta_star": [k for kind, k in mono if kind == "s"],
            }
            for mono, c in sorted(self.monomials.items())
        ]

    def evaluate(self, field, theta, theta_star):
        total = field.zero()
        for mono, c in self.monomials.items():
            term = field.from_int(c)
            for kind, k in mono:
                term = field.mul(term, theta[k] if kind == "t" else theta_star[k])
            total = field.add(total, term)
        return total


@dataclass
class RLExpression:
    """Normal form of a projected operator word: a combination of words
    over {R, L}, attached to the projection with the given index."""

    terms: dict  # word tuple -> coefficient (field payload or SymbolicCoefficient)
    projector_index: int
    symbolic: bool
    field: object | None = None

    def sorted_terms(self):
        return sorted(self.terms.items(), key=lambda kv: (len(kv[0]), kv[0]))

    def is_zero(self) -> bool:
        return not self.terms

    def evaluate(self, raising: Matrix, lowering: Matrix, projection: Matrix,
                 theta=None, theta_star=None) -> Matrix:
        """Instantiate with concrete matrices (and scalars, in symbolic
        mode): sum of coeff * word * projection."""
        field = raising.field
        n = raising.n_rows
        total = Matrix.zeros(field, n)
        for word, coeff in self.terms.items():
            m = Matrix.identity(field, n)
            for letter in word:
                m = m.mul(raising if letter == "R" else lowering)
            if self.symbolic:
                if theta is None or theta_star is None:
                    raise ValueError("symbolic evaluation needs concrete eigenvalue sequences")
                scalar = coeff.evaluate(field, theta, theta_star)
            else:
                scalar = coeff
            total = total.add(m.mul(projection).scale(scalar))
        return total

    def to_json(self):
        terms = []
        for word, coeff in self.sorted_terms():
            rendered = coeff.to_json() if self.symbolic else self.field.format(coeff)
            terms.append({"word": "".join(word) or "1", "coefficient": rendered})
        return {"projector_index": self.projector_index, "symbolic": self.symbolic, "terms": terms}

    def render_text(self) -> str:
        if not self.terms:
            return f"0  (applied to F_{self.projector_index})"
        parts = []
        for word, coeff in self.sorted_terms():
            word_str = "".join(word) or "1"
            if self.symbolic:
                coeff_str = coeff.render()
                parts.append(f"({coeff_str})*{word_str}" if coeff_str != "1" else word_str)
            else:
                coeff_str = self.field.format(coeff)
                parts.append(word_str if coeff_str == "1" else f"({coeff_str})*{word_str}")
        return " + ".join(parts) + f"  (applied to F_{self.projector_index})"


def rewrite_word(word, r_index: int, s_index: int, d: int, theta=None, theta_star=None, field=None) -> RLExpression:
    """Expand F_r B_1...B_n F_s as a combination of {R, L} words by the
    lattice-path sum.  Tokens are "A" / "A*".  With concrete eigenvalue
    sequences the coefficients are field scalars, otherwise symbolic.
    """
    word = tuple(word)
    for token in word:
        if token not in (TOKEN_A, TOKEN_ASTAR):
            raise ValueError(f"bad word token {token!r}")
    if not (0 <= r_index <= d and 0 <= s_index <= d):
        raise ValueError("projection indices out of range")
    numeric = theta is not None
    if numeric:
        if field is None or theta_star is None:
            raise ValueError("numeric mode needs the field and both sequences")
        if len(theta) != d + 1 or len(theta_star) != d + 1:
            raise ValueError("eigenvalue sequences must have length d + 1")
        one = field.one()
    else:
        one = SymbolicCoefficient.one()

    # states: (index, word letters so far) -> coefficient
    states = {(r_index, ()): one}
    for token in word:
        next_states: dict = {}

        def put(key, coeff):
            if key in next_states:
                if numeric:
                    next_states[key] = field.add(next_states[key], coeff)
                else:
                    next_states[key] = next_states[key].plus(coeff)
            else:
                next_states[key] = coeff

        for (idx, letters), coeff in states.items():
            if token == TOKEN_A:
                # stay, contributing theta_idx
                stay = (
                    field.mul(coeff, theta[idx])
                    if numeric
                    else coeff.times_symbol(("t", idx))
                )
                put((idx, letters), stay)
                if idx - 1 >= 0:
                    put((idx - 1, letters + ("R",)), coeff)
            else:
                stay = (
                    field.mul(coeff, theta_star[idx])
                    if numeric
                    else coeff.times_symbol(("s", idx))
                )
                put((idx, letters), stay)
                if idx + 1 <= d:
                    put((idx + 1, letters + ("L",)), coeff)
        states = next_states

    terms = {}
    for (idx, letters), coeff in states.items():
        if idx != s_index:
            continue
        dead = coeff.is_zero() if not numeric else field.is_zero(coeff)
        if not dead:
            terms[letters] = coeff
    return RLExpression(terms=terms, projector_index=s_index, symbolic=not numeric, field=field)


def projected_word_matrix(word, r_index: int, s_index: int, sp: SplitData) -> Matrix:
    """Direct computation of F_r B_1...B_n F_s on a concrete instance."""
    phi = sp.phi
    m = sp.projections[r_index]
    for token in word:
        m = m.mul(phi.a if token == TOKEN_A else phi.a_star)
    return m.mul(sp.projections[s_index])


def check_cubic_vanishing(rl: RaiseLowerData, beta) -> bool:
    """The two mixed cubic identities: with c = beta + 1,

        R^3 L - c R^2 L R + c R L R^2 - L R^3 + c eps_i R^2

    annihilates U_i and the L-counterpart annihilates U_{i+2}, for
    0 <= i <= d - 2.  Vacuously true for d <= 1."""
    field = rl.field
    d = rl.phi.d
    if d <= 1:
        return True
    r, l = rl.raising, rl.lowering
    c = field.add(beta, field.one())
    r2 = r.mul(r)
    r3 = r2.mul(r)
    l2 = l.mul(l)
    l3 = l2.mul(l)
    base_r = (
        r3.mul(l)
        .sub(r2.mul(l).mul(r).scale(c))
        .add(r.mul(l).mul(r2).scale(c))
        .sub(l.mul(r3))
    )
    base_l = (
        r.mul(l3)
        .sub(l.mul(r).mul(l2).scale(c))
        .add(l2.mul(r).mul(l).scale(c))
        .sub(l3.mul(r))
    )
    summands = rl.sp.summands
    for i in range(d - 1):
        eps_term = field.mul(c, rl.epsilon[i])
        op_r = base_r.add(r2.scale(eps_term))
        if any(any(x != field.zero() for x in op_r.apply(v)) for v in summands[i].rows):
            return False
        op_l = base_l.add(l2.scale(eps_term))
        if any(any(x != field.zero() for x in op_l.apply(v)) for v in summands[i + 2].rows):
            return False
    return True


def check_quantum_serre_rl(rl: RaiseLowerData, q, q_field=None) -> bool:
    """Quantum Serre relations for the raising and lowering maps, for a
    system whose eigenvalues have the geometric form theta_i = a + b q^i,
    theta*_i = a* + c* q^(-i) (caller certifies via the recurrence fit;
    q may live in a quadratic extension, its sum with its inverse cannot)."""
    field = rl.field
    if q_field is None:
        q_field = field
    c = q_field.add(q, q_field.inv(q))
    if q_field != field:
        if isinstance(q_field, QuadraticExtension) and q_field.base == field:
            c = q_field.base_part(c)
        else:
            raise FieldError("q does not relate to the instance field")
    r, l = rl.raising, rl.lowering
    s_r = r.mul(r).mul(l).sub(r.mul(l).mul(r).scale(c)).add(l.mul(r).mul(r))
    s_l = l.mul(l).mul(r).sub(l.mul(r).mul(l).scale(c)).add(r.mul(l).mul(l))
    return r.commutator(s_r).is_zero() and l.commutator(s_l).is_zero()
