"""Concrete instance generators: the weight-module family built from
the standard raising/lowering/diagonal triple, similarity obfuscation,
geometric-eigenvalue candidates over prime fields, and a deterministic
random scan harness.
"""

from __future__ import annotations

from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
import random

from .errors import NotSplitError
from .fields import GF, QQ
from .linalg import Matrix, inverse
from .poly import char_poly


@dataclass(frozen=True)
class Sl2Spec:
    """Family parameters: module dimension d+1, A = a_scale * h, and
    A* = c_e * e + c_f * f + c_h * h in the standard triple basis."""

    d: int
    a_scale: Fraction = Fraction(1)
    astar_coeffs: tuple = (Fraction(1), Fraction(1), Fraction(0))

    def validate(self):
        if self.d < 0:
            raise ValueError("module diameter must be nonnegative")
        if self.a_scale == 0:
            raise ValueError("the scale of A must be nonzero")
        c_e, c_f, _ = self.astar_coeffs
        if c_e == 0 or c_f == 0:
            raise ValueError("both ladder coefficients must be nonzero")
        return self


def sl2_triple(d: int):
    """Matrices h, e, f of the (d+1)-dimensional irreducible module:
    h v_i = (d - 2i) v_i, f v_i = (i+1) v_{i+1}, e v_i = (d-i+1) v_{i-1}."""
    n = d + 1
    h = Matrix.from_ints(QQ, [[(d - 2 * i) if i == j else 0 for j in range(n)] for i in range(n)])
    e_rows = [[0] * n for _ in range(n)]
    f_rows = [[0] * n for _ in range(n)]
    for i in range(d):
        f_rows[i + 1][i] = i + 1
    for i in range(1, n):
        e_rows[i - 1][i] = d - i + 1
    return h, Matrix.from_ints(QQ, e_rows), Matrix.from_ints(QQ, f_rows)


def sl2_module(spec: Sl2Spec):
    """The pair (a_scale*h, c_e*e + c_f*f + c_h*h).  Raises
    NotSplitError when the second operator's spectrum is irrational
    (eigenvalues are s*(d-2i) with s^2 = c_h^2 + c_e*c_f)."""
    spec.validate()
    h, e, f = sl2_triple(spec.d)
    c_e, c_f, c_h = (Fraction(c) for c in spec.astar_coeffs)
    a = h.scale(Fraction(spec.a_scale))
    a_star = e.scale(c_e).add(f.scale(c_f)).add(h.scale(c_h))
    s_squared = c_h * c_h + c_e * c_f
    if spec.d >= 1 and not QQ.is_square(s_squared):
        cp = char_poly(a_star)
        covered = 1 if spec.d % 2 == 0 else 0
        raise NotSplitError(
            spec.d + 1 - covered,
            f"irrational spectrum: squared scale {s_squared} is not a rational square; "
            f"characteristic polynomial {cp!r}",
        )
    return a, a_star


def conjugate_pair(a: Matrix, a_star: Matrix, p: Matrix):
    """(P A P^-1, P A* P^-1); exercises basis independence downstream."""
    p_inv = inverse(p)
    return p.mul(a).mul(p_inv), p.mul(a_star).mul(p_inv)


def random_unimodular(n: int, rng: random.Random, steps: int = 12) -> Matrix:
    """Random integer matrix with determinant +-1, built from elementary
    row operations (its inverse is integral too)."""
    rows = [[Fraction(1) if i == j else Fraction(0) for j in range(n)] for i in range(n)]
    for _ in range(steps):
        i, j = rng.randrange(n), rng.randrange(n)
        if i == j:
            continue
        c = Fraction(rng.choice((-2, -1, 1, 2)))
        rows[i] = [x + c * y for x, y in zip(rows[i], rows[j])]
    if rng.randrange(2):
        rows.reverse()
    return Matrix(QQ, rows)


def qform_instance(p_prime: int, d: int, q, a, b, a_star, c_star):
    """Candidate pair over GF(p): A diagonal with entries a + b*q^i and
    a tridiagonal second operator with diagonal a* + c*q^(-i) and unit
    off-diagonals.  A candidate generator: verification decides."""
    field = GF(p_prime)
    q = field.from_int(q) if isinstance(q, int) else q
    if field.is_zero(q):
        raise ValueError("q must be nonzero")
    if field.multiplicative_order(q) <= d:
        raise ValueError("q must have multiplicative order exceeding the diameter")
    if field.is_zero(b) or field.is_zero(c_star):
        raise ValueError("the two eigenvalue scales must be nonzero")
    n = d + 1
    theta = [field.add(a, field.mul(b, field.power(q, i))) for i in range(n)]
    theta_star = [field.add(a_star, field.mul(c_star, field.power(q, -i))) for i in range(n)]
    a_mat = Matrix.diagonal(field, theta)
    rows = [[field.zero()] * n for _ in range(n)]
    for i in range(n):
        rows[i][i] = theta_star[i]
        if i + 1 < n:
            rows[i][i + 1] = field.one()
            rows[i + 1][i] = field.one()
    return a_mat, Matrix(field, rows)


MODE_RANDOM = "RandomDiagonalizablePairs"
MODE_QFORM = "QFormInstances"


@dataclass(frozen=True)
class ScanConfig:
    p: int
    n: int
    trials: int
    seed: int
    mode: str = MODE_RANDOM
    q: int | None = None

    def validate(self):
        if self.trials <= 0:
            raise ValueError("trials must be positive")
        if self.n <= 0:
            raise ValueError("matrix size must be positive")
        field = GF(self.p)
        if self.mode not in (MODE_RANDOM, MODE_QFORM):
            raise ValueError(f"unknown scan mode {self.mode!r}")
        if self.mode == MODE_QFORM:
            if self.q is None:
                raise ValueError("geometric mode needs q")
            q = field.from_int(self.q)
            if field.is_zero(q) or field.multiplicative_order(q) <= self.n:
                raise ValueError("q must have multiplicative order exceeding the matrix size")
        return self


def _random_invertible(field, n: int, rng: random.Random) -> Matrix:
    from .linalg import rank

    while True:
        rows = [[rng.randrange(field.p) for _ in range(n)] for _ in range(n)]
        m = Matrix(field, rows)
        if rank(m) == n:
            return m


def _candidate(config: ScanConfig, index: int):
    field = GF(config.p)
    rng = random.Random(f"scan:{config.seed}:{index}")
    n = config.n
    if config.mode == MODE_QFORM:
        q = field.from_int(config.q)
        a = rng.randrange(config.p)
        b = 1 + rng.randrange(config.p - 1)
        a_star = rng.randrange(config.p)
        c_star = 1 + rng.randrange(config.p - 1)
        return qform_instance(config.p, n - 1, q, a, b, a_star, c_star)
    diag = [rng.randrange(config.p) for _ in range(n)]
    a_mat = Matrix.diagonal(field, diag)
    rows = [[field.zero()] * n for _ in range(n)]
    for i in range(n):
        rows[i][i] = rng.randrange(config.p)
        if i + 1 < n:
            rows[i][i + 1] = rng.randrange(config.p)
            rows[i + 1][i] = rng.randrange(config.p)
    tridiag = Matrix(field, rows)
    p_mat = _random_invertible(field, n, rng)
    p_inv = inverse(p_mat)
    return a_mat, p_mat.mul(tridiag).mul(p_inv)


def scan_trial(config: ScanConfig, index: int):
    """One deterministic trial: returns (record_or_None, stage) where
    stage names the deepest pipeline stage reached."""
    from . import jsonio
    from .pipeline import analyze_pair

    a, a_star = _candidate(config, index)
    report, analyses = analyze_pair(a, a_star, seed=config.seed, persist_findings=True)
    if report.is_td_pair:
        return jsonio.scan_record(index, a, a_star, report, analyses), "accepted"
    kind = report.failure_reason.kind
    if kind in ("NotSplit", "NotDiagonalizable"):
        return None, "candidate"
    if 0 in report.ordering_counts:
        return None, "diagonalizable"
    if kind == "Inconclusive":
        return None, "inconclusive"
    return None, "path_ordered"  # Reducible after full ordering discovery


@dataclass(frozen=True)
class ScanResult:
    records: tuple
    summary: dict


def _worker(args):
    config_tuple, index = args
    config = ScanConfig(*config_tuple)
    record, stage = scan_trial(config, index)
    return index, record, stage


def scan(config: ScanConfig, threads: int = 1) -> ScanResult:
    """Run the harness.  Output is deterministic in (p, n, trials, seed,
    mode, q) regardless of thread count: per-trial RNG streams are
    derived from (seed, index) and records are assembled in index order."""
    config.validate()
    counters = {
        "candidates": config.trials,
        "diagonalizable": 0,
        "path_ordered": 0,
        "irreducible": 0,
        "accepted": 0,
        "inconclusive": 0,
    }
    outcomes = []
    if threads > 1:
        config_tuple = (config.p, config.n, config.trials, config.seed, config.mode, config.q)
        with ProcessPoolExecutor(max_workers=threads) as pool:
            jobs = ((config_tuple, i) for i in range(config.trials))
            outcomes = list(pool.map(_worker, jobs, chunksize=64))
    else:
        for i in range(config.trials):
            record, stage = scan_trial(config, i)
            outcomes.append((i, record, stage))
    outcomes.sort(key=lambda item: item[0])
    records = []
    for _index, record, stage in outcomes:
        if stage in ("diagonalizable", "path_ordered", "inconclusive", "accepted"):
            counters["diagonalizable"] += 1
        if stage in ("path_ordered", "inconclusive", "accepted"):
            counters["path_ordered"] += 1
        if stage == "inconclusive":
            counters["inconclusive"] += 1
        if stage == "accepted":
            counters["irreducible"] += 1
            counters["accepted"] += 1
            records.append(record)
    return ScanResult(records=tuple(records), summary=counters)
