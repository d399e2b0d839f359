"""Checkers for the three open questions about TD systems: the binomial
bound on the shape vector, the even-alternating spanning set, and the
factorization of the shape polynomial into truncated geometric series.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass

from .errors import ConsistencyError
from .linalg import Matrix, Subspace
from .raiselower import RaiseLowerData
from .split import SplitData
from .tdcore import TDSystem


@dataclass(frozen=True)
class ConjectureReport:
    rho_bound_holds: bool
    spanning_holds: bool | None  # None when per-vector outcomes disagree
    spanning_outcomes: tuple  # ((label, bool), ...)
    factorization: tuple | None
    counterexample_detail: dict | None


def check_rho_bound(rho) -> bool:
    """Shape entries bounded by the binomial coefficients of the diameter."""
    d = len(rho) - 1
    return all(rho[i] <= math.comb(d, i) for i in range(d + 1))


def spanning_words(d: int):
    """Even-length alternating words, encoded as ((letter, power), ...)
    in display order (rightmost factor applies first): one word per
    even-size subset i_1 < ... < i_n of {0..d}, with letters
    L, R, L, R, ... ending in R."""
    from itertools import combinations

    words = []
    for size in range(0, d + 2, 2):
        for subset in combinations(range(d + 1), size):
            word = tuple(
                ("L" if k % 2 == 0 else "R", exponent)
                for k, exponent in enumerate(subset)
            )
            words.append(word)
    return words


def render_word(word) -> str:
    parts = []
    for letter, power in word:
        if power == 0:
            continue
        parts.append(letter if power == 1 else f"{letter}^{power}")
    return "".join(parts) or "1"


def _apply_word(word, vector, r_powers, l_powers):
    v = vector
    for letter, power in reversed(word):
        mat = r_powers[power] if letter == "R" else l_powers[power]
        v = mat.apply(v)
    return v


def check_spanning(phi: TDSystem, sp: SplitData, rl: RaiseLowerData, *, rng_seed: int = 0, random_combos: int = 16):
    """Spanning test for word vectors seeded from the bottom summand.

    Every basis vector of U_0 is tested; when dim U_0 > 1 a further
    batch of seeded pseudo-random nonzero combinations is tested, since
    linearity does not reduce the universal quantifier to a basis.
    Returns (outcomes, aggregate, words); the aggregate is None when
    outcomes disagree.
    """
    field, n, d = phi.field, phi.dimension, phi.d
    u0 = sp.summands[0]
    words = spanning_words(d)
    r_powers = [Matrix.identity(field, n)]
    l_powers = [Matrix.identity(field, n)]
    for _ in range(d):
        r_powers.append(r_powers[-1].mul(rl.raising))
        l_powers.append(l_powers[-1].mul(rl.lowering))

    seeds = [(f"basis_{k}", v) for k, v in enumerate(u0.rows)]
    if u0.dim > 1:
        rng = random.Random(f"spanning:{rng_seed}:{d}:{n}")
        made = 0
        while made < random_combos:
            if field.characteristic() == 0:
                coeffs = [field.from_int(rng.randrange(-3, 4)) for _ in range(u0.dim)]
            else:
                coeffs = [field.from_int(rng.randrange(field.characteristic())) for _ in range(u0.dim)]
            vec = [field.zero()] * n
            for c, row in zip(coeffs, u0.rows):
                if field.is_zero(c):
                    continue
                vec = [field.add(x, field.mul(c, y)) for x, y in zip(vec, row)]
            if all(field.is_zero(x) for x in vec):
                continue
            seeds.append((f"random_{made}", tuple(vec)))
            made += 1

    outcomes = []
    for label, seed_vec in seeds:
        vectors = [_apply_word(w, seed_vec, r_powers, l_powers) for w in words]
        spans = Subspace.from_vectors(field, n, vectors).is_full()
        outcomes.append((label, spans))
    values = {flag for _, flag in outcomes}
    aggregate = values.pop() if len(values) == 1 else None
    return tuple(outcomes), aggregate, words


def _partitions_descending(total: int, cap: int | None = None):
    if total == 0:
        yield ()
        return
    cap = total if cap is None else min(cap, total)
    for first in range(cap, 0, -1):
        for rest in _partitions_descending(total - first, first):
            yield (first,) + rest


def check_factorization(rho):
    """Search all partitions of the diameter for one whose product of
    truncated geometric polynomials has coefficient vector rho; returns
    the lexicographically greatest sorted partition, or None."""
    rho = tuple(rho)
    d = len(rho) - 1
    for partition in _partitions_descending(d):
        coeffs = [1]
        for part in partition:
            block = [1] * (part + 1)
            out = [0] * (len(coeffs) + part)
            for i, c in enumerate(coeffs):
                for j, b in enumerate(block):
                    out[i + j] += c * b
            coeffs = out
        if tuple(coeffs) == rho:
            return partition
    return None


def run_conjectures(phi: TDSystem, sp: SplitData, rl: RaiseLowerData, *, rng_seed: int = 0) -> ConjectureReport:
    """All three checks plus the implication cross-checks (a successful
    factorization or spanning outcome forces the binomial bound)."""
    rho = sp.shape
    bound_ok = check_rho_bound(rho)
    outcomes, aggregate, words = check_spanning(phi, sp, rl, rng_seed=rng_seed)
    factorization = check_factorization(rho)
    if factorization is not None and not bound_ok:
        raise ConsistencyError("factorization succeeded but the binomial bound failed")
    if aggregate is True and not bound_ok:
        raise ConsistencyError("spanning succeeded but the binomial bound failed")
    detail = None
    if aggregate is not True or not bound_ok or factorization is None:
        detail = {
            "shape": list(rho),
            "spanning_outcomes": [[label, flag] for label, flag in outcomes],
            "spanning_words": [render_word(w) for w in words],
        }
    return ConjectureReport(
        rho_bound_holds=bound_ok,
        spanning_holds=aggregate,
        spanning_outcomes=outcomes,
        factorization=factorization,
        counterexample_detail=detail,
    )
