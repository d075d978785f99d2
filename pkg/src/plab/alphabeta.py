"""Exact normalized sumset ratios and their fractional-power bounds.

For an instance (A, B_1..B_k, l) the table alpha_I = |A+B_I| / |A| is an
exact rational for every index subset I.  The derived bound

    beta_J = (prod of alpha_L over L subset of J, |L| = l) ** (1 / C(|J|-1, l-1))

is irrational in general, so it is kept as an exact (base, root) pair and
every order decision is made by raising to the integer root and
cross-multiplying big integers; floats appear only as display values.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations

from .errors import UsageError
from .groups import Instance, sumset

MAX_K = 8

LT, EQ, GT = -1, 0, 1


@dataclass(frozen=True)
class AlphaTable:
    """Exact |A+B_I| and alpha_I = |A+B_I|/m for every I subset of {1..k}."""

    k: int
    m: int
    sizes: dict[frozenset[int], int]
    alphas: dict[frozenset[int], Fraction]

    def complement(self, i: int) -> frozenset[int]:
        """The index set {1..k} minus {i}."""
        return frozenset(j for j in range(1, self.k + 1) if j != i)


@dataclass(frozen=True)
class BetaValue:
    """Exact root bound base ** (expo_num / expo_den), plus a float display."""

    base: Fraction
    expo_num: int
    expo_den: int
    approx: float

    def __repr__(self) -> str:
        if self.expo_den == 1:
            return f"BetaValue({self.base})"
        return f"BetaValue({self.base}^(1/{self.expo_den}) approx {self.approx:.12g})"


def alpha_table(inst: Instance) -> AlphaTable:
    """All 2^k sumset sizes, each A+B_I built from A+B_(I minus its smallest
    index) with one extra sumset."""
    k = inst.k
    if k > MAX_K:
        raise UsageError(f"alpha tables are capped at k <= {MAX_K}, got k={k}")
    m = len(inst.a)
    sets = {frozenset(): inst.a}
    sizes = {frozenset(): m}
    alphas = {frozenset(): Fraction(1)}
    indices = list(range(1, k + 1))
    for size in range(1, k + 1):
        for combo in combinations(indices, size):
            key = frozenset(combo)
            prev = key - {combo[0]}
            cur = sumset(sets[prev], inst.bs[combo[0] - 1])
            sets[key] = cur
            sizes[key] = len(cur)
            alphas[key] = Fraction(len(cur), m)
    return AlphaTable(k=k, m=m, sizes=sizes, alphas=alphas)


def log_fraction(x: Fraction) -> float:
    return math.log(x.numerator) - math.log(x.denominator)


def beta_value(table: AlphaTable, j_set: frozenset[int] | set[int], l: int) -> BetaValue:
    """The root bound for index set J at level l; for |J| = l it degenerates
    to alpha_J with exponent 1."""
    j_key = frozenset(j_set)
    j = len(j_key)
    if not j_key <= frozenset(range(1, table.k + 1)):
        raise UsageError(f"index set {sorted(j_set)} not within 1..{table.k}")
    if l < 1 or j < l:
        raise UsageError(f"need 1 <= l <= |J|, got l={l}, |J|={j}")
    base = Fraction(1)
    for combo in combinations(sorted(j_key), l):
        base *= table.alphas[frozenset(combo)]
    expo_den = math.comb(j - 1, l - 1)
    if expo_den == 1:
        approx = float(base)
    else:
        approx = math.exp(log_fraction(base) / expo_den)
    return BetaValue(base=base, expo_num=1, expo_den=expo_den, approx=approx)


def cmp_ratio_vs_beta(ratio: Fraction, b: BetaValue) -> int:
    """Exact order of a positive rational against a root bound: LT, EQ or GT.

    Decided by comparing ratio**expo_den with base**expo_num through integer
    cross-multiplication; no floating point is involved.
    """
    if ratio <= 0:
        raise UsageError(f"ratio must be positive, got {ratio}")
    d = b.expo_den
    lhs = ratio.numerator ** d * (b.base.denominator ** b.expo_num)
    rhs = ratio.denominator ** d * (b.base.numerator ** b.expo_num)
    if lhs < rhs:
        return LT
    if lhs > rhs:
        return GT
    return EQ


def beta_identity_holds(table: AlphaTable, j_set: frozenset[int] | set[int], l: int) -> bool:
    """Whether the product of the |J|-1 sub-bounds equals beta_J ** (|J|-1).

    Both sides become rational after raising to the product of the two root
    denominators; the check is exact.
    """
    j_key = frozenset(j_set)
    j = len(j_key)
    if j < l + 1:
        raise UsageError(f"identity needs |J| >= l+1, got |J|={j}, l={l}")
    beta_j = beta_value(table, j_key, l)
    sub_root = math.comb(j - 2, l - 1)
    lhs_base = Fraction(1)
    for x in sorted(j_key):
        sub = beta_value(table, j_key - {x}, l)
        if sub.expo_den != sub_root:
            raise AssertionError("sub-bound root mismatch")
        lhs_base *= sub.base
    # (lhs_base ** (1/sub_root)) ** (D * sub_root) vs (base ** ((j-1)/D)) ** (D * sub_root)
    d = beta_j.expo_den
    return lhs_base ** d == beta_j.base ** ((j - 1) * sub_root)


def synthetic_alpha_table(k: int, rng: random.Random, *, max_part: int = 60) -> AlphaTable:
    """A coherent table with arbitrary positive rational entries, for
    exercising purely algebraic identities.  Not monotone in general."""
    if not 1 <= k <= MAX_K:
        raise UsageError(f"need 1 <= k <= {MAX_K}, got {k}")
    alphas = {frozenset(): Fraction(1)}
    indices = list(range(1, k + 1))
    for size in range(1, k + 1):
        for combo in combinations(indices, size):
            alphas[frozenset(combo)] = Fraction(rng.randint(1, max_part),
                                                rng.randint(1, max_part))
    m = math.lcm(*(a.denominator for a in alphas.values()))
    sizes = {key: int(a * m) for key, a in alphas.items()}
    return AlphaTable(k=k, m=m, sizes=sizes, alphas=alphas)
