"""Proof-machinery constructions made concrete.

The cyclic-extension device turns a different-summands instance with
k = l+1 into an equal-summands one: append cyclic factors H_1..H_k of
orders n_i = alpha_(K minus i) * q to the group and replace each B_i by
B_i x H_i.  All distinct-summand sums A + B'_(K minus i) then share the
exact cardinality m * (beta*q)^l, while every repeated-summand term grows
a factor of q slower, which is the point of the construction.

The power experiment exhibits the constant-removal limit: gamma of the
r-th direct power equals gamma^r exactly, so the r-th roots stay pinned
under the root bound beta.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations_with_replacement

from .alphabeta import AlphaTable, alpha_table, beta_value
from .errors import ResourceError, UsageError
from .groups import (GSet, Group, Instance, direct_power, element_cap,
                     iterated_sumset, make_abelian_group, sumset)
from .magnification import build_plun_graph, gamma_flow


def _leave_one_out_alphas(table: AlphaTable) -> list[Fraction]:
    return [table.alphas[table.complement(i)] for i in range(1, table.k + 1)]


def admissible_q(table: AlphaTable, base_order: int, *, count: int = 6,
                 cap: int | None = None) -> list[int]:
    """First few q making every n_i = alpha_(K minus i) * q an integer,
    filtered by the element cap on the extended group."""
    alphas = _leave_one_out_alphas(table)
    step = math.lcm(*(a.denominator for a in alphas))
    limit = element_cap() if cap is None else cap
    out: list[int] = []
    q = step
    while len(out) < count:
        ext_order = base_order * math.prod(int(a * q) for a in alphas)
        if ext_order > limit:
            break
        out.append(q)
        q += step
    if not out:
        raise ResourceError(
            f"no admissible q keeps the extended group under the cap {limit}")
    return out


@dataclass(frozen=True)
class Lemma21Setup:
    """The extended group with its per-summand cyclic paddings."""

    q: int
    n: tuple[int, ...]
    gprime: Group = field(repr=False)
    aprime: GSet = field(repr=False)
    bprime: GSet = field(repr=False)
    bi_prime: tuple[GSet, ...] = field(repr=False)

    @property
    def h_order(self) -> int:
        return math.prod(self.n)


@dataclass(frozen=True)
class Lemma21Report:
    setup: Lemma21Setup
    expected_distinct: int
    distinct_sizes: dict[int, int]
    union_size: int
    union_rhs: int
    union_holds: bool
    first_satisfying_q: int | None
    repeated_sizes: dict[tuple[int, ...], int]
    apex_lhs: int
    apex_rhs: int
    apex_equal: bool

    @property
    def repeated_to_distinct_ratio(self) -> Fraction:
        return Fraction(sum(self.repeated_sizes.values()),
                        sum(self.distinct_sizes.values()))


def build_extension(inst: Instance, q: int, *, cap: int | None = None) -> Lemma21Setup:
    """Extend the instance's group by the cyclic paddings for a given q."""
    if inst.group.kind != "abelian":
        raise UsageError("the extension construction needs an abelian product group")
    if inst.l != inst.k - 1:
        raise UsageError(f"construction requires k = l+1, got k={inst.k}, l={inst.l}")
    table = alpha_table(inst)
    alphas = _leave_one_out_alphas(table)
    n = []
    for a in alphas:
        ni = a * q
        if ni.denominator != 1:
            raise UsageError(f"q={q} is not admissible: alpha*q = {ni} is not integral")
        n.append(int(ni))
    gprime = make_abelian_group(inst.group.moduli + tuple(n), cap=cap)
    h_order = math.prod(n)
    strides = [1] * len(n)
    for j in range(len(n) - 2, -1, -1):
        strides[j] = strides[j + 1] * n[j + 1]

    aprime = gprime.set_of(x * h_order for x in inst.a)
    bi_prime = []
    for i, b in enumerate(inst.bs):
        bits = 0
        for x in b:
            base = x * h_order
            for h in range(n[i]):
                bits |= 1 << (base + h * strides[i])
        bi_prime.append(GSet(gprime, bits))
    union = gprime.empty()
    for bp in bi_prime:
        union = union | bp
    return Lemma21Setup(q=q, n=tuple(n), gprime=gprime, aprime=aprime,
                        bprime=union, bi_prime=tuple(bi_prime))


def _union_sum_size(setup: Lemma21Setup, folds: int) -> int:
    acc = setup.aprime
    for _ in range(folds):
        acc = sumset(acc, setup.bprime)
    return len(acc)


def lemma21_demo(inst: Instance, q: int, *, cap: int | None = None,
                 scan_limit: int = 8) -> Lemma21Report:
    """Measure the construction at q: the k distinct-summand sums must all
    equal m*(beta*q)^l exactly; the (k-1)-fold sum of the union B' is
    compared against twice their total, and the first admissible q
    satisfying that bound is reported alongside the repeated-summand
    diagnostics and the apex identity |X + (B_K x H)| = |H| * |X + B_K|."""
    setup = build_extension(inst, q, cap=cap)
    k, m = inst.k, len(inst.a)
    table = alpha_table(inst)
    h_order = setup.h_order

    # m * (beta*q)^l as an exact integer via the leave-one-out product
    expected_fr = Fraction(m) * q ** inst.l
    for a in _leave_one_out_alphas(table):
        expected_fr *= a
    if expected_fr.denominator != 1:
        raise AssertionError("distinct-summand size must be integral for admissible q")
    expected = int(expected_fr)

    distinct_sizes: dict[int, int] = {}
    for i in range(1, k + 1):
        others = [j for j in range(1, k + 1) if j != i]
        acc = setup.aprime
        for j in others:
            acc = sumset(acc, setup.bi_prime[j - 1])
        distinct_sizes[i] = len(acc)

    union_size = _union_sum_size(setup, k - 1)
    union_rhs = 2 * k * expected
    union_holds = union_size <= union_rhs

    first_q = None
    if union_holds:
        # walk the admissible list from the smallest q
        for cand in admissible_q(table, inst.group.order, count=scan_limit, cap=cap):
            if cand > q:
                break
            st = setup if cand == q else build_extension(inst, cand, cap=cap)
            if _union_sum_size(st, k - 1) <= 2 * k * _expected_at(table, m, inst.l, cand):
                first_q = cand
                break
    else:
        for cand in admissible_q(table, inst.group.order, count=scan_limit, cap=cap):
            if cand <= q:
                continue
            st = build_extension(inst, cand, cap=cap)
            if _union_sum_size(st, k - 1) <= 2 * k * _expected_at(table, m, inst.l, cand):
                first_q = cand
                break

    repeated_sizes: dict[tuple[int, ...], int] = {}
    for multiset in combinations_with_replacement(range(1, k + 1), k - 1):
        if len(set(multiset)) == k - 1:
            continue  # distinct-summand terms reported separately
        acc = setup.aprime
        for j in multiset:
            acc = sumset(acc, setup.bi_prime[j - 1])
        repeated_sizes[multiset] = len(acc)

    bk = iterated_sumset(inst.bs, sorted(inst.key_set))
    witness = gamma_flow(build_plun_graph(inst.a, bk)).witness
    wprime = setup.gprime.set_of(x * h_order for x in witness)
    acc = wprime
    for bp in setup.bi_prime:
        acc = sumset(acc, bp)
    apex_lhs = len(acc)
    apex_rhs = h_order * len(sumset(witness, bk))

    return Lemma21Report(setup=setup, expected_distinct=expected,
                         distinct_sizes=distinct_sizes, union_size=union_size,
                         union_rhs=union_rhs, union_holds=union_holds,
                         first_satisfying_q=first_q, repeated_sizes=repeated_sizes,
                         apex_lhs=apex_lhs, apex_rhs=apex_rhs,
                         apex_equal=apex_lhs == apex_rhs)


def _expected_at(table: AlphaTable, m: int, l: int, q: int) -> int:
    fr = Fraction(m) * q ** l
    for a in _leave_one_out_alphas(table):
        fr *= a
    return int(fr)


@dataclass(frozen=True)
class PowerExperimentRow:
    r: int
    gamma_r: Fraction
    equals_power: bool
    root: float


@dataclass(frozen=True)
class PowerExperimentReport:
    rows: tuple[PowerExperimentRow, ...]
    beta_approx: float
    all_equal: bool

    @property
    def roots_bounded(self) -> bool:
        return all(row.root <= self.beta_approx * (1 + 1e-9) for row in self.rows)


def power_experiment(inst: Instance, r_max: int, *, cap: int | None = None) -> PowerExperimentReport:
    """gamma of each direct power up to r_max, checked exactly against
    gamma^r, with the float r-th roots listed next to beta."""
    if r_max < 1:
        raise UsageError(f"r_max must be >= 1, got {r_max}")
    table = alpha_table(inst)
    beta = beta_value(table, inst.key_set, inst.l)
    key = sorted(inst.key_set)
    base_gamma = None
    rows = []
    for r in range(1, r_max + 1):
        powered = direct_power(inst, r, cap=cap)
        bk_r = iterated_sumset(powered.bs, key)
        g = gamma_flow(build_plun_graph(powered.a, bk_r)).gamma
        if r == 1:
            base_gamma = g
        root = math.exp((math.log(g.numerator) - math.log(g.denominator)) / r)
        rows.append(PowerExperimentRow(r=r, gamma_r=g,
                                       equals_power=g == base_gamma ** r, root=root))
    return PowerExperimentReport(rows=tuple(rows), beta_approx=beta.approx,
                                 all_equal=all(row.equals_power for row in rows))
