import math
import random
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from plab import (EQ, GT, LT, Instance, UsageError, alpha_table,
                  beta_identity_holds, beta_value, cmp_ratio_vs_beta,
                  make_abelian_group, synthetic_alpha_table)
from plab.alphabeta import BetaValue

from gen import rand_instance
from oracles import naive_iterated, naive_sumset


def identity_instance(k=3):
    g = make_abelian_group([6])
    e = g.identity_set()
    return Instance(g, g.set_of([0, 2, 5]), tuple(e for _ in range(k)), 1)


# -- alpha tables ---------------------------------------------------------------

def test_alpha_table_z5(z5):
    t = alpha_table(z5)
    assert t.m == 2
    assert t.alphas[frozenset()] == 1
    assert t.alphas[frozenset({1})] == Fraction(3, 2)
    assert t.alphas[frozenset({2})] == 2
    assert t.alphas[frozenset({1, 2})] == Fraction(5, 2)


def test_alpha_table_z9(z9):
    t = alpha_table(z9)
    assert t.alphas[frozenset({1, 2})] == Fraction(5, 2)
    assert t.alphas[frozenset({1, 3})] == 3
    assert t.alphas[frozenset({2, 3})] == 4
    assert t.sizes[frozenset({1, 2, 3})] == 9


def test_alpha_table_identity_sets():
    t = alpha_table(identity_instance())
    assert all(a == 1 for a in t.alphas.values())


def test_alpha_table_matches_oracle(z9):
    t = alpha_table(z9)
    b_lists = [sorted(b) for b in z9.bs]
    for key, size in t.sizes.items():
        expected = naive_sumset(z9.group, list(z9.a),
                                naive_iterated(z9.group, b_lists, key))
        assert size == len(expected)


def test_alpha_table_k_cap():
    g = make_abelian_group([3])
    b = g.set_of([0])
    with pytest.raises(UsageError):
        alpha_table(Instance(g, b, tuple(b for _ in range(9)), 1))


@given(st.integers(0, 10_000))
def test_alpha_monotone(seed):
    inst = rand_instance(random.Random(seed), n_range=(2, 24), k_range=(2, 4),
                         a_range=(1, 5), b_range=(1, 5))
    t = alpha_table(inst)
    for key, alpha in t.alphas.items():
        for extra in range(1, inst.k + 1):
            assert alpha <= t.alphas[key | {extra}]


# -- beta values -----------------------------------------------------------------

def test_beta_z5_level1(z5):
    b = beta_value(alpha_table(z5), z5.key_set, 1)
    assert b.base == 3 and b.expo_num == 1 and b.expo_den == 1
    assert b.approx == 3.0


def test_beta_z9_level2(z9):
    b = beta_value(alpha_table(z9), z9.key_set, 2)
    assert b.base == 30 and b.expo_den == 2
    assert b.approx == pytest.approx(math.sqrt(30), rel=1e-12)


def test_beta_identity_sets():
    t = alpha_table(identity_instance())
    for size in (1, 2):
        for j in ({1, 2}, {1, 3}, {1, 2, 3}):
            if len(j) >= size:
                assert beta_value(t, frozenset(j), size).base == 1


def test_beta_degenerate_j_equals_l(z9):
    b = beta_value(alpha_table(z9), frozenset({1, 2}), 2)
    assert b.base == Fraction(5, 2) and b.expo_den == 1


def test_beta_errors(z9):
    t = alpha_table(z9)
    with pytest.raises(UsageError):
        beta_value(t, frozenset({1}), 2)       # |J| < l
    with pytest.raises(UsageError):
        beta_value(t, frozenset({1, 2, 9}), 1)  # outside 1..k


def test_equal_summand_reduction():
    # with every B_i equal, base = alpha^C(k,l) and the root C(k-1,l-1)
    # satisfy base^l == alpha^(k*C(k-1,l-1)) exactly
    g = make_abelian_group([16])
    a = g.set_of([0, 1, 5])
    b = g.set_of([0, 2, 3])
    for k in (2, 3, 4):
        inst = Instance(g, a, tuple(g.set_of(list(b)) for _ in range(k)), 1)
        t = alpha_table(inst)
        for l in range(1, k):
            alpha = t.alphas[frozenset(range(1, l + 1))]
            bv = beta_value(t, inst.key_set, l)
            assert bv.base == alpha ** math.comb(k, l)
            assert bv.base ** l == alpha ** (k * math.comb(k - 1, l - 1))


# -- exact comparisons --------------------------------------------------------------

def test_cmp_plain_rational():
    b = BetaValue(base=Fraction(3), expo_num=1, expo_den=1, approx=3.0)
    assert cmp_ratio_vs_beta(Fraction(5, 2), b) == LT
    assert cmp_ratio_vs_beta(Fraction(3), b) == EQ
    assert cmp_ratio_vs_beta(Fraction(7, 2), b) == GT


def test_cmp_square_root():
    b = BetaValue(base=Fraction(30), expo_num=1, expo_den=2, approx=math.sqrt(30))
    assert cmp_ratio_vs_beta(Fraction(9, 2), b) == LT   # 81/4 < 30
    assert cmp_ratio_vs_beta(Fraction(6), b) == GT      # 36 > 30


def test_cmp_identity_case():
    b = BetaValue(base=Fraction(1), expo_num=1, expo_den=1, approx=1.0)
    assert cmp_ratio_vs_beta(Fraction(1), b) == EQ


def test_cmp_requires_positive():
    b = BetaValue(base=Fraction(1), expo_num=1, expo_den=1, approx=1.0)
    with pytest.raises(UsageError):
        cmp_ratio_vs_beta(Fraction(0), b)


@given(st.fractions(min_value="1/100", max_value="100"),
       st.fractions(min_value="1/100", max_value="100"),
       st.integers(1, 6))
def test_cmp_agrees_with_floats_off_boundary(ratio, base, root):
    b = BetaValue(base=base, expo_num=1, expo_den=root,
                  approx=math.exp((math.log(base.numerator) - math.log(base.denominator)) / root))
    gap = abs(float(ratio) - b.approx)
    if gap > 1e-6 * max(b.approx, 1.0):
        expected = LT if float(ratio) < b.approx else GT
        assert cmp_ratio_vs_beta(ratio, b) == expected


# -- the sub-bound product identity ---------------------------------------------------

def test_identity_z9(z9):
    t = alpha_table(z9)
    assert beta_identity_holds(t, z9.key_set, 2)
    # both sides are rational here: product of the three pair-alphas is 30
    assert (t.alphas[frozenset({1, 2})] * t.alphas[frozenset({1, 3})]
            * t.alphas[frozenset({2, 3})]) == 30


def test_identity_trivial_k2(z5):
    assert beta_identity_holds(alpha_table(z5), z5.key_set, 1)


def test_identity_synthetic_k5():
    t = synthetic_alpha_table(5, random.Random(42))
    assert beta_identity_holds(t, frozenset(range(1, 6)), 2)


def test_identity_precondition(z9):
    with pytest.raises(UsageError):
        beta_identity_holds(alpha_table(z9), frozenset({1, 2}), 2)


@given(st.integers(0, 10_000), st.integers(2, 5))
def test_identity_on_synthetic_tables(seed, k):
    t = synthetic_alpha_table(k, random.Random(seed))
    full = frozenset(range(1, k + 1))
    for l in range(1, k):
        for size in range(l + 1, k + 1):
            for j in _subsets_of_size(full, size):
                assert beta_identity_holds(t, j, l)


def _subsets_of_size(full, size):
    from itertools import combinations
    return [frozenset(c) for c in combinations(sorted(full), size)]


@given(st.integers(0, 10_000))
def test_identity_on_random_instances(seed):
    inst = rand_instance(random.Random(seed), n_range=(2, 32), k_range=(2, 4),
                         a_range=(1, 5), b_range=(1, 4))
    t = alpha_table(inst)
    full = frozenset(range(1, inst.k + 1))
    for size in range(inst.l + 1, inst.k + 1):
        for j in _subsets_of_size(full, size):
            assert beta_identity_holds(t, j, inst.l)
