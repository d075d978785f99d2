import math
import random
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from plab import (EQ, LT, Instance, TheoremViolationError, UsageError,
                  alpha_table, beta_value, check_noncommutative, check_pldiff,
                  check_plgen, check_restricted_sum, check_single_summand,
                  cmp_ratio_vs_beta, empirical_plgen2, ensure_holds,
                  iterated_sumset, large_subset, make_abelian_group,
                  make_cayley_group, restricted_pipeline, sumset)
from plab.theorems import RootRatio, TheoremVerdict
from plab.cayley import cyclic_table, symmetric_table

from gen import rand_instance, rand_subset
from oracles import naive_sumset, nonempty_subsets


def identity_instance(k=2):
    g = make_abelian_group([6])
    e = g.identity_set()
    return Instance(g, g.set_of([0, 2, 5]), tuple(e for _ in range(k)), 1)


# -- the central check --------------------------------------------------------------

def test_plgen_z5(z5):
    v = check_plgen(z5)
    assert v.holds and v.exact
    assert v.lhs == Fraction(5, 2)
    assert v.rhs.base == 3 and v.rhs.expo_den == 1
    assert sorted(v.witness) == [0, 1]


def test_plgen_z9_exact_square(z9):
    v = check_plgen(z9)
    assert v.holds
    assert v.lhs == Fraction(9, 2)
    # the verdict is the integer comparison (9/2)^2 = 81/4 <= 30
    assert v.lhs ** 2 == Fraction(81, 4) <= 30
    assert cmp_ratio_vs_beta(v.lhs, v.rhs) == LT


def test_plgen_identity_equality():
    v = check_plgen(identity_instance())
    assert v.holds
    assert v.lhs == 1 and v.rhs.base == 1
    assert cmp_ratio_vs_beta(v.lhs, v.rhs) == EQ


def test_exhaustive_method_agrees(z5):
    assert check_plgen(z5, method="exhaustive").lhs == check_plgen(z5).lhs


@given(st.integers(0, 100_000))
def test_plgen_always_holds(seed):
    inst = rand_instance(random.Random(seed), n_range=(2, 64), k_range=(2, 4),
                         a_range=(1, 8), b_range=(1, 8))
    ensure_holds(check_plgen(inst))


def test_ensure_holds_raises_on_guaranteed_failure():
    fake = TheoremVerdict(theorem="plgen", holds=False, lhs=2, rhs=1, exact=True)
    with pytest.raises(TheoremViolationError):
        ensure_holds(fake, {"marker": True})
    soft = TheoremVerdict(theorem="noncomm", holds=False, lhs=2, rhs=1, exact=True)
    assert ensure_holds(soft) is soft


# -- equal summands -------------------------------------------------------------------

def test_single_summand_z4():
    g = make_abelian_group([4])
    a = g.set_of([0, 1])
    v = check_single_summand(a, a, 1, 2)
    assert v.holds
    assert v.lhs == 2
    assert v.rhs.base == Fraction(9, 4) and v.rhs.expo_den == 1


def test_single_summand_identity():
    g = make_abelian_group([4])
    v = check_single_summand(g.set_of([0, 1]), g.identity_set(), 1, 2)
    assert v.holds and v.lhs == 1 and v.rhs.base == 1


def test_single_summand_z8_singleton_base():
    g = make_abelian_group([8])
    v = check_single_summand(g.set_of([0]), g.set_of([0, 1]), 1, 3)
    assert v.holds
    assert v.lhs == 4       # |{0} + 3B| = 4
    assert v.rhs.base == 8  # alpha^k = 2^3


def test_single_summand_needs_l_below_k():
    g = make_abelian_group([4])
    with pytest.raises(UsageError):
        check_single_summand(g.set_of([0]), g.set_of([0]), 2, 2)


@given(st.integers(0, 10_000))
def test_single_agrees_with_plgen_on_equal_sets(seed):
    rng = random.Random(seed)
    inst = rand_instance(rng, n_range=(2, 24), k_range=(2, 3), a_range=(1, 5),
                         b_range=(1, 4))
    equal = Instance(inst.group, inst.a,
                     tuple(inst.bs[0] for _ in range(inst.k)), inst.l)
    v1 = check_single_summand(inst.a, inst.bs[0], inst.l, inst.k)
    v2 = check_plgen(equal)
    assert (v1.holds, v1.lhs, v1.rhs) == (v2.holds, v2.lhs, v2.rhs)


# -- product-of-alphas case ------------------------------------------------------------

def test_pldiff_z5(z5):
    v = check_pldiff(z5)
    assert v.holds and v.lhs == Fraction(5, 2) and v.rhs.base == 3


def test_pldiff_z9(z9):
    v = check_pldiff(z9)
    assert v.rhs.base == 6 and v.rhs.expo_den == 1
    assert v.lhs == Fraction(9, 2)
    assert v.holds


def test_pldiff_identity_equality():
    v = check_pldiff(identity_instance(3))
    assert v.holds and v.lhs == 1 == v.rhs.base


@given(st.integers(0, 10_000))
def test_pldiff_agrees_with_plgen_at_level_one(seed):
    inst = rand_instance(random.Random(seed), n_range=(2, 24), k_range=(2, 3),
                         a_range=(1, 5), b_range=(1, 4), l=1)
    v1, v2 = check_pldiff(inst), check_plgen(inst)
    assert (v1.holds, v1.lhs, v1.rhs) == (v2.holds, v2.lhs, v2.rhs)


# -- empirical near-full-size constant ---------------------------------------------------

def test_empirical_identity_sets():
    emp = empirical_plgen2(identity_instance(), Fraction(1, 2))
    assert emp.c_emp.equals_rational(Fraction(1))
    assert emp.exhaustive


def test_empirical_epsilon_near_one(z5):
    emp = empirical_plgen2(z5, Fraction(99, 100))
    assert emp.c_emp.as_float() <= 4 / 3 + 1e-12


def test_empirical_z5_admits_all_nonempty(z5):
    # (1-0.6)*2 = 0.8 admits every nonempty X; X=A attains the minimum,
    # where the binding J is a singleton with ratio exactly beta_J
    emp = empirical_plgen2(z5, Fraction(6, 10))
    assert emp.x == z5.a
    assert emp.c_emp.equals_rational(Fraction(1))


def test_empirical_epsilon_range(z5):
    with pytest.raises(UsageError):
        empirical_plgen2(z5, Fraction(0))
    with pytest.raises(UsageError):
        empirical_plgen2(z5, Fraction(3, 2))


def test_empirical_sampled_path():
    g = make_abelian_group([40])
    rng = random.Random(5)
    a = g.set_of(rng.sample(range(40), 18))
    bs = (g.set_of([0, 3]), g.set_of([0, 7]))
    emp = empirical_plgen2(Instance(g, a, bs, 1), Fraction(1, 2), samples=50, seed=9)
    assert not emp.exhaustive
    assert len(emp.x) > 9
    assert emp.c_emp.as_float() > 0


@given(st.integers(0, 10_000))
def test_empirical_always_finite_with_admissible_witness(seed):
    rng = random.Random(seed)
    inst = rand_instance(rng, n_range=(2, 24), k_range=(2, 3), a_range=(1, 6),
                         b_range=(1, 4))
    eps = Fraction(rng.randint(1, 9), 10)
    emp = empirical_plgen2(inst, eps)
    assert len(emp.x) > (1 - eps) * len(inst.a)
    assert emp.c_emp.as_float() < math.inf
    # the witness X reproduces the claimed constant at the binding J
    b = beta_value(alpha_table(inst), emp.argmax_j, inst.l)
    lhs = Fraction(len(sumset(emp.x, iterated_sumset(inst.bs, sorted(emp.argmax_j)))),
                   len(emp.x))
    assert RootRatio(lhs, b.base, b.expo_den).cmp(emp.c_emp) == 0


def test_root_ratio_ordering():
    # 2/sqrt(2) = sqrt(2) < 3/2
    a = RootRatio(Fraction(2), Fraction(2), 2)
    b = RootRatio(Fraction(3, 2), Fraction(1), 1)
    assert a < b
    assert a.cmp(a) == 0
    assert a.as_float() == pytest.approx(math.sqrt(2), rel=1e-12)


# -- constructive large subsets -----------------------------------------------------------

def test_large_subset_t0_reproduces_beta(z5):
    res = large_subset(z5, "t", 0)
    beta = beta_value(alpha_table(z5), z5.key_set, 1)
    assert res.bound == beta.approx * len(res.x)
    assert res.x == check_plgen(z5).witness
    assert res.holds


def test_large_subset_a1_reproduces_beta(z9):
    res = large_subset(z9, "a", 1)
    beta = beta_value(alpha_table(z9), z9.key_set, 2)
    assert res.bound == beta.approx * len(res.x)
    assert res.holds


def test_large_subset_z5_a2(z5):
    res = large_subset(z5, "a", 2)
    assert sorted(res.x) == [0, 1]
    assert res.lhs == 5
    assert res.bound == pytest.approx(15.0, rel=1e-12)
    assert res.holds


def test_large_subset_value_errors(z5):
    with pytest.raises(UsageError):
        large_subset(z5, "a", 0)
    with pytest.raises(UsageError):
        large_subset(z5, "a", 3)
    with pytest.raises(UsageError):
        large_subset(z5, "t", 2.0)
    with pytest.raises(UsageError):
        large_subset(z5, "x", 1)


@given(st.integers(0, 10_000))
def test_large_subset_growth_and_termination(seed):
    rng = random.Random(seed)
    inst = rand_instance(rng, n_range=(2, 32), k_range=(2, 3), a_range=(1, 8),
                         b_range=(1, 4))
    m = len(inst.a)
    a_target = rng.randint(1, m)
    res = large_subset(inst, "a", a_target)
    assert len(res.x) >= a_target
    assert res.iterations <= m
    assert res.holds
    t_target = rng.uniform(0, m - 0.01)
    res_t = large_subset(inst, "t", t_target)
    assert len(res_t.x) > t_target
    assert res_t.iterations <= m
    assert res_t.holds


# -- restricted sums --------------------------------------------------------------------

def test_restricted_z5(z5):
    s = z5.group.set_of([0, 3])
    v = check_restricted_sum(z5, s)
    assert v.holds and v.exact
    assert v.lhs == 16 and v.rhs == 24


def test_restricted_complete_sum(z5):
    bk = iterated_sumset(z5.bs, [1, 2])
    v = check_restricted_sum(z5, bk)
    assert v.holds
    assert v.lhs == len(sumset(bk, z5.a)) ** 2


def test_restricted_singleton(z9):
    bk = iterated_sumset(z9.bs, [1, 2, 3])
    v = check_restricted_sum(z9, z9.group.set_of([next(iter(bk))]))
    assert v.holds
    assert v.lhs == len(z9.a) ** 3


def test_restricted_requires_subset(z5):
    with pytest.raises(UsageError):
        check_restricted_sum(z5, z5.group.set_of([4]))
    with pytest.raises(UsageError):
        check_restricted_sum(z5, z5.group.empty())


@given(st.integers(0, 10_000))
def test_restricted_all_subsets_small(seed):
    inst = rand_instance(random.Random(seed), n_range=(2, 16), k_range=(2, 3),
                         a_range=(1, 4), b_range=(1, 2))
    bk = iterated_sumset(inst.bs, sorted(inst.key_set))
    if len(bk) > 8:
        return
    for z in nonempty_subsets(bk):
        assert check_restricted_sum(inst, inst.group.set_of(z)).holds


# -- the proof-chain pipeline ---------------------------------------------------------------

def test_pipeline_small_branch(z5):
    s = z5.group.set_of([0, 3])
    rep = restricted_pipeline(z5, s, 2)
    assert rep.branch == "small"
    assert rep.all_hold
    assert rep.power_rows[1].power_size == 16 == rep.sa_size ** 2
    assert rep.power_rows[1].bound == pytest.approx(
        math.sqrt(2) * math.sqrt(rep.s_prod * rep.s_size), rel=1e-12)


def test_pipeline_large_branch_complete_sum(z5):
    bk = iterated_sumset(z5.bs, [1, 2])
    rep = restricted_pipeline(z5, bk, 2)
    assert rep.branch == "large"
    assert rep.t is not None and 0 <= rep.t < len(z5.a)
    assert rep.all_hold
    names = [st.name for st in rep.steps]
    assert "witness_term_bound" in names and "kth_power_bound" in names


def test_pipeline_bounds_decrease(z9):
    bk = iterated_sumset(z9.bs, [1, 2, 3])
    rep = restricted_pipeline(z9, bk, 3)
    bounds = [row.bound for row in rep.power_rows]
    assert bounds == sorted(bounds, reverse=True)
    assert rep.all_hold


@given(st.integers(0, 10_000))
def test_pipeline_power_identity(seed):
    rng = random.Random(seed)
    inst = rand_instance(rng, n_range=(2, 24), k_range=(2, 3), a_range=(1, 4),
                         b_range=(1, 3))
    bk = iterated_sumset(inst.bs, sorted(inst.key_set))
    s = rand_subset(rng, bk)
    rep = restricted_pipeline(inst, s, 2)
    assert all(row.identity_holds for row in rep.power_rows)
    assert rep.all_hold


# -- noncommutative two-sided bound ------------------------------------------------------------

def test_noncomm_identity_sets():
    g = make_cayley_group(symmetric_table(3))
    a = g.set_of([0, 1, 3])
    e = g.identity_set()
    v = check_noncommutative(g, a, e, e)
    assert v.holds
    assert v.lhs == 1 == v.rhs


def test_noncomm_s3_matches_bruteforce():
    g = make_cayley_group(symmetric_table(3))
    a, b1, b2 = g.set_of([0, 3]), g.set_of([0, 1]), g.set_of([0, 4])
    v = check_noncommutative(g, a, b1, b2)
    best = None
    for z in nonempty_subsets(a):
        mid = naive_sumset(g, list(b1), z)
        out = naive_sumset(g, mid, list(b2))
        ratio = Fraction(len(out), len(z))
        best = ratio if best is None else min(best, ratio)
    assert v.lhs == best
    assert v.holds == (best <= v.rhs)


def test_noncomm_abelian_cross_check():
    g = make_cayley_group(cyclic_table(8))
    rng = random.Random(3)
    a = g.set_of(rng.sample(range(8), 3))
    b1 = g.set_of([0] + rng.sample(range(1, 8), 2))
    b2 = g.set_of([0] + rng.sample(range(1, 8), 2))
    v = check_noncommutative(g, a, b1, b2)
    assert v.holds
    # on a commutative group the product-of-alphas witness guarantees this
    za = make_abelian_group([8])
    inst = Instance(za, za.set_of(a), (za.set_of(b1), za.set_of(b2)), 1)
    v2 = check_pldiff(inst)
    assert v2.holds and v2.rhs.base == v.rhs


def test_noncomm_size_cap():
    g = make_cayley_group(cyclic_table(24))
    a = g.set_of(range(21))
    with pytest.raises(UsageError):
        check_noncommutative(g, a, g.identity_set(), g.identity_set())
