"""Verdict operations: each inequality the library checks, with witnesses.

Guaranteed inequalities (every commutative instance must satisfy them) are
checked exactly; a False verdict from one of those means an implementation
bug or a genuine counterexample and callers are expected to abort loudly
via ensure_holds.  The two-sided-summand inequality over noncommutative
groups is unproved territory: a failing search there is a reportable
finding, never an assertion.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations

from .alphabeta import (AlphaTable, GT, alpha_table, beta_value,
                        cmp_ratio_vs_beta, log_fraction)
from .errors import TheoremViolationError, UsageError
from .groups import GSet, Group, Instance, direct_power, iterated_sumset, power_set, sumset
from .magnification import build_plun_graph, gamma_exhaustive, gamma_flow

REL_TOL = 1e-9        # float bound checks
NEAR_FLAG_TOL = 1e-6  # flag verdicts this close to the boundary

#: checks whose failure is fatal rather than reportable
GUARANTEED = frozenset({"plgen", "pldiff", "single", "restricted", "large"})


@dataclass(frozen=True)
class TheoremVerdict:
    theorem: str
    holds: bool
    lhs: object
    rhs: object
    exact: bool
    witness: GSet | None = None
    notes: str = ""


def ensure_holds(verdict: TheoremVerdict, instance_dump: dict | None = None) -> TheoremVerdict:
    """Raise for a failed guaranteed check; pass every other verdict through."""
    if not verdict.holds and verdict.theorem in GUARANTEED:
        raise TheoremViolationError(
            f"guaranteed check {verdict.theorem!r} failed: lhs={verdict.lhs} rhs={verdict.rhs}",
            instance_dump=instance_dump)
    return verdict


def _gamma(a: GSet, bk: GSet, method: str):
    graph = build_plun_graph(a, bk)
    if method == "exhaustive":
        return gamma_exhaustive(graph)
    return gamma_flow(graph)


def check_plgen(inst: Instance, *, method: str = "flow") -> TheoremVerdict:
    """Some nonempty X in A has |X+B_K| <= beta * |X|: verified by comparing
    the exact magnification ratio against beta."""
    table = alpha_table(inst)
    beta = beta_value(table, inst.key_set, inst.l)
    bk = iterated_sumset(inst.bs, sorted(inst.key_set))
    mag = _gamma(inst.a, bk, method)
    holds = cmp_ratio_vs_beta(mag.gamma, beta) != GT
    return TheoremVerdict(theorem="plgen", holds=holds, lhs=mag.gamma, rhs=beta,
                          exact=True, witness=mag.witness)


def check_single_summand(a: GSet, b: GSet, l: int, k: int, *,
                         method: str = "flow") -> TheoremVerdict:
    """Equal-summand case: some X has |X + kB| <= alpha^(k/l) |X| with
    alpha = |A+lB|/|A|.  Reduces to the general check with B_i = B."""
    if not 1 <= l < k:
        raise UsageError(f"need 1 <= l < k, got l={l}, k={k}")
    inst = Instance(a.group, a, tuple(b for _ in range(k)), l)
    verdict = check_plgen(inst, method=method)
    return TheoremVerdict(theorem="single", holds=verdict.holds, lhs=verdict.lhs,
                          rhs=verdict.rhs, exact=True, witness=verdict.witness)


def check_pldiff(inst: Instance, *, method: str = "flow") -> TheoremVerdict:
    """Product-of-alphas case (level forced to 1): the bound is the plain
    rational alpha_1 * ... * alpha_k."""
    forced = inst if inst.l == 1 else Instance(inst.group, inst.a, inst.bs, 1)
    verdict = check_plgen(forced, method=method)
    return TheoremVerdict(theorem="pldiff", holds=verdict.holds, lhs=verdict.lhs,
                          rhs=verdict.rhs, exact=True, witness=verdict.witness)


# -- empirical large-subset constant ------------------------------------------

@dataclass(frozen=True)
class RootRatio:
    """The exact value ratio / base**(1/root), ordered by integer powers."""

    ratio: Fraction
    base: Fraction
    root: int

    def cmp(self, other: "RootRatio") -> int:
        d = math.lcm(self.root, other.root)
        lhs = self.ratio ** d / self.base ** (d // self.root)
        rhs = other.ratio ** d / other.base ** (d // other.root)
        if lhs < rhs:
            return -1
        if lhs > rhs:
            return 1
        return 0

    def __lt__(self, other: "RootRatio") -> bool:
        return self.cmp(other) < 0

    def as_float(self) -> float:
        return math.exp(log_fraction(self.ratio) - log_fraction(self.base) / self.root)

    def equals_rational(self, value: Fraction) -> bool:
        return self.ratio ** self.root == self.base * value ** self.root


@dataclass(frozen=True)
class EmpiricalConstant:
    """Smallest observed c with |X+B_J| <= c * beta_J * |X| for all J with
    |J| >= l, over subsets X larger than (1-epsilon) * |A|."""

    epsilon: Fraction
    c_emp: RootRatio
    x: GSet
    argmax_j: frozenset[int]
    exhaustive: bool


EXHAUSTIVE_M_MAX = 16
DEFAULT_SAMPLES = 10_000


def empirical_plgen2(inst: Instance, epsilon, *, samples: int = DEFAULT_SAMPLES,
                     seed: int = 0) -> EmpiricalConstant:
    """Measure min over admissible X of max over J of |X+B_J| / (beta_J |X|).

    Exhaustive over all admissible subsets when |A| <= 16, otherwise seeded
    random sampling; X = A is always examined, so the result is finite.
    Every inner comparison is exact.
    """
    eps = Fraction(epsilon)
    if not 0 < eps < 1:
        raise UsageError(f"epsilon must lie strictly between 0 and 1, got {epsilon}")
    m = len(inst.a)
    table = alpha_table(inst)
    j_sets = [frozenset(c)
              for size in range(inst.l, inst.k + 1)
              for c in combinations(range(1, inst.k + 1), size)]
    betas = {j: beta_value(table, j, inst.l) for j in j_sets}
    b_sets = {j: iterated_sumset(inst.bs, sorted(j)) for j in j_sets}

    def c_of(x: GSet) -> tuple[RootRatio, frozenset[int]]:
        best: tuple[RootRatio, frozenset[int]] | None = None
        for j in j_sets:
            b = betas[j]
            cand = RootRatio(Fraction(len(sumset(x, b_sets[j])), len(x)),
                             b.base, b.expo_den)
            if best is None or best[0] < cand:
                best = (cand, j)
        return best

    min_card_exclusive = (1 - eps) * m  # admissible: |X| > this
    members = list(inst.a)
    exhaustive = m <= EXHAUSTIVE_M_MAX
    best: tuple[RootRatio, frozenset[int], GSet] | None = None

    def consider(x: GSet) -> None:
        nonlocal best
        c, j = c_of(x)
        if best is None or c < best[0]:
            best = (c, j, x)

    consider(inst.a)
    if exhaustive:
        for mask in range(1, 1 << m):
            if mask.bit_count() <= min_card_exclusive:
                continue
            x = inst.group.set_of(members[i] for i in range(m) if (mask >> i) & 1)
            if len(x) < m:  # A itself already considered
                consider(x)
    else:
        rng = random.Random(seed)
        lo = math.floor(min_card_exclusive) + 1
        for _ in range(samples):
            size = rng.randint(lo, m)
            x = inst.group.set_of(rng.sample(members, size))
            consider(x)
    c, j, x = best
    return EmpiricalConstant(epsilon=eps, c_emp=c, x=x, argmax_j=j, exhaustive=exhaustive)


# -- constructive large subsets -------------------------------------------------

@dataclass(frozen=True)
class LargeSubsetResult:
    x: GSet
    bound: float
    holds: bool
    lhs: int
    iterations: int
    near_boundary: bool


def large_subset(inst: Instance, mode: str, value) -> LargeSubsetResult:
    """Grow a subset to the requested size by repeatedly adjoining the
    magnification witness of what remains of A, then test the size bound.

    mode "a": integer target 1 <= a <= |A|, result has |X| >= a.
    mode "t": real target 0 <= t < |A|, result has |X| > t.
    The bound is evaluated in floats (the inner powers are irrational) and
    checked at 1e-9 relative tolerance, with a near-boundary flag at 1e-6.
    """
    m = len(inst.a)
    if mode == "a":
        a_target = int(value)
        if not 1 <= a_target <= m:
            raise UsageError(f"mode 'a' needs 1 <= a <= {m}, got {value}")
        needs_more = lambda x: len(x) < a_target
    elif mode == "t":
        t_target = float(value)
        if not 0 <= t_target < m:
            raise UsageError(f"mode 't' needs 0 <= t < {m}, got {value}")
        needs_more = lambda x: len(x) <= t_target
    else:
        raise UsageError(f"mode must be 'a' or 't', got {mode!r}")

    table = alpha_table(inst)
    beta = beta_value(table, inst.key_set, inst.l)
    bk = iterated_sumset(inst.bs, sorted(inst.key_set))
    x = gamma_flow(build_plun_graph(inst.a, bk)).witness
    iterations = 1
    while needs_more(x):
        remaining = inst.a - x
        x = x | gamma_flow(build_plun_graph(remaining, bk)).witness
        iterations += 1
    lhs = len(sumset(x, bk))

    kl = inst.k / inst.l
    if mode == "a":
        total = sum((m / (m - i)) ** kl for i in range(a_target))
        total += (len(x) - a_target) * (m / (m - a_target + 1)) ** kl
    else:
        head = m ** kl * (inst.l / (inst.k - inst.l)) * (
            (m - t_target) ** (1 - kl) - m ** (1 - kl))
        total = head + (len(x) - t_target) * (m / (m - t_target)) ** kl
    bound = beta.approx * total
    holds = lhs <= bound * (1 + REL_TOL)
    near = abs(lhs - bound) <= NEAR_FLAG_TOL * max(bound, 1.0)
    return LargeSubsetResult(x=x, bound=bound, holds=holds, lhs=lhs,
                             iterations=iterations, near_boundary=near)


def large_subset_verdict(inst: Instance, mode: str, value) -> TheoremVerdict:
    res = large_subset(inst, mode, value)
    return TheoremVerdict(theorem="large", holds=res.holds, lhs=res.lhs,
                          rhs=res.bound, exact=False, witness=res.x,
                          notes="near boundary" if res.near_boundary else "")


# -- restricted sums ------------------------------------------------------------

def _leave_one_out_product(table: AlphaTable) -> int:
    out = 1
    for i in range(1, table.k + 1):
        out *= table.sizes[table.complement(i)]
    return out


def check_restricted_sum(inst: Instance, s: GSet) -> TheoremVerdict:
    """For S inside the complete sum B_K:
    |S+A|^k <= |S| * prod over i of |A + B_(K minus i)|, checked in integers."""
    bk = iterated_sumset(inst.bs, sorted(inst.key_set))
    if not s:
        raise UsageError("S must be nonempty")
    if not s.issubset(bk):
        raise UsageError("S must be a subset of the complete sum B_K")
    table = alpha_table(inst)
    lhs = len(sumset(s, inst.a)) ** inst.k
    rhs = len(s) * _leave_one_out_product(table)
    return TheoremVerdict(theorem="restricted", holds=lhs <= rhs, lhs=lhs, rhs=rhs,
                          exact=True)


@dataclass(frozen=True)
class PipelineStep:
    name: str
    lhs: float
    rhs: float
    holds: bool
    exact: bool


@dataclass(frozen=True)
class PowerRow:
    r: int
    power_size: int
    identity_holds: bool
    bound: float
    bound_holds: bool


@dataclass(frozen=True)
class RestrictedPipelineReport:
    branch: str
    s_size: int
    sa_size: int
    s_prod: int
    t: float | None
    steps: tuple[PipelineStep, ...]
    power_rows: tuple[PowerRow, ...]
    all_hold: bool


def restricted_pipeline(inst: Instance, s: GSet, r_max: int) -> RestrictedPipelineReport:
    """Walk the proof chain of the restricted-sum bound on a concrete
    instance: branch on |S| against the threshold, evaluate every
    intermediate inequality, and confirm the tensor-power identity
    |S^r + A^r| = |S+A|^r for r up to r_max."""
    bk = iterated_sumset(inst.bs, sorted(inst.key_set))
    if not s or not s.issubset(bk):
        raise UsageError("S must be a nonempty subset of the complete sum B_K")
    k, m = inst.k, len(inst.a)
    table = alpha_table(inst)
    s_prod = _leave_one_out_product(table)
    sa = sumset(s, inst.a)
    sa_size = len(sa)
    s_size = len(s)
    steps: list[PipelineStep] = []

    def add(name: str, lhs: float, rhs: float, exact: bool) -> None:
        tol = 0 if exact else rhs * REL_TOL
        steps.append(PipelineStep(name=name, lhs=lhs, rhs=rhs,
                                  holds=lhs <= rhs + tol, exact=exact))

    # exact branch test: |S|^(k-1) <= s_prod / m^k
    small_branch = s_size ** (k - 1) * m ** k <= s_prod
    t = None
    if small_branch:
        branch = "small"
        add("product_bound", sa_size, s_size * m, True)
        add("kth_power_bound", sa_size ** k, s_size * s_prod, True)
    else:
        branch = "large"
        t = m - (s_prod / s_size ** (k - 1)) ** (1 / k)
        level = k - 1
        shifted = inst if inst.l == level else Instance(inst.group, inst.a, inst.bs, level)
        res = large_subset(shifted, "t", t)
        x = res.x
        r_x = len(x)
        sx = len(sumset(s, x))
        bkx = len(sumset(bk, x))
        add("witness_term_subset", sx, bkx, True)
        add("witness_term_bound", bkx, res.bound, False)
        rest = len(sumset(s, inst.a - x)) if r_x < m else 0
        add("complement_term", rest, s_size * (m - r_x), True)
        add("split", sa_size, sx + rest, True)
        combined = (k * (s_prod * s_size) ** (1 / k)
                    - (k - 1) * (s_prod / m) ** (1 / (k - 1)))
        add("combined_bound", sa_size, combined, False)
        add("relaxed_bound", sa_size, k * (s_prod * s_size) ** (1 / k), False)
        add("kth_power_bound", sa_size ** k, s_size * s_prod, True)

    power_rows: list[PowerRow] = []
    prev_bound = math.inf
    for r in range(1, r_max + 1):
        powered = direct_power(inst, r)
        s_r = power_set(powered.group, s, r) if r > 1 else s
        size_r = len(sumset(s_r, powered.a))
        bound_r = k ** (1 / r) * (s_prod * s_size) ** (1 / k)
        power_rows.append(PowerRow(
            r=r, power_size=size_r, identity_holds=size_r == sa_size ** r,
            bound=bound_r,
            bound_holds=sa_size <= bound_r * (1 + REL_TOL) and bound_r <= prev_bound))
        prev_bound = bound_r

    all_hold = (all(st.holds for st in steps)
                and all(row.identity_holds and row.bound_holds for row in power_rows))
    return RestrictedPipelineReport(branch=branch, s_size=s_size, sa_size=sa_size,
                                    s_prod=s_prod, t=t, steps=tuple(steps),
                                    power_rows=tuple(power_rows), all_hold=all_hold)


# -- noncommutative two-sided search --------------------------------------------

NONCOMM_MAX_A = 20


def check_noncommutative(group: Group, a: GSet, b1: GSet, b2: GSet) -> TheoremVerdict:
    """Search all nonempty X in A for |B1 * X * B2| <= alpha1 * alpha2 * |X|
    with alpha1 = |B1*A|/|A| (left) and alpha2 = |A*B2|/|A| (right).

    This inequality is unproved for noncommutative groups: a failed search
    is reported as a candidate counterexample, not raised as an error.
    """
    for gs in (a, b1, b2):
        if gs.group != group or not gs:
            raise UsageError("A, B1, B2 must be nonempty sets in the given group")
    n = len(a)
    if n > NONCOMM_MAX_A:
        raise UsageError(f"|A| = {n} exceeds the exhaustive search cap {NONCOMM_MAX_A}")
    left_size = len(sumset(b1, a))
    right_size = len(sumset(a, b2))
    members = list(a)
    singles = [sumset(sumset(b1, group.singleton(x)), b2).bits for x in members]

    def mask_to_elems(mask: int) -> int:
        elems = 0
        while mask:
            lsb = mask & -mask
            elems |= 1 << members[lsb.bit_length() - 1]
            mask ^= lsb
        return elems

    or_bits = [0] * (1 << n)
    best: tuple[int, int, int] | None = None  # (p, q, subset mask)
    for mask in range(1, 1 << n):
        low = mask & -mask
        bits = or_bits[mask ^ low] | singles[low.bit_length() - 1]
        or_bits[mask] = bits
        p = bits.bit_count()
        q = mask.bit_count()
        if (best is None or p * best[1] < best[0] * q
                or (p * best[1] == best[0] * q and q < best[1])):
            best = (p, q, mask)
    p, q, elems = best[0], best[1], mask_to_elems(best[2])
    ratio = Fraction(p, q)
    bound = Fraction(left_size * right_size, n * n)
    holds = p * n * n <= left_size * right_size * q
    return TheoremVerdict(
        theorem="noncomm", holds=holds, lhs=ratio, rhs=bound, exact=True,
        witness=GSet(group, elems),
        notes="" if holds else "candidate counterexample: no subset meets the bound")
