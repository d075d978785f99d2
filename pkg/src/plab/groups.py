"""Finite groups, bitset subsets, and exact sumset arithmetic.

Abelian groups are products of cyclic groups Z_{n_1} x ... x Z_{n_d} with
mixed-radix element indexing, so index 0 is the identity and element
arithmetic is O(d).  Arbitrary small groups (order <= 64) can instead be
described by an explicit multiplication table, validated for the group
axioms at construction.

A GSet is an immutable subset of one group, stored as a bitset in a single
Python int (bit i set <=> element i is a member).  Sumsets OR together
translated copies of the larger operand, one translate per member of the
smaller operand; an abelian translate is a handful of big-int shifts done
axis by axis, so it costs O(d * N / wordsize) rather than |S|*|T| pairs.
"""

from __future__ import annotations

import os
from dataclasses import dataclass
from math import prod
from typing import Iterable, Iterator, Sequence

from .errors import ResourceError, UsageError, ValidationError

DEFAULT_ELEMENT_CAP = 1 << 26
CAP_ENV_VAR = "PLAB_MEM_CAP"
CAYLEY_MAX_ORDER = 64


def element_cap() -> int:
    """Per-group element budget (default 2**26); PLAB_MEM_CAP overrides."""
    raw = os.environ.get(CAP_ENV_VAR)
    if raw is None:
        return DEFAULT_ELEMENT_CAP
    try:
        cap = int(raw)
    except ValueError as exc:
        raise UsageError(f"{CAP_ENV_VAR} must be an integer, got {raw!r}") from exc
    if cap < 1:
        raise UsageError(f"{CAP_ENV_VAR} must be positive, got {cap}")
    return cap


class Group:
    """A finite group with elements indexed 0..order-1.

    kind is "abelian" (product of cyclic groups, identity at index 0) or
    "cayley" (explicit multiplication table, identity wherever the table
    puts it).  Instances are immutable; shared caches are fill-once.
    """

    __slots__ = ("kind", "moduli", "table", "order", "identity", "is_abelian",
                 "_strides", "_combs", "_masks")

    def __init__(self, kind: str, *, moduli: tuple[int, ...] | None = None,
                 table: tuple[tuple[int, ...], ...] | None = None,
                 identity: int = 0, is_abelian: bool = True):
        self.kind = kind
        self.moduli = moduli
        self.table = table
        self.identity = identity
        self.is_abelian = is_abelian
        if kind == "abelian":
            self.order = prod(moduli)
            # stride of axis j = product of the moduli after it
            strides = [1] * len(moduli)
            for j in range(len(moduli) - 2, -1, -1):
                strides[j] = strides[j + 1] * moduli[j + 1]
            self._strides = tuple(strides)
        else:
            self.order = len(table)
            self._strides = ()
        self._combs = None   # per-axis block comb masks, built lazily
        self._masks = {}     # (axis, shift) -> (low_mask, high_mask)

    # -- element arithmetic ------------------------------------------------

    def coords(self, a: int) -> tuple[int, ...]:
        """Mixed-radix coordinate vector of element index a (abelian only)."""
        out = []
        for n in reversed(self.moduli):
            a, r = divmod(a, n)
            out.append(r)
        return tuple(reversed(out))

    def index(self, coords: Sequence[int]) -> int:
        """Element index of a coordinate vector (abelian only)."""
        a = 0
        for v, n in zip(coords, self.moduli):
            a = a * n + (v % n)
        return a

    def op(self, a: int, b: int) -> int:
        """Group operation on element indices."""
        if self.kind == "abelian":
            out = 0
            for x, y, n in zip(self.coords(a), self.coords(b), self.moduli):
                out = out * n + (x + y) % n
            return out
        return self.table[a][b]

    # -- bitset translation ------------------------------------------------

    def _axis_combs(self) -> tuple[int, ...]:
        if self._combs is None:
            combs = []
            for n, s in zip(self.moduli, self._strides):
                block = n * s
                nblocks = self.order // block
                if nblocks == 1:
                    combs.append(1)
                else:
                    combs.append(((1 << (block * nblocks)) - 1) // ((1 << block) - 1))
            self._combs = tuple(combs)
        return self._combs

    def _axis_masks(self, axis: int, c: int) -> tuple[int, int]:
        key = (axis, c)
        cached = self._masks.get(key)
        if cached is None:
            n = self.moduli[axis]
            s = self._strides[axis]
            comb = self._axis_combs()[axis]
            # low part: coordinates < n-c shift up by c*s inside each block;
            # high part wraps down by (n-c)*s
            low = ((1 << ((n - c) * s)) - 1) * comb
            high = ((1 << (c * s)) - 1) * comb
            cached = (low, high)
            self._masks[key] = cached
        return cached

    def translate_bits(self, bits: int, a: int) -> int:
        """Bitset of {a + x : x in bits} (abelian; translation by a)."""
        if a == 0 or bits == 0:
            return bits
        for axis, c in enumerate(self.coords(a)):
            if c == 0:
                continue
            s = self._strides[axis]
            n = self.moduli[axis]
            shift = c * s
            keep = (n - c) * s
            low, high = self._axis_masks(axis, c)
            bits = ((bits & low) << shift) | ((bits >> keep) & high)
        return bits

    def _translate_left(self, bits: int, a: int) -> int:
        """Bitset of {a * x : x in bits} via the multiplication table."""
        row = self.table[a]
        out = 0
        while bits:
            lsb = bits & -bits
            out |= 1 << row[lsb.bit_length() - 1]
            bits ^= lsb
        return out

    def _translate_right(self, bits: int, a: int) -> int:
        """Bitset of {x * a : x in bits} via the multiplication table."""
        table = self.table
        out = 0
        while bits:
            lsb = bits & -bits
            out |= 1 << table[lsb.bit_length() - 1][a]
            bits ^= lsb
        return out

    # -- set constructors ----------------------------------------------------

    def empty(self) -> "GSet":
        return GSet(self, 0)

    def singleton(self, a: int) -> "GSet":
        return self.set_of((a,))

    def identity_set(self) -> "GSet":
        return self.set_of((self.identity,))

    def full(self) -> "GSet":
        return GSet(self, (1 << self.order) - 1)

    def set_of(self, elems: Iterable[int]) -> "GSet":
        bits = 0
        for e in elems:
            if not 0 <= e < self.order:
                raise UsageError(f"element index {e} out of range 0..{self.order - 1}")
            bits |= 1 << e
        return GSet(self, bits)

    # -- identity / equality -------------------------------------------------

    def __eq__(self, other: object) -> bool:
        if self is other:
            return True
        if not isinstance(other, Group):
            return NotImplemented
        return (self.kind == other.kind and self.moduli == other.moduli
                and self.table == other.table)

    def __hash__(self) -> int:
        return hash((self.kind, self.moduli, self.table))

    def __repr__(self) -> str:
        if self.kind == "abelian":
            return "Z" + "xZ".join(str(n) for n in self.moduli)
        return f"Cayley(order={self.order})"


class GSet:
    """An immutable subset of a finite group, stored as a bitset."""

    __slots__ = ("group", "bits", "_card")

    def __init__(self, group: Group, bits: int):
        if bits < 0 or bits >> group.order:
            raise UsageError("bitset has bits outside the group's index range")
        self.group = group
        self.bits = bits
        self._card = bits.bit_count()

    def __len__(self) -> int:
        return self._card

    def __bool__(self) -> bool:
        return self.bits != 0

    def __contains__(self, e: int) -> bool:
        return 0 <= e < self.group.order and (self.bits >> e) & 1 == 1

    def __iter__(self) -> Iterator[int]:
        bits = self.bits
        while bits:
            lsb = bits & -bits
            yield lsb.bit_length() - 1
            bits ^= lsb

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, GSet):
            return NotImplemented
        return self.group == other.group and self.bits == other.bits

    def __hash__(self) -> int:
        return hash((self.group, self.bits))

    def __or__(self, other: "GSet") -> "GSet":
        _require_same_group(self, other)
        return GSet(self.group, self.bits | other.bits)

    def __and__(self, other: "GSet") -> "GSet":
        _require_same_group(self, other)
        return GSet(self.group, self.bits & other.bits)

    def __sub__(self, other: "GSet") -> "GSet":
        _require_same_group(self, other)
        return GSet(self.group, self.bits & ~other.bits)

    def __add__(self, other: "GSet") -> "GSet":
        return sumset(self, other)

    def issubset(self, other: "GSet") -> bool:
        _require_same_group(self, other)
        return self.bits & ~other.bits == 0

    def __repr__(self) -> str:
        if self._card <= 12:
            inner = ",".join(str(e) for e in self)
        else:
            inner = f"...{self._card} elements..."
        return f"GSet({{{inner}}} in {self.group!r})"


def _require_same_group(s: GSet, t: GSet) -> None:
    if s.group is not t.group and s.group != t.group:
        raise UsageError("set operands belong to different groups")


# -- public constructors ----------------------------------------------------

def make_abelian_group(moduli: Sequence[int], *, cap: int | None = None) -> Group:
    """Product of cyclic groups Z_{n_1} x ... x Z_{n_d}; index 0 is identity."""
    mods = tuple(int(n) for n in moduli)
    if not mods:
        raise UsageError("moduli must be a nonempty list")
    if any(n < 1 for n in mods):
        raise UsageError(f"cyclic orders must be >= 1, got {mods}")
    order = prod(mods)
    limit = element_cap() if cap is None else cap
    if order > limit:
        raise ResourceError(f"group order {order} exceeds element cap {limit}")
    return Group("abelian", moduli=mods)


def make_cayley_group(table: Sequence[Sequence[int]], *, max_order: int = CAYLEY_MAX_ORDER) -> Group:
    """Group from an explicit N x N multiplication table (N <= 64).

    The table is checked for well-formedness, cancellativity (rows and
    columns are permutations), a two-sided identity, associativity of every
    triple, and two-sided inverses; the first failure raises ValidationError.
    """
    rows = tuple(tuple(int(x) for x in row) for row in table)
    n = len(rows)
    if n == 0:
        raise ValidationError("empty multiplication table")
    if n > max_order:
        raise UsageError(f"table order {n} exceeds the cayley limit {max_order}")
    full = frozenset(range(n))
    for i, row in enumerate(rows):
        if len(row) != n:
            raise ValidationError(f"row {i} has length {len(row)}, expected {n}")
        if frozenset(row) != full:
            raise ValidationError(f"row {i} is not a permutation of 0..{n - 1}")
    for j in range(n):
        if frozenset(rows[i][j] for i in range(n)) != full:
            raise ValidationError(f"column {j} is not a permutation of 0..{n - 1}")
    identity = None
    for e in range(n):
        if all(rows[e][x] == x and rows[x][e] == x for x in range(n)):
            identity = e
            break
    if identity is None:
        raise ValidationError("no two-sided identity element")
    for a in range(n):
        for b in range(n):
            ab = rows[a][b]
            for c in range(n):
                if rows[ab][c] != rows[a][rows[b][c]]:
                    raise ValidationError(
                        f"associativity fails at triple ({a}, {b}, {c}): "
                        f"({a}*{b})*{c} = {rows[ab][c]} but {a}*({b}*{c}) = {rows[a][rows[b][c]]}")
    for a in range(n):
        inv = rows[a].index(identity)
        if rows[inv][a] != identity:
            raise ValidationError(f"element {a} has no two-sided inverse")
    abelian = all(rows[a][b] == rows[b][a] for a in range(n) for b in range(a))
    return Group("cayley", table=rows, identity=identity, is_abelian=abelian)


def embed_integer_sets(a: Iterable[int], bs: Sequence[Iterable[int]],
                       *, cap: int | None = None) -> tuple[Group, GSet, list[GSet]]:
    """Map nonnegative-integer sets into Z_N so that no sum ever wraps.

    N = 1 + max(A) + sum_i max(B_i) strictly exceeds the largest reachable
    sum, so every iterated-sumset cardinality over the images equals the
    plain integer-set result.
    """
    a_elems = sorted(set(int(x) for x in a))
    b_elems = [sorted(set(int(x) for x in b)) for b in bs]
    if not a_elems or any(not b for b in b_elems):
        raise UsageError("all sets must be nonempty")
    if a_elems[0] < 0 or any(b[0] < 0 for b in b_elems):
        raise UsageError("integer elements must be nonnegative; translate first")
    n = 1 + a_elems[-1] + sum(b[-1] for b in b_elems)
    group = make_abelian_group([n], cap=cap)
    return group, group.set_of(a_elems), [group.set_of(b) for b in b_elems]


# -- sumsets ------------------------------------------------------------------

def sumset(s: GSet, t: GSet) -> GSet:
    """{x * y : x in S, y in T}; operand order matters in cayley groups."""
    _require_same_group(s, t)
    g = s.group
    if not s.bits or not t.bits:
        return GSet(g, 0)
    out = 0
    if g.kind == "abelian":
        small, large = (s, t) if len(s) <= len(t) else (t, s)
        for a in small:
            out |= g.translate_bits(large.bits, a)
    elif len(s) <= len(t):
        for a in s:
            out |= g._translate_left(t.bits, a)
    else:
        for b in t:
            out |= g._translate_right(s.bits, b)
    return GSet(g, out)


def iterated_sumset(bs: Sequence[GSet], idxs: Iterable[int]) -> GSet:
    """Sum of the 1-based selection idxs from bs; the empty selection gives
    the identity singleton."""
    if not bs:
        raise UsageError("need at least one set to sum over")
    group = bs[0].group
    chosen = sorted(set(int(i) for i in idxs))
    if chosen and (chosen[0] < 1 or chosen[-1] > len(bs)):
        raise UsageError(f"index selection {chosen} out of range 1..{len(bs)}")
    acc = group.identity_set()
    for i in chosen:
        acc = sumset(acc, bs[i - 1])
    return acc


# -- instances and direct powers ----------------------------------------------

@dataclass(frozen=True)
class Instance:
    """A base set A, summand sets B_1..B_k, and a level l with 1 <= l < k."""

    group: Group
    a: GSet
    bs: tuple[GSet, ...]
    l: int

    def __post_init__(self):
        object.__setattr__(self, "bs", tuple(self.bs))
        if len(self.bs) < 2:
            raise UsageError("need at least two summand sets")
        if not 1 <= self.l < len(self.bs):
            raise UsageError(f"level must satisfy 1 <= l < k, got l={self.l}, k={len(self.bs)}")
        if not self.a:
            raise UsageError("base set A must be nonempty")
        if any(not b for b in self.bs):
            raise UsageError("every summand set must be nonempty")
        for gs in (self.a, *self.bs):
            if gs.group != self.group:
                raise UsageError("all sets must live in the instance's group")

    @property
    def k(self) -> int:
        return len(self.bs)

    @property
    def key_set(self) -> frozenset[int]:
        """The full index set {1, ..., k}."""
        return frozenset(range(1, len(self.bs) + 1))


def power_group(group: Group, r: int, *, cap: int | None = None) -> Group:
    """The r-fold direct power, as the concatenated-moduli product group."""
    if group.kind != "abelian":
        raise UsageError("direct powers are only supported for abelian product groups")
    if r < 1:
        raise UsageError(f"power must be >= 1, got {r}")
    limit = element_cap() if cap is None else cap
    if group.order ** r > limit:
        raise ResourceError(f"group order {group.order}^{r} exceeds element cap {limit}")
    return make_abelian_group(group.moduli * r, cap=cap)


def power_set(powered: Group, s: GSet, r: int) -> GSet:
    """Cartesian r-th power of s inside the powered group."""
    base = s.group.order
    idxs = list(s)
    cur = [0]
    for _ in range(r):
        cur = [p * base + e for p in cur for e in idxs]
    bits = 0
    for e in cur:
        bits |= 1 << e
    return GSet(powered, bits)


def direct_power(inst: Instance, r: int, *, cap: int | None = None) -> Instance:
    """Instance over G^r with A^r and B_i^r; r=1 returns the instance itself."""
    if r == 1:
        return inst
    gp = power_group(inst.group, r, cap=cap)
    return Instance(gp, power_set(gp, inst.a, r),
                    tuple(power_set(gp, b, r) for b in inst.bs), inst.l)
