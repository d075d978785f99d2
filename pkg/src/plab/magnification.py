"""Magnification ratio of the A -> A+B_K bipartite graph.

gamma = min over nonempty Z subset of A of |Z + B_K| / |Z|.  Two exact
methods: full subset enumeration (the oracle, capped at |A| <= 22) and a
discrete-Newton loop that tests each candidate ratio p/q with an integer
max-flow and reads the better subset off the min cut.  Both return the
reduced fraction together with a witness subset attaining it.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction

from .errors import UsageError
from .groups import GSet, Group, Instance, direct_power, iterated_sumset

EXHAUSTIVE_MAX = 22


@dataclass(frozen=True)
class PlunGraph:
    """Left vertices A, right vertices A+B_K, edges a -> a+B_K."""

    group: Group = field(repr=False)
    left: tuple[int, ...]
    right: tuple[int, ...]
    adjacency: dict[int, tuple[int, ...]] = field(repr=False)
    adj_bits: dict[int, int] = field(repr=False)

    @property
    def degree(self) -> int:
        return len(self.adjacency[self.left[0]])

    def image_bits(self, members: tuple[int, ...] | GSet) -> int:
        out = 0
        for a in members:
            out |= self.adj_bits[a]
        return out


@dataclass(frozen=True)
class MagResult:
    """An exact magnification ratio with a subset that attains it."""

    gamma: Fraction
    witness: GSet
    method: str
    iterations: int = 0


def build_plun_graph(a: GSet, bk: GSet) -> PlunGraph:
    if not a or not bk:
        raise UsageError("both A and B_K must be nonempty")
    if a.group != bk.group:
        raise UsageError("A and B_K must live in the same group")
    g = a.group
    adj_bits: dict[int, int] = {}
    right_bits = 0
    for x in a:
        if g.kind == "abelian":
            bits = g.translate_bits(bk.bits, x)
        else:
            bits = g._translate_left(bk.bits, x)
        adj_bits[x] = bits
        right_bits |= bits
    adjacency = {x: tuple(GSet(g, bits)) for x, bits in adj_bits.items()}
    return PlunGraph(group=g, left=tuple(a), right=tuple(GSet(g, right_bits)),
                     adjacency=adjacency, adj_bits=adj_bits)


def _members_key(bits: int) -> tuple[int, ...]:
    out = []
    while bits:
        lsb = bits & -bits
        out.append(lsb.bit_length() - 1)
        bits ^= lsb
    return tuple(out)


def gamma_exhaustive(graph: PlunGraph) -> MagResult:
    """Minimum over all nonempty subsets; deterministic tie-breaking by
    smallest |Z|, then smallest sorted member tuple."""
    n = len(graph.left)
    if n > EXHAUSTIVE_MAX:
        raise UsageError(
            f"|A| = {n} exceeds the exhaustive cap {EXHAUSTIVE_MAX}; use gamma_flow")
    adj = [graph.adj_bits[x] for x in graph.left]
    elem_bit = [1 << x for x in graph.left]
    best: tuple[int, int, int] | None = None

    def visit(i: int, im: int, members: int, count: int) -> None:
        nonlocal best
        if i == n:
            if count == 0:
                return
            p = im.bit_count()
            if best is None or _candidate_improves(p, count, members, best):
                best = (p, count, members)
            return
        visit(i + 1, im, members, count)
        visit(i + 1, im | adj[i], members | elem_bit[i], count + 1)

    visit(0, 0, 0, 0)
    assert best is not None
    p, q, members = best
    return MagResult(gamma=Fraction(p, q), witness=GSet(graph.group, members),
                     method="exhaustive", iterations=0)


def _candidate_improves(p: int, q: int, members: int,
                        best: tuple[int, int, int]) -> bool:
    bp, bq, bmembers = best
    lhs, rhs = p * bq, bp * q
    if lhs != rhs:
        return lhs < rhs
    if q != bq:
        return q < bq
    return _members_key(members) < _members_key(bmembers)


class _Dinic:
    """Integer max-flow with min-cut extraction."""

    __slots__ = ("n", "to", "cap", "adj")

    def __init__(self, n: int):
        self.n = n
        self.to: list[int] = []
        self.cap: list[int] = []
        self.adj: list[list[int]] = [[] for _ in range(n)]

    def add_edge(self, u: int, v: int, c: int) -> None:
        self.adj[u].append(len(self.to))
        self.to.append(v)
        self.cap.append(c)
        self.adj[v].append(len(self.to))
        self.to.append(u)
        self.cap.append(0)

    def _levels(self, s: int, t: int) -> list[int] | None:
        level = [-1] * self.n
        level[s] = 0
        queue = deque([s])
        while queue:
            u = queue.popleft()
            for eid in self.adj[u]:
                v = self.to[eid]
                if self.cap[eid] > 0 and level[v] < 0:
                    level[v] = level[u] + 1
                    queue.append(v)
        return level if level[t] >= 0 else None

    def _push(self, u: int, t: int, limit: int, level: list[int], it: list[int]) -> int:
        if u == t:
            return limit
        while it[u] < len(self.adj[u]):
            eid = self.adj[u][it[u]]
            v = self.to[eid]
            if self.cap[eid] > 0 and level[v] == level[u] + 1:
                pushed = self._push(v, t, min(limit, self.cap[eid]), level, it)
                if pushed:
                    self.cap[eid] -= pushed
                    self.cap[eid ^ 1] += pushed
                    return pushed
            it[u] += 1
        return 0

    def max_flow(self, s: int, t: int) -> int:
        flow = 0
        while True:
            level = self._levels(s, t)
            if level is None:
                return flow
            it = [0] * self.n
            while True:
                pushed = self._push(s, t, 1 << 62, level, it)
                if not pushed:
                    break
                flow += pushed

    def reachable(self, s: int) -> list[bool]:
        seen = [False] * self.n
        seen[s] = True
        queue = deque([s])
        while queue:
            u = queue.popleft()
            for eid in self.adj[u]:
                v = self.to[eid]
                if self.cap[eid] > 0 and not seen[v]:
                    seen[v] = True
                    queue.append(v)
        return seen


def gamma_flow(graph: PlunGraph) -> MagResult:
    """Exact minimum ratio by repeated feasibility tests.

    A candidate t = p/q is feasible iff the flow network
    source -(p)-> a -(inf)-> w -(q)-> sink saturates p*|A|; an infeasible
    round's min cut yields a subset with a strictly smaller ratio, which
    becomes the next candidate.  Candidates strictly decrease inside a
    finite set, so the loop terminates at the true minimum.
    """
    lefts = graph.left
    nl = len(lefts)
    rights = graph.right
    right_id = {w: i for i, w in enumerate(rights)}

    witness_bits = 0
    for x in lefts:
        witness_bits |= 1 << x
    t = Fraction(len(rights), nl)
    iterations = 0
    while True:
        iterations += 1
        p, q = t.numerator, t.denominator
        source = 0
        sink = 1 + nl + len(rights)
        net = _Dinic(sink + 1)
        inf_cap = p * nl + 1  # strictly above any useful cut through the middle
        for i, x in enumerate(lefts):
            net.add_edge(source, 1 + i, p)
            bits = graph.adj_bits[x]
            while bits:
                lsb = bits & -bits
                net.add_edge(1 + i, 1 + nl + right_id[lsb.bit_length() - 1], inf_cap)
                bits ^= lsb
        for j in range(len(rights)):
            net.add_edge(1 + nl + j, sink, q)
        flow = net.max_flow(source, sink)
        if flow == p * nl:
            return MagResult(gamma=t, witness=GSet(graph.group, witness_bits),
                             method="flow", iterations=iterations)
        seen = net.reachable(source)
        z_bits = 0
        im_bits = 0
        for i, x in enumerate(lefts):
            if seen[1 + i]:
                z_bits |= 1 << x
                im_bits |= graph.adj_bits[x]
        nz = z_bits.bit_count()
        assert nz > 0, "infeasible round must expose a nonempty subset"
        nxt = Fraction(im_bits.bit_count(), nz)
        assert nxt < t, "candidate ratios must strictly decrease"
        t = nxt
        witness_bits = z_bits


@dataclass(frozen=True)
class MultiplicativityReport:
    gamma_base: Fraction
    gamma_power: Fraction
    r: int
    equal: bool


def multiplicativity_check(inst: Instance, r: int) -> MultiplicativityReport:
    """Compare gamma of the r-th direct power against gamma ** r, exactly."""
    key = sorted(inst.key_set)
    bk = iterated_sumset(inst.bs, key)
    g1 = gamma_flow(build_plun_graph(inst.a, bk))
    powered = direct_power(inst, r)
    bk_r = iterated_sumset(powered.bs, key)
    gr = gamma_flow(build_plun_graph(powered.a, bk_r))
    return MultiplicativityReport(gamma_base=g1.gamma, gamma_power=gr.gamma, r=r,
                                  equal=gr.gamma == g1.gamma ** r)
