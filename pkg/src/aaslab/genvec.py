"""Generating vectors: verification, exact counting, search, construction.

A tuple (h; m_1..m_s) is an *actual* signature for G exactly when a vector
(a_1, b_1, .., a_h, b_h, c_1, .., c_s) exists whose entries generate G,
where c_j has order m_j and the product of the h commutators [a_i, b_i]
followed by the c_j equals the identity.

The decision pipeline is counting-first: the number of such vectors is
computed exactly by group-algebra convolution inside each subgroup and a
Moebius inversion over the subgroup lattice enforces generation.  Counts
are Python ints, so they stay exact at any size.  Backtracking search is
the fallback (and the witness extractor), and for groups whose finiteness
constants are known, explicit constructions settle high-genus and
long-tail signatures without any search.
"""

from __future__ import annotations

import time
import weakref
from array import array
from collections import defaultdict
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import TYPE_CHECKING

from . import _kernels as kernels
from .errors import (
    BudgetExhausted,
    LatticeUnavailable,
    NotAas,
    PreconditionNotMet,
    ShapeMismatch,
)
from .group_core import DEFAULT_LATTICE_CAP, Group, Subgroup
from .signatures import Signature, potentiality_failure, rh_genus

if TYPE_CHECKING:
    from .aas import AasBounds

DEFAULT_SEARCH_BUDGET = 10_000_000

_CONTEXT_CACHE: "weakref.WeakKeyDictionary[Group, HomCountContext]" = weakref.WeakKeyDictionary()


# ---------------------------------------------------------------------------
# vectors and verification


@dataclass(frozen=True)
class GeneratingVector:
    """The tuple (a_1..a_h, b_1..b_h, c_1..c_s) as element indices."""

    a: tuple[int, ...]
    b: tuple[int, ...]
    c: tuple[int, ...]

    def entries(self) -> tuple[int, ...]:
        return self.a + self.b + self.c

    @property
    def h(self) -> int:
        return len(self.a)

    @property
    def s(self) -> int:
        return len(self.c)


@dataclass(frozen=True)
class VerifyResult:
    """Outcome of the three vector conditions, reported separately."""

    ok: bool
    generates: bool
    orders_match: bool
    relation_holds: bool
    closure_size: int
    order_mismatches: tuple[int, ...] = ()  # positions j with |c_j| != m_j


def verify(group: Group, sig: Signature, vector: GeneratingVector) -> VerifyResult:
    """Check generation, tail orders, and the long relation."""
    if len(vector.a) != sig.h or len(vector.b) != sig.h or len(vector.c) != sig.s:
        raise ShapeMismatch(
            f"vector shape ({len(vector.a)},{len(vector.b)},{len(vector.c)}) "
            f"does not match signature {sig.text()}")
    for x in vector.entries():
        if not 0 <= x < group.order:
            raise IndexError(f"element index {x} out of range")
    sub = group.generated_subgroup(vector.entries())
    generates = sub.size == group.order
    mismatches = tuple(j for j, m in enumerate(sig.tail)
                       if group.element_orders[vector.c[j]] != m)
    prod = 0
    for ai, bi in zip(vector.a, vector.b):
        prod = group.mul(prod, group.commutator(ai, bi))
    for cj in vector.c:
        prod = group.mul(prod, cj)
    relation = prod == 0
    ok = generates and not mismatches and relation
    return VerifyResult(ok, generates, not mismatches, relation, sub.size,
                        mismatches)


# ---------------------------------------------------------------------------
# exact counting


@dataclass
class _LocalTables:
    """Dense per-subgroup data for the convolution kernels."""

    size: int
    elements: tuple[int, ...]
    mul_flat: array
    inv_flat: array
    order_positions: dict[int, array]
    commutator_counts: list[int] = field(default=None)  # type: ignore[assignment]


class HomCountContext:
    """Cached counting data: commutator counts, order indicators, lattice.

    Immutable after construction; the per-subgroup table cache is filled
    idempotently, so concurrent use is safe.
    """

    def __init__(self, group: Group, lattice):
        self.group = group
        self.lattice = lattice
        self._locals: dict[int, _LocalTables] = {}
        self._full = Subgroup(tuple(range(group.order)),
                              (1 << group.order) - 1, group.generators)

    @property
    def full_subgroup(self) -> Subgroup:
        return self._full

    @property
    def commutator_count(self) -> list[int]:
        """K[x] = number of pairs (a, b) with commutator x, whole group."""
        return self.local(self._full).commutator_counts

    def order_positions(self, n: int):
        return self.local(self._full).order_positions.get(n, array("i"))

    def local(self, subgroup: Subgroup) -> _LocalTables:
        tabs = self._locals.get(subgroup.mask)
        if tabs is not None:
            return tabs
        g = self.group
        elems = subgroup.elements
        sz = len(elems)
        pos = {e: i for i, e in enumerate(elems)}
        mul_flat = array("i", bytes(4 * sz * sz))
        for i, a in enumerate(elems):
            base = i * sz
            row = g.row(a) if sz == g.order else None
            for j, b in enumerate(elems):
                p = row[b] if row is not None else g.mul(a, b)
                mul_flat[base + j] = pos[p]
        inv_flat = array("i", (pos[g.inv(a)] for a in elems))
        order_positions: dict[int, list[int]] = {}
        for i, a in enumerate(elems):
            if a == 0:
                continue
            order_positions.setdefault(g.element_orders[a], []).append(i)
        tabs = _LocalTables(
            size=sz,
            elements=elems,
            mul_flat=mul_flat,
            inv_flat=inv_flat,
            order_positions={n: array("i", v) for n, v in order_positions.items()},
        )
        tabs.commutator_counts = kernels.commutator_counts(mul_flat, inv_flat, sz)
        self._locals[subgroup.mask] = tabs
        return tabs


def build_context(group: Group, *, lattice=None,
                  lattice_cap: int = DEFAULT_LATTICE_CAP) -> HomCountContext:
    """Counting context; the lattice is attached when the order allows it."""
    if lattice is None and group.order <= lattice_cap:
        lattice = group.subgroup_lattice(cap=lattice_cap)
    return HomCountContext(group, lattice)


def _cached_context(group: Group, lattice_cap: int) -> HomCountContext | None:
    ctx = _CONTEXT_CACHE.get(group)
    if ctx is None and group.order <= lattice_cap:
        ctx = build_context(group, lattice_cap=lattice_cap)
        _CONTEXT_CACHE[group] = ctx
    return ctx


def count_tuples(ctx: HomCountContext, subgroup: Subgroup, sig: Signature) -> int:
    """Number of tuples inside the subgroup satisfying orders and relation.

    Convolution DP: the point mass at e is convolved h times with the
    subgroup's commutator-count vector, then once per tail entry with the
    order-indicator vector; the identity coefficient is the count.
    Generation is deliberately not enforced here.
    """
    tabs = ctx.local(subgroup)
    for m in set(sig.tail):
        if m not in tabs.order_positions:
            return 0
    sz = tabs.size
    dist: list[int] | None = None
    for _ in range(sig.h):
        if dist is None:
            dist = list(tabs.commutator_counts)
        else:
            dist = kernels.convolve(tabs.mul_flat, sz, dist,
                                    tabs.commutator_counts)
    if dist is None:
        dist = [0] * sz
        dist[0] = 1
    for m in sig.tail:
        dist = kernels.convolve_positions(tabs.mul_flat, sz, dist,
                                          tabs.order_positions[m])
    return dist[0]


def count_generating_tuples(ctx: HomCountContext, sig: Signature) -> int:
    """Exact number of generating vectors, by Moebius inversion over the
    subgroup lattice; positive iff the signature is actual."""
    if ctx.lattice is None:
        raise LatticeUnavailable(
            f"no subgroup lattice for {ctx.group.label}; counting needs one")
    total = 0
    for sub, mu in zip(ctx.lattice.subgroups, ctx.lattice.moebius_to_top):
        if mu == 0:
            continue
        c = count_tuples(ctx, sub, sig)
        if c:
            total += mu * c
    if total < 0:
        raise AssertionError("negative generating-vector count; Moebius data corrupt")
    return total


# ---------------------------------------------------------------------------
# backtracking search


def search(group: Group, sig: Signature,
           budget: int = DEFAULT_SEARCH_BUDGET) -> GeneratingVector | None:
    """Depth-first witness search.

    The first free slot draws from conjugacy-class representatives only
    (solutions are closed under simultaneous conjugation); remaining slots
    run over full candidate ranges ordered by class size descending, index
    ascending.  The last tail element is forced by the relation.  Returns a
    witness, or None when the space was exhausted (proven absence), and
    raises BudgetExhausted when the node budget ran out first.
    """
    h, tail, s, n = sig.h, sig.tail, sig.s, group.order
    order_set = set(group.order_set())
    if any(m not in order_set for m in tail):
        return None
    conj = group.conjugacy_classes()
    csize = [len(conj.classes[conj.class_of[x]]) for x in range(n)]

    def sort_key(x: int):
        return (-csize[x], x)

    all_sorted = sorted(range(n), key=sort_key)
    reps = set(conj.representatives)
    order_cands = {m: sorted(group.elements_of_order(m), key=sort_key)
                   for m in set(tail)}
    order_masks = {m: sum(1 << x for x in order_cands[m])
                   for m in order_cands}
    full_mask = (1 << n) - 1

    # assignment slots: c_1..c_{s-1}, then a_1, b_1, .., a_h, b_h
    slots: list[tuple[str, int]] = [("c", j) for j in range(max(s - 1, 0))]
    for i in range(h):
        slots.append(("a", i))
        slots.append(("b", i))

    c_vals = [0] * s
    a_vals = [0] * h
    b_vals = [0] * h
    closure_memo: dict[tuple[int, int], tuple[tuple[int, ...], int]] = {}
    state = {"nodes": 0}

    def extend(members: tuple[int, ...], mask: int, gens: tuple[int, ...],
               x: int) -> tuple[tuple[int, ...], int]:
        if mask >> x & 1:
            return members, mask
        key = (mask, x)
        hit = closure_memo.get(key)
        if hit is None:
            got, new_mask = group._closure(gens + (x,))
            hit = (tuple(got), new_mask)
            closure_memo[key] = hit
        return hit

    def rest_confined(idx: int, mask: int) -> bool:
        """True when every remaining slot can only draw inside the closure."""
        for kind, j in slots[idx:]:
            if kind != "c":
                return False
            if order_masks[tail[j]] & ~mask:
                return False
        return True

    def leaf(members: tuple[int, ...], mask: int,
             gens: tuple[int, ...]) -> GeneratingVector | None:
        prod = 0
        for i in range(h):
            prod = group.mul(prod, group.commutator(a_vals[i], b_vals[i]))
        for j in range(s - 1):
            prod = group.mul(prod, c_vals[j])
        if s:
            forced = group.inv(prod)
            if group.element_orders[forced] != tail[s - 1]:
                return None
            c_vals[s - 1] = forced
            members, mask = extend(members, mask, gens, forced)
            gens = gens + (forced,)
        else:
            if prod != 0:
                return None
        if mask != full_mask:
            return None
        return GeneratingVector(tuple(a_vals), tuple(b_vals), tuple(c_vals))

    def dfs(idx: int, members: tuple[int, ...], mask: int,
            gens: tuple[int, ...]) -> GeneratingVector | None:
        if idx == len(slots):
            return leaf(members, mask, gens)
        kind, j = slots[idx]
        if kind == "c":
            cands = order_cands[tail[j]]
        else:
            cands = all_sorted
        if idx == 0:
            cands = [x for x in cands if x in reps]
        for x in cands:
            state["nodes"] += 1
            if state["nodes"] > budget:
                raise BudgetExhausted(
                    f"search budget {budget} exhausted on {sig.text()}",
                    nodes=state["nodes"])
            if kind == "c":
                c_vals[j] = x
            elif kind == "a":
                a_vals[j] = x
            else:
                b_vals[j] = x
            new_members, new_mask = extend(members, mask, gens, x)
            if new_mask != full_mask and rest_confined(idx + 1, new_mask):
                continue
            found = dfs(idx + 1, new_members, new_mask, gens + (x,))
            if found is not None:
                return found
        return None

    return dfs(0, (0,), 1, ())


# ---------------------------------------------------------------------------
# explicit constructions


def _braid_sort_tail(group: Group, c: list[int]) -> tuple[int, ...]:
    """Reorder tail entries to ascending element order.

    Adjacent transposition (u, v) -> (v, v^-1 u v) preserves the running
    product and element orders, so validity is unchanged.
    """
    c = list(c)
    changed = True
    while changed:
        changed = False
        for i in range(len(c) - 1):
            if group.element_orders[c[i]] > group.element_orders[c[i + 1]]:
                u, v = c[i], c[i + 1]
                c[i], c[i + 1] = v, group.conjugate(u, v)
                changed = True
    return tuple(c)


def _shortest_word(group: Group, target: int,
                   alphabet: tuple[int, ...]) -> tuple[int, ...]:
    """Shortest word over alphabet + inverses whose product is the target."""
    letters = sorted({x for v in alphabet for x in (v, group.inv(v))})
    if target == 0:
        return ()
    pred: dict[int, tuple[int, int]] = {}
    seen = {0}
    frontier = [0]
    while frontier:
        nxt = []
        for y in frontier:
            for letter in letters:
                z = group.mul(y, letter)
                if z in seen:
                    continue
                seen.add(z)
                pred[z] = (y, letter)
                if z == target:
                    word = []
                    while z != 0:
                        prev, let = pred[z]
                        word.append(let)
                        z = prev
                    word.reverse()
                    return tuple(word)
                nxt.append(z)
        frontier = nxt
    raise PreconditionNotMet("alphabet does not generate the group")


def construct_high_genus(group: Group, sig: Signature,
                         bounds: "AasBounds") -> GeneratingVector:
    """Explicit vector for orbit genus at or above the genus threshold.

    Pairs: the stored generating set against identities, then a commutator
    factorization of the inverse of the tail product, then identity pairs;
    the tail realizes each order inside the derived subgroup.
    """
    if sig.h < bounds.genus_threshold:
        raise PreconditionNotMet(
            f"orbit genus {sig.h} below threshold {bounds.genus_threshold}")
    derived = group.derived_subgroup()
    by_order: dict[int, int] = {}
    for x in derived.elements:
        by_order.setdefault(group.element_orders[x], x)
    tail_elems = []
    for m in sig.tail:
        if m not in by_order:
            raise PreconditionNotMet(
                f"derived subgroup has no element of order {m}")
        tail_elems.append(by_order[m])
    x = 0
    for t in tail_elems:
        x = group.mul(x, t)
    pairs = bounds.width_witness.factorization(group.inv(x))
    k = len(bounds.generating_set)
    w = len(pairs)
    fill = sig.h - k - w
    a = list(bounds.generating_set) + [c for c, _ in pairs] + [0] * fill
    b = [0] * k + [d for _, d in pairs] + [0] * fill
    vec = GeneratingVector(tuple(a), tuple(b), tuple(tail_elems))
    check = verify(group, sig, vec)
    if not check.ok:
        raise AssertionError(f"high-genus construction failed on {sig.text()}")
    return vec


def construct_long_tail(group: Group, sig: Signature,
                        bounds: "AasBounds") -> GeneratingVector:
    """Explicit vector when some order's multiplicity exceeds its threshold.

    The block of that order spells out the inverse of the remaining tail as
    a word over a stored vector's entries, pads with inverse pairs, and
    closes with the stored even- or odd-length vector, chosen by parity.
    """
    counts: dict[int, int] = defaultdict(int)
    for m in sig.tail:
        counts[m] += 1
    excess = [(counts[n] - d.tail_threshold, n)
              for n, d in bounds.per_order.items() if counts[n] > d.tail_threshold]
    if not excess:
        raise PreconditionNotMet(
            "no tail multiplicity exceeds its threshold")
    _, n_star = max(excess)
    data = bounds.per_order[n_star]
    t_star = counts[n_star]
    others = [m for m in sig.tail if m != n_star]
    xs = [min(group.elements_of_order(m)) for m in others]
    x = 0
    for t in xs:
        x = group.mul(x, t)
    word = _shortest_word(group, group.inv(x), data.odd_vector)
    m_len = len(word)
    rem_odd = t_star - m_len - data.odd_length
    if rem_odd >= 0 and rem_odd % 2 == 0:
        vector_block = data.odd_vector
        rem = rem_odd
    else:
        rem = t_star - m_len - data.even_length
        if rem < 0 or rem % 2:
            raise AssertionError("parity bookkeeping failed in long-tail build")
        vector_block = data.even_vector
    y = min(group.elements_of_order(n_star))
    fillers = (y, group.inv(y)) * (rem // 2)
    c_raw = tuple(xs) + word + fillers + vector_block
    c = _braid_sort_tail(group, list(c_raw))
    vec = GeneratingVector((0,) * sig.h, (0,) * sig.h, c)
    check = verify(group, sig, vec)
    if not check.ok:
        raise AssertionError(f"long-tail construction failed on {sig.text()}")
    return vec


# ---------------------------------------------------------------------------
# the decision pipeline


STATUS_ACTUAL = "actual"
STATUS_NON_SIGNATURE = "non-signature"
STATUS_NOT_POTENTIAL = "not-potential"
STATUS_UNKNOWN = "unknown"


@dataclass(frozen=True)
class DecisionOutcome:
    """Certificate-backed verdict for one signature."""

    status: str
    method: str | None = None
    vector: GeneratingVector | None = None
    count: int | None = None
    reason: object = None  # ExclusionReason for not-potential
    budget_spent: int | None = None

    @property
    def is_actual(self) -> bool:
        return self.status == STATUS_ACTUAL

    @property
    def is_non_signature(self) -> bool:
        return self.status == STATUS_NON_SIGNATURE


def decide(group: Group, sig: Signature, budget: int = DEFAULT_SEARCH_BUDGET, *,
           context: HomCountContext | None = None, bounds: "AasBounds | None" = None,
           derive_bounds: bool = False,
           lattice_cap: int = DEFAULT_LATTICE_CAP) -> DecisionOutcome:
    """Decide one signature: potentiality, construction, counting, search.

    Every outcome carries its certificate; Unknown is only returned when the
    search budget ran out with neither a witness nor full coverage.
    """
    failure = potentiality_failure(group, sig)
    if failure is not None:
        return DecisionOutcome(STATUS_NOT_POTENTIAL, reason=failure)
    if bounds is None and derive_bounds:
        from . import aas as _aas

        if _aas.is_aas(group).verdict:
            bounds = _aas.compute_bounds(group)
    if bounds is not None:
        if sig.h >= bounds.genus_threshold:
            vec = construct_high_genus(group, sig, bounds)
            return DecisionOutcome(STATUS_ACTUAL, "constructed-high-genus", vec)
        counts: dict[int, int] = defaultdict(int)
        for m in sig.tail:
            counts[m] += 1
        if any(counts[n] > d.tail_threshold
               for n, d in bounds.per_order.items()):
            vec = construct_long_tail(group, sig, bounds)
            return DecisionOutcome(STATUS_ACTUAL, "constructed-long-tail", vec)
    ctx = context if context is not None else _cached_context(group, lattice_cap)
    if ctx is not None and ctx.lattice is not None:
        count = count_generating_tuples(ctx, sig)
        if count == 0:
            return DecisionOutcome(STATUS_NON_SIGNATURE, "counting-zero", count=0)
        try:
            vec = search(group, sig, budget)
        except BudgetExhausted as exc:
            return DecisionOutcome(STATUS_ACTUAL, "counting", None, count,
                                   budget_spent=exc.nodes)
        if vec is None:
            raise AssertionError(
                f"counting found {count} vectors but search found none")
        return DecisionOutcome(STATUS_ACTUAL, "counting", vec, count)
    try:
        vec = search(group, sig, budget)
    except BudgetExhausted as exc:
        return DecisionOutcome(STATUS_UNKNOWN, budget_spent=exc.nodes)
    if vec is not None:
        return DecisionOutcome(STATUS_ACTUAL, "search", vec)
    return DecisionOutcome(STATUS_NON_SIGNATURE, "exhausted-search")


# ---------------------------------------------------------------------------
# the finite non-signature set of an AAS group


@dataclass(frozen=True)
class NonSignatureEntry:
    signature: Signature
    genus: int
    certificate: DecisionOutcome


@dataclass(frozen=True)
class NonSignatureReport:
    """Complete non-signature list with the bounds that delimit the box."""

    entries: tuple[NonSignatureEntry, ...]
    genus_threshold: int
    tail_thresholds: dict[int, int]
    authoritative: bool

    def signatures(self) -> list[Signature]:
        return [e.signature for e in self.entries]


def _box_sweep(ctx: HomCountContext, tabs, orders: list[int],
               thresholds: dict[int, int], h_max: int,
               deadline: float | None) -> dict[tuple[int, ...], int]:
    """All identity-coefficient counts over the residual grid, one subgroup.

    Incremental DP: each grid cell costs one convolution on top of its
    predecessor, so the whole box is filled in amortized constant
    convolutions per cell.
    """
    counts: dict[tuple[int, ...], int] = {}
    sz = tabs.size

    def sweep(level: int, dist: list[int], prefix: tuple[int, ...]):
        if deadline is not None and time.monotonic() > deadline:
            raise BudgetExhausted("non-signature sweep timed out")
        if level == len(orders):
            counts[prefix] = dist[0]
            return
        n = orders[level]
        positions = tabs.order_positions.get(n)
        t_max = thresholds[n] if positions is not None else 0
        d = dist
        for t in range(t_max + 1):
            if t > 0:
                d = kernels.convolve_positions(tabs.mul_flat, sz, d, positions)
            sweep(level + 1, d, prefix + (t,))

    dist: list[int] | None = None
    for h in range(h_max):
        if h == 0:
            start = [0] * sz
            start[0] = 1
        elif h == 1:
            start = list(tabs.commutator_counts)
            dist = start
        else:
            dist = kernels.convolve(tabs.mul_flat, sz, dist,
                                    tabs.commutator_counts)
            start = dist
        sweep(0, start, (h,))
    return counts


def non_signature_set(group: Group, *, budget_seconds: float | None = None,
                      threads: int = 1, bounds: "AasBounds | None" = None,
                      context: HomCountContext | None = None,
                      lattice_cap: int = DEFAULT_LATTICE_CAP) -> NonSignatureReport:
    """The complete finite list of non-signatures of an AAS group.

    Signatures at or above the genus threshold, or with a tail multiplicity
    above its per-order threshold, are actual by construction; the residual
    box is decided exactly by Moebius-inverted counting, batched so each
    grid cell costs one convolution.  Raises NotAas for non-AAS groups
    (naming an infinite non-signature family) and BudgetExhausted on
    timeout.
    """
    from . import aas as _aas

    report = _aas.is_aas(group)
    if not report.verdict:
        families = []
        for n in report.order_set:
            if report.derived_order_witness[n] is None:
                families.append(f"(h;[{n},1]) for every h >= 1")
            elif report.order_generating_witness[n] is None:
                families.append(f"(0;[{n},t]) for every t >= 4")
        raise NotAas(
            f"{group.label} is not AAS; infinite non-signature families: "
            + "; ".join(families))
    if bounds is None:
        bounds = _aas.compute_bounds(group, report=report)
    ctx = context if context is not None else _cached_context(group, lattice_cap)
    if ctx is None or ctx.lattice is None:
        raise LatticeUnavailable(
            f"non-signature enumeration for {group.label} needs the lattice")
    deadline = None if budget_seconds is None else time.monotonic() + budget_seconds
    orders = list(group.order_set())
    thresholds = {n: d.tail_threshold for n, d in bounds.per_order.items()}
    h_max = bounds.genus_threshold
    jobs = [(sub, mu) for sub, mu in zip(ctx.lattice.subgroups,
                                         ctx.lattice.moebius_to_top) if mu != 0]

    def run_job(job):
        sub, _ = job
        return _box_sweep(ctx, ctx.local(sub), orders, thresholds, h_max,
                          deadline)

    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            results = list(pool.map(run_job, jobs))
    else:
        results = [run_job(job) for job in jobs]
    totals: dict[tuple[int, ...], int] = defaultdict(int)
    for (sub, mu), counts in zip(jobs, results):
        for cell, c in counts.items():
            if c:
                totals[cell] += mu * c
    entries = []
    for cell in sorted(totals):
        h, tvec = cell[0], cell[1:]
        tail = []
        for n, t in zip(orders, tvec):
            tail.extend([n] * t)
        sig = Signature(h, tuple(tail))
        if potentiality_failure(group, sig) is not None:
            continue
        count = totals[cell]
        if count < 0:
            raise AssertionError("negative count in residual box")
        if count == 0:
            genus = rh_genus(group.order, sig)
            cert = DecisionOutcome(STATUS_NON_SIGNATURE, "counting-zero", count=0)
            entries.append(NonSignatureEntry(sig, int(genus), cert))
    entries.sort(key=lambda e: (e.genus, e.signature.h, e.signature.tail))
    return NonSignatureReport(tuple(entries), h_max, thresholds, True)
