"""The almost-all-signatures (AAS) decision and its effective constants.

A group acts with almost all signatures exactly when (1) its derived
subgroup contains an element of every order in the order set, and (2) for
every such order the group is generated by its elements of that order.
``is_aas`` decides both conditions with explicit witnesses;
``compute_bounds`` turns the finiteness proof into effective constants: a
genus threshold above which every potential signature is realized by an
explicit vector, and per-order tail thresholds beyond which a long tail can
always be completed.
"""

from __future__ import annotations

import weakref
from dataclasses import dataclass, field

from .errors import NoOddProduct, NotAas, OrderNotInGroup
from .group_core import CommutatorWidth, Group, prime_power

DEFAULT_ODD_PRODUCT_CAP = 9

CLASS_ABELIAN = "abelian"
CLASS_P_GROUP = "non-abelian p-group"
CLASS_PERFECT = "perfect"
CLASS_OTHER = "other"

_REPORT_CACHE: "weakref.WeakKeyDictionary[Group, AasReport]" = weakref.WeakKeyDictionary()
_BOUNDS_CACHE: "weakref.WeakKeyDictionary[Group, AasBounds]" = weakref.WeakKeyDictionary()


@dataclass(frozen=True)
class AasReport:
    """Verdict plus per-order witnesses for the two AAS conditions.

    ``derived_order_witness[n]`` is an element of order n inside the derived
    subgroup (or None); ``order_generating_witness[n]`` is a small set of
    order-n elements that generates the group (or None).
    """

    verdict: bool
    classification: str
    order_set: tuple[int, ...]
    derived_order_witness: dict[int, int | None]
    order_generating_witness: dict[int, tuple[int, ...] | None]
    failure_notes: tuple[str, ...]


@dataclass(frozen=True)
class OrderTailData:
    """Stored tail realizations for one element order.

    ``even_vector`` is an even-length tail of order-n elements with product
    e whose entries generate the group; ``odd_vector`` appends an odd-length
    identity product to it.  The cover radii bound the word length needed to
    reach any group element over the vector's entries and their inverses.
    """

    order: int
    even_vector: tuple[int, ...]
    odd_vector: tuple[int, ...]
    identity_product: tuple[int, ...]
    even_cover_radius: int
    odd_cover_radius: int

    @property
    def even_length(self) -> int:
        return len(self.even_vector)

    @property
    def odd_length(self) -> int:
        return len(self.odd_vector)

    @property
    def tail_threshold(self) -> int:
        return max(self.odd_length + self.odd_cover_radius,
                   self.even_length + self.even_cover_radius)


@dataclass(frozen=True)
class AasBounds:
    """Effective constants from the AAS finiteness argument.

    Any potential signature with orbit genus >= ``genus_threshold``, or with
    some order's tail multiplicity above its ``tail_threshold``, is realized
    constructively; the rest form the finite residual box.
    """

    generating_set: tuple[int, ...]
    width: int
    per_order: dict[int, OrderTailData]
    genus_threshold: int
    max_vector_length: int
    max_cover_radius: int
    global_tail_threshold: int
    width_witness: CommutatorWidth = field(repr=False)

    @property
    def gen_count(self) -> int:
        return len(self.generating_set)


def classify(group: Group) -> str:
    """abelian / non-abelian p-group / perfect / other."""
    derived = group.derived_subgroup()
    if derived.size == group.order:
        return CLASS_PERFECT
    if derived.size == 1:
        return CLASS_ABELIAN
    if prime_power(group.order) is not None:
        return CLASS_P_GROUP
    return CLASS_OTHER


def orders_in_derived(group: Group) -> dict[int, int | None]:
    """For each order in the order set, a minimal derived-subgroup witness."""
    derived = group.derived_subgroup()
    out: dict[int, int | None] = {}
    wanted = set(group.order_set())
    for n in sorted(wanted):
        out[n] = None
    for x in derived.elements:
        n = group.element_orders[x]
        if n in wanted and out[n] is None:
            out[n] = x
    return out


def generated_by_order(group: Group, n: int) -> tuple[int, ...] | None:
    """Greedy small generating set of order-n elements, or None.

    Greedy rule: repeatedly add the order-n element whose addition grows
    the closure the most, ties broken by index.  Candidates generating the
    same cyclic subgroup are collapsed to their least member, which leaves
    the greedy choices unchanged.
    """
    if n not in group.order_set():
        raise OrderNotInGroup(
            f"order {n} is not an element order of {group.label}")
    reps: list[int] = []
    seen_cyclic: set[int] = set()
    for x in group.elements_of_order(n):
        _, m = group._closure((x,))
        if m not in seen_cyclic:
            seen_cyclic.add(m)
            reps.append(x)
    chosen: list[int] = []
    mask = 1
    size = 1
    while size < group.order:
        best = None
        best_size = size
        best_mask = mask
        for x in reps:
            if mask >> x & 1:
                continue
            members, ext_mask = group._closure(tuple(chosen) + (x,))
            if len(members) > best_size:
                best, best_size, best_mask = x, len(members), ext_mask
                if best_size == group.order:
                    break
        if best is None:
            return None  # every order-n element already lies in the closure
        chosen.append(best)
        mask = best_mask
        size = best_size
    return tuple(chosen)


def is_aas(group: Group) -> AasReport:
    """Decide the AAS property with witnesses for both conditions."""
    cached = _REPORT_CACHE.get(group)
    if cached is not None:
        return cached
    order_set = group.order_set()
    cond1 = orders_in_derived(group)
    cond2 = {n: generated_by_order(group, n) for n in order_set}
    notes = []
    for n in order_set:
        if cond1[n] is None:
            notes.append(f"derived subgroup has no element of order {n}")
        if cond2[n] is None:
            notes.append(f"not generated by its elements of order {n}")
    report = AasReport(
        verdict=not notes,
        classification=classify(group),
        order_set=order_set,
        derived_order_witness=cond1,
        order_generating_witness=cond2,
        failure_notes=tuple(notes),
    )
    _REPORT_CACHE[group] = report
    return report


def odd_identity_product(group: Group, n: int, *,
                         max_length: int = DEFAULT_ODD_PRODUCT_CAP) -> tuple[int, ...]:
    """Shortest odd-length sequence of order-n elements with product e.

    Parity-tagged BFS over states (element, parity); deterministic because
    letters are tried in index order.  Raises NoOddProduct past the length
    cap, diagnosing which AAS condition fails at n when one does.
    """
    if n not in group.order_set():
        raise OrderNotInGroup(
            f"order {n} is not an element order of {group.label}")
    letters = group.elements_of_order(n)
    # dist keyed by (element, parity); parity 1 = odd-length words
    pred: dict[tuple[int, int], tuple[tuple[int, int], int]] = {}
    start = (0, 0)
    seen = {start}
    frontier = [start]
    depth = 0
    while frontier and depth < max_length:
        depth += 1
        nxt = []
        for state in frontier:
            elem, parity = state
            for letter in letters:
                new = (group.mul(elem, letter), parity ^ 1)
                if new in seen:
                    continue
                seen.add(new)
                pred[new] = (state, letter)
                if new == (0, 1):
                    word = []
                    cur = new
                    while cur != start:
                        prev, letter = pred[cur]
                        word.append(letter)
                        cur = prev
                    word.reverse()
                    return tuple(word)
                nxt.append(new)
        frontier = nxt
    diagnosis = ""
    report = is_aas(group)
    if report.derived_order_witness.get(n) is None:
        diagnosis = f"; derived subgroup has no element of order {n}"
    elif report.order_generating_witness.get(n) is None:
        diagnosis = f"; not generated by its elements of order {n}"
    raise NoOddProduct(
        f"no odd identity product of order-{n} elements up to length "
        f"{max_length}{diagnosis}")


def _word_cover_radius(group: Group, vector: tuple[int, ...]) -> int:
    """Least L such that every element is a word of length <= L over the
    vector's entries and their inverses."""
    letters = sorted({x for v in vector for x in (v, group.inv(v))})
    dist = {0: 0}
    frontier = [0]
    radius = 0
    while frontier:
        nxt = []
        for y in frontier:
            for letter in letters:
                z = group.mul(y, letter)
                if z not in dist:
                    dist[z] = dist[y] + 1
                    nxt.append(z)
        frontier = nxt
        if frontier:
            radius += 1
    if len(dist) != group.order:
        raise ValueError("vector entries do not generate the group")
    return radius


def _shorten_even_vector(group: Group, n: int, base: tuple[int, ...],
                         search_budget: int) -> tuple[int, ...]:
    """Bounded search for a shorter even tail realization, keeping validity."""
    from . import genvec
    from .signatures import Signature, is_potential

    for length in range(4, len(base), 2):
        sig = Signature(0, (n,) * length)
        if not is_potential(group, sig):
            continue
        try:
            found = genvec.search(group, sig, budget=search_budget)
        except Exception:
            continue
        if found is not None:
            return found.c
    return base


def compute_bounds(group: Group, *, report: AasReport | None = None,
                   shorten_budget: int = 200_000) -> AasBounds:
    """Effective finiteness constants for an AAS group.

    The per-order even vector starts from the greedy generating witness
    followed by its inverses (reversed, so the product telescopes to e) and
    is then shortened by a bounded search over smaller even lengths; the odd
    vector concatenates the shortest odd identity product onto it.
    """
    cached = _BOUNDS_CACHE.get(group)
    if cached is not None:
        return cached
    if report is None:
        report = is_aas(group)
    if not report.verdict:
        raise NotAas(f"{group.label} is not AAS: " + "; ".join(report.failure_notes))
    from . import genvec
    from .signatures import Signature

    order_set = group.order_set()
    width_data = group.commutator_width()
    gen_set = report.order_generating_witness[order_set[0]] if order_set else ()
    if not order_set or len(group.generators) < len(gen_set):
        gen_set = group.generators
    per_order: dict[int, OrderTailData] = {}
    for n in order_set:
        witness = report.order_generating_witness[n]
        base = witness + tuple(group.inv(w) for w in reversed(witness))
        even_vec = _shorten_even_vector(group, n, base, shorten_budget)
        identity_product = odd_identity_product(group, n)
        odd_vec = even_vec + identity_product
        data = OrderTailData(
            order=n,
            even_vector=even_vec,
            odd_vector=odd_vec,
            identity_product=identity_product,
            even_cover_radius=_word_cover_radius(group, even_vec),
            odd_cover_radius=_word_cover_radius(group, odd_vec),
        )
        for vec in (even_vec, odd_vec):
            check = genvec.verify(group, Signature(0, (n,) * len(vec)),
                                  genvec.GeneratingVector((), (), vec))
            if not check.ok:
                raise AssertionError(
                    f"stored tail realization failed verification at order {n}")
        per_order[n] = data
    lengths = [d.even_length for d in per_order.values()]
    lengths += [d.odd_length for d in per_order.values()]
    radii = [d.even_cover_radius for d in per_order.values()]
    radii += [d.odd_cover_radius for d in per_order.values()]
    max_len = max(lengths, default=0)
    max_rad = max(radii, default=0)
    bounds = AasBounds(
        generating_set=tuple(gen_set),
        width=width_data.width,
        per_order=per_order,
        genus_threshold=len(gen_set) + width_data.width,
        max_vector_length=max_len,
        max_cover_radius=max_rad,
        global_tail_threshold=len(order_set) * (max_len + max_rad),
        width_witness=width_data,
    )
    _BOUNDS_CACHE[group] = bounds
    return bounds
