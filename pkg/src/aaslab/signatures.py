"""Exact signature arithmetic.

A signature is an orbit genus ``h`` plus a sorted tail of branching orders
``m_j >= 2``.  The quotient-genus formula is evaluated in exact rational
arithmetic (``fractions.Fraction``); floating point never enters a decision.
A tuple is a *potential* signature for a group when every tail entry is an
element order, the computed genus is an integer, and that integer is at
least 2.  ``exclusion_reason`` classifies the failing tuples against a
fixed 14-item list of degenerate shapes; its agreement with the arithmetic
test is a tested invariant of the library, not an assumption.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .errors import OrderNotInGroup, ParseError
from .group_core import Group


@dataclass(frozen=True, order=True)
class Signature:
    """Orbit genus plus sorted tail of branching orders."""

    h: int
    tail: tuple[int, ...] = ()

    def __post_init__(self):
        if self.h < 0:
            raise ValueError(f"orbit genus must be >= 0, got {self.h}")
        tail = tuple(sorted(int(m) for m in self.tail))
        for m in tail:
            if m < 2:
                raise ValueError(f"branching orders must be >= 2, got {m}")
        object.__setattr__(self, "tail", tail)

    @property
    def s(self) -> int:
        return len(self.tail)

    def text(self) -> str:
        """Canonical compact form, e.g. '0;2,3,7' or '2;-'."""
        if not self.tail:
            return f"{self.h};-"
        return f"{self.h};{','.join(str(m) for m in self.tail)}"

    def display(self) -> str:
        if not self.tail:
            return f"({self.h}; -)"
        return f"({self.h}; {','.join(str(m) for m in self.tail)})"

    def __str__(self) -> str:
        return self.text()

    @staticmethod
    def parse(text: str) -> "Signature":
        """Parse '<h>;-' or '<h>;<m1>,<m2>,...' (whitespace insignificant)."""
        s = "".join(text.split())
        if ";" not in s:
            raise ParseError("signature needs '<h>;<tail>'", text)
        head, _, rest = s.partition(";")
        try:
            h = int(head)
        except ValueError:
            raise ParseError(f"bad orbit genus {head!r}", text, 0) from None
        if h < 0:
            raise ParseError(f"orbit genus must be >= 0, got {h}", text, 0)
        if rest in ("-", ""):
            return Signature(h, ())
        try:
            tail = tuple(int(x) for x in rest.split(","))
        except ValueError:
            raise ParseError(f"bad tail {rest!r}", text, len(head) + 1) from None
        if any(m < 2 for m in tail):
            raise ParseError("tail entries must be >= 2", text, len(head) + 1)
        return Signature(h, tail)


@dataclass(frozen=True)
class AbbreviatedSignature:
    """Tail grouped as (order, multiplicity) pairs over a full order set."""

    h: int
    pairs: tuple[tuple[int, int], ...]

    def expand(self) -> Signature:
        tail = []
        for n, t in self.pairs:
            tail.extend([n] * t)
        return Signature(self.h, tuple(tail))

    @property
    def s(self) -> int:
        return sum(t for _, t in self.pairs)

    def text(self) -> str:
        body = ",".join(f"[{n},{t}]" for n, t in self.pairs)
        return f"({self.h}; {body})"


@dataclass(frozen=True)
class ExclusionReason:
    """Which degenerate shape a non-potential tuple matches.

    ``item`` is the 1-14 position in the fixed exclusion list, or None when
    the tuple fails for a reason outside the list (a tail order that no
    element has; only produced by the decision pipeline, never by
    ``exclusion_reason`` itself).
    """

    item: int | None
    description: str
    orders: tuple[int, ...] = ()


def rh_genus(group_order: int, sig: Signature) -> Fraction:
    """Exact genus of a covering with the given branching data.

    g = 1 + |G|(h-1) + (|G|/2) * sum_j (1 - 1/m_j), as a Fraction.
    """
    if group_order < 1:
        raise ValueError("group order must be positive")
    total = Fraction(0)
    for m in sig.tail:
        total += 1 - Fraction(1, m)
    return 1 + group_order * (sig.h - 1) + Fraction(group_order, 2) * total


def is_potential(group: Group, sig: Signature) -> bool:
    """Arithmetic potentiality: tail orders realized, genus integral, >= 2."""
    order_set = set(group.order_set())
    if any(m not in order_set for m in sig.tail):
        return False
    g = rh_genus(group.order, sig)
    return g.denominator == 1 and g >= 2


def _two_part_count(group: Group, tail: tuple[int, ...]) -> int:
    k = group.two_part
    return sum(1 for m in tail if m % k == 0)


def exclusion_reason(group: Group, sig: Signature) -> ExclusionReason | None:
    """Match a tuple against the 14 degenerate shapes; None iff potential.

    Items 1-13 are genus-starved shapes of (h, tail) alone; item 14 is the
    parity obstruction: for even |G| with full 2-part k, an odd number of
    tail entries divisible by k makes the genus non-integral.
    """
    order_set = set(group.order_set())
    for m in sig.tail:
        if m not in order_set:
            raise OrderNotInGroup(
                f"order {m} is not an element order of {group.label}")
    h, tail = sig.h, sig.tail
    if h == 0:
        s = len(tail)
        if s == 0:
            return ExclusionReason(1, "(0;-)")
        if s == 1:
            return ExclusionReason(2, "(0;[m,1])", tail)
        if s == 2:
            if tail[0] == tail[1]:
                return ExclusionReason(3, "(0;[m,2])", tail)
            return ExclusionReason(4, "(0;[m,1],[m',1])", tail)
        if s == 3:
            if tail[0] == 2 and tail[1] == 2:
                return ExclusionReason(5, "(0;2,2,m)", tail)
            fixed = {
                (2, 3, 3): 6,
                (2, 3, 4): 7,
                (2, 3, 5): 8,
                (2, 4, 4): 9,
                (3, 3, 3): 10,
                (2, 3, 6): 11,
            }
            item = fixed.get(tail)
            if item is not None:
                return ExclusionReason(item, f"(0;{','.join(map(str, tail))})",
                                       tail)
        if tail == (2, 2, 2, 2):
            return ExclusionReason(12, "(0;[2,4])", tail)
    if h == 1 and not tail:
        return ExclusionReason(13, "(1;-)")
    if group.order % 2 == 0 and _two_part_count(group, tail) % 2 == 1:
        k = group.two_part
        return ExclusionReason(
            14, f"odd number of tail orders divisible by the full 2-part {k}",
            tuple(m for m in tail if m % k == 0))
    return None


def potentiality_failure(group: Group, sig: Signature) -> ExclusionReason | None:
    """Why a tuple fails to be potential, or None when it is potential.

    Unlike ``exclusion_reason`` this also covers tail orders outside the
    group's order set (reported with ``item=None``).
    """
    order_set = set(group.order_set())
    missing = tuple(sorted({m for m in sig.tail if m not in order_set}))
    if missing:
        return ExclusionReason(
            None, f"no element of order {', '.join(map(str, missing))}",
            missing)
    return exclusion_reason(group, sig)


def abbreviate(group: Group, sig: Signature) -> AbbreviatedSignature:
    """Group the tail as multiplicity pairs against the full order set."""
    order_set = group.order_set()
    allowed = set(order_set)
    for m in sig.tail:
        if m not in allowed:
            raise OrderNotInGroup(
                f"order {m} is not an element order of {group.label}")
    counts = {n: 0 for n in order_set}
    for m in sig.tail:
        counts[m] += 1
    return AbbreviatedSignature(sig.h, tuple((n, counts[n]) for n in order_set))


def enumerate_potential_by_genus(group: Group, genus: int) -> list[Signature]:
    """All potential signatures of exactly the given genus, (h, tail)-sorted.

    Exhaustive: for each feasible h the tail sum of (1 - 1/m) is pinned
    exactly, and tails over the order set are enumerated by bounded search
    on multiplicities.
    """
    if genus < 2:
        raise ValueError("genus must be >= 2")
    order_set = group.order_set()
    n_g = group.order
    out: list[Signature] = []
    h_max = (genus - 1) // n_g + 1
    for h in range(h_max + 1):
        target = Fraction(2 * (genus - 1 - n_g * (h - 1)), n_g)
        if target < 0:
            continue
        tails: list[tuple[int, ...]] = []

        def extend(idx: int, remaining: Fraction, prefix: tuple[int, ...]):
            if remaining == 0:
                tails.append(prefix)
                return
            if idx == len(order_set):
                return
            n = order_set[idx]
            term = 1 - Fraction(1, n)
            max_count = int(remaining / term)
            for count in range(max_count + 1):
                extend(idx + 1, remaining - count * term,
                       prefix + (n,) * count)

        extend(0, target, ())
        for tail in tails:
            sig = Signature(h, tail)
            if is_potential(group, sig):
                out.append(sig)
    out.sort()
    return out
