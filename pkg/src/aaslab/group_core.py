"""Concrete finite groups as indexed multiplication structures.

Everything downstream works with element indices ``0..|G|-1``; index 0 is
always the identity.  Construction is deterministic: elements are discovered
by breadth-first closure from the spec's generators (in spec order), with
ties inside a BFS level broken by a canonical per-construction encoding
(permutation image tuples, matrix entry tuples, coordinate tuples).  Two
builds of the same spec are therefore index-identical.

Groups of order up to ``DENSE_TABLE_LIMIT`` carry a dense multiplication
table; larger groups keep their concrete element catalogue and compute
products on demand, memoizing full rows only when explicitly requested.
All structures are immutable after construction and safe to share across
threads (memoized rows are filled idempotently).
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass, field

from .errors import (
    InvalidSpec,
    LatticeCapExceeded,
    OrderCapExceeded,
    ParseError,
)

DEFAULT_ORDER_CAP = 10_000
DENSE_TABLE_LIMIT = 3_000
DEFAULT_LATTICE_CAP = 500


# ---------------------------------------------------------------------------
# small number-theory helpers


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n < 4:
        return True
    if n % 2 == 0:
        return False
    d = 3
    while d * d <= n:
        if n % d == 0:
            return False
        d += 2
    return True


def factorize(n: int) -> dict[int, int]:
    """Prime factorization as {prime: exponent}."""
    out: dict[int, int] = {}
    d = 2
    while d * d <= n:
        while n % d == 0:
            out[d] = out.get(d, 0) + 1
            n //= d
        d += 1 if d == 2 else 2
    if n > 1:
        out[n] = out.get(n, 0) + 1
    return out


def prime_power(n: int) -> tuple[int, int] | None:
    """(p, k) with n = p**k, or None if n is not a prime power."""
    f = factorize(n)
    if len(f) != 1:
        return None
    [(p, k)] = f.items()
    return p, k


def _lcm(a: int, b: int) -> int:
    return a * b // math.gcd(a, b)


# ---------------------------------------------------------------------------
# finite fields small enough for the matrix constructors


class SmallField:
    """GF(p^k) with elements encoded as integers in [0, q).

    Elements are polynomials over F_p encoded base p (little-endian digits);
    multiplication reduces by the lexicographically smallest monic
    irreducible of degree k, so the encoding is deterministic.
    """

    def __init__(self, p: int, k: int):
        if not is_prime(p) or k < 1:
            raise InvalidSpec(f"not a prime power: {p}^{k}")
        self.p = p
        self.k = k
        self.q = p**k
        if self.q > 64:
            raise InvalidSpec(f"field size {self.q} above the matrix-group cap")
        if k == 1:
            self.add = [[(a + b) % p for b in range(p)] for a in range(p)]
            self.mul = [[(a * b) % p for b in range(p)] for a in range(p)]
        else:
            modulus = self._find_irreducible(p, k)
            self.add = [
                [self._enc([(x + y) % p for x, y in zip(self._dec(a), self._dec(b))])
                 for b in range(self.q)]
                for a in range(self.q)
            ]
            self.mul = [
                [self._poly_mul(a, b, modulus) for b in range(self.q)]
                for a in range(self.q)
            ]
        self.neg = [self.sub_table(a) for a in range(self.q)]

    def sub_table(self, a: int) -> int:
        # additive inverse
        for b in range(self.q):
            if self.add[a][b] == 0:
                return b
        raise AssertionError("no additive inverse")

    def _dec(self, a: int) -> list[int]:
        digits = []
        for _ in range(self.k):
            a, r = divmod(a, self.p)
            digits.append(r)
        return digits

    def _enc(self, digits: list[int]) -> int:
        out = 0
        for d in reversed(digits):
            out = out * self.p + d
        return out

    def _poly_mul(self, a: int, b: int, modulus: list[int]) -> int:
        p, k = self.p, self.k
        da, db = self._dec(a), self._dec(b)
        prod = [0] * (2 * k - 1)
        for i, x in enumerate(da):
            if x:
                for j, y in enumerate(db):
                    prod[i + j] = (prod[i + j] + x * y) % p
        # reduce by the monic modulus of degree k
        for top in range(2 * k - 2, k - 1, -1):
            c = prod[top]
            if c:
                prod[top] = 0
                for j in range(k):
                    prod[top - k + j] = (prod[top - k + j] - c * modulus[j]) % p
        return self._enc(prod[:k])

    @staticmethod
    def _find_irreducible(p: int, k: int) -> list[int]:
        """Lowest k coefficients of the smallest monic irreducible of degree k."""

        def poly_from(enc: int, deg: int) -> list[int]:
            digits = []
            for _ in range(deg):
                enc, r = divmod(enc, p)
                digits.append(r)
            return digits

        def divides(div: list[int], target: list[int]) -> bool:
            # both monic; long division over F_p, True when remainder is zero
            rem = list(target)
            dd = len(div) - 1
            while len(rem) - 1 >= dd and any(rem):
                while rem and rem[-1] == 0:
                    rem.pop()
                if len(rem) - 1 < dd:
                    break
                c = rem[-1]
                shift = len(rem) - 1 - dd
                for j, coef in enumerate(div):
                    rem[shift + j] = (rem[shift + j] - c * coef) % p
            return not any(rem)

        for enc in range(p**k):
            cand = poly_from(enc, k) + [1]  # monic degree k
            if cand[0] == 0:
                continue  # reducible: divisible by x
            ok = True
            for d in range(1, k // 2 + 1):
                for denc in range(p**d):
                    div = poly_from(denc, d) + [1]
                    if divides(div, cand):
                        ok = False
                        break
                if not ok:
                    break
            if ok:
                return cand[:k]
        raise AssertionError(f"no irreducible of degree {k} over F_{p}")


# ---------------------------------------------------------------------------
# group specs and their grammar


_FAMILY_KINDS = (
    "alternating", "symmetric", "cyclic", "dihedral", "quaternion",
    "elementary-abelian", "sl", "psl", "heisenberg", "metacyclic",
    "perm", "product",
)


@dataclass(frozen=True)
class GroupSpec:
    """A parsed description of a finite group.

    ``kind`` is one of the family names; ``params`` holds the family
    parameters (for ``perm``: the degree followed by generator image
    tuples; for ``product``: the two factor specs).
    """

    kind: str
    params: tuple = ()

    def __post_init__(self):
        if self.kind not in _FAMILY_KINDS:
            raise InvalidSpec(f"unknown group family {self.kind!r}")

    # -- rendering ---------------------------------------------------------

    def text(self) -> str:
        """Canonical spec text (parse/render round-trips)."""
        k, p = self.kind, self.params
        if k == "alternating":
            return f"A{p[0]}"
        if k == "symmetric":
            return f"S{p[0]}"
        if k == "cyclic":
            return f"C{p[0]}"
        if k == "dihedral":
            return f"D{p[0]}"
        if k == "quaternion":
            return f"Q{p[0]}"
        if k == "elementary-abelian":
            return f"EA({p[0]},{p[1]})"
        if k == "sl":
            return f"SL(2,{p[0]})"
        if k == "psl":
            return f"PSL(2,{p[0]})"
        if k == "heisenberg":
            return f"Heis({p[0]})"
        if k == "metacyclic":
            return f"MC({p[0]},{p[1]},{p[2]},{p[3]})"
        if k == "perm":
            gens = ";".join(_cycles_text(g) for g in p[1:])
            return f"Perm[{gens}]"
        return f"{p[0].text()}x{p[1].text()}"

    # -- validation --------------------------------------------------------

    def declared_order(self) -> int | None:
        """Order of the denoted group, or None when only closure can tell."""
        k, p = self.kind, self.params
        if k == "alternating":
            n = p[0]
            return 1 if n <= 2 else math.factorial(n) // 2
        if k == "symmetric":
            return math.factorial(p[0])
        if k == "cyclic":
            return p[0]
        if k == "dihedral":
            return 2 * p[0]
        if k == "quaternion":
            return p[0]
        if k == "elementary-abelian":
            return p[0] ** p[1]
        if k == "sl":
            q = p[0]
            return q * (q * q - 1)
        if k == "psl":
            q = p[0]
            return q * (q * q - 1) // math.gcd(2, q - 1)
        if k == "heisenberg":
            return p[0] ** 3
        if k == "metacyclic":
            return p[0] ** (p[1] + p[2])
        if k == "perm":
            return None
        a = p[0].declared_order()
        b = p[1].declared_order()
        return None if a is None or b is None else a * b

    def validate(self, *, max_order: int = DEFAULT_ORDER_CAP) -> None:
        """Raise InvalidSpec / OrderCapExceeded on bad parameters."""
        k, p = self.kind, self.params
        if k in ("alternating", "symmetric", "cyclic", "dihedral"):
            if p[0] < 1:
                raise InvalidSpec(f"{self.text()}: parameter must be >= 1")
        elif k == "quaternion":
            pw = prime_power(p[0])
            if pw is None or pw[0] != 2 or p[0] < 8:
                raise InvalidSpec(
                    f"{self.text()}: order must be a power of 2, at least 8")
        elif k == "elementary-abelian":
            if not is_prime(p[0]) or p[1] < 1:
                raise InvalidSpec(f"{self.text()}: need a prime and a rank >= 1")
        elif k in ("sl", "psl"):
            if prime_power(p[0]) is None:
                raise InvalidSpec(f"{self.text()}: {p[0]} is not a prime power")
        elif k == "heisenberg":
            if not is_prime(p[0]):
                raise InvalidSpec(f"{self.text()}: {p[0]} is not prime")
        elif k == "metacyclic":
            pr, a, b, t = p
            if not is_prime(pr) or a < 1 or b < 1:
                raise InvalidSpec(f"{self.text()}: need a prime and exponents >= 1")
            if not (1 <= t < pr**a) or t % pr == 0:
                raise InvalidSpec(f"{self.text()}: twist must be a unit mod {pr}^{a}")
            if pow(t, pr**b, pr**a) != 1:
                raise InvalidSpec(
                    f"{self.text()}: twist order must divide {pr}^{b} mod {pr}^{a}")
        elif k == "perm":
            degree = p[0]
            for g in p[1:]:
                flat = [pt for cyc in g for pt in cyc]
                if len(set(flat)) != len(flat):
                    raise InvalidSpec(f"{self.text()}: repeated point in a generator")
                if flat and (min(flat) < 1 or max(flat) > degree):
                    raise InvalidSpec(f"{self.text()}: point out of range")
        else:  # product
            p[0].validate(max_order=max_order)
            p[1].validate(max_order=max_order)
        declared = self.declared_order()
        if declared is not None and declared > max_order:
            raise OrderCapExceeded(
                f"{self.text()} has order {declared} > cap {max_order}")


def _cycles_text(cycles: tuple[tuple[int, ...], ...]) -> str:
    return "".join("(" + ",".join(str(x) for x in cyc) + ")" for cyc in cycles)


def _split_product(s: str) -> list[str]:
    """Split on top-level 'x' (product operator), respecting (), []."""
    parts, depth, start = [], 0, 0
    for i, ch in enumerate(s):
        if ch in "([":
            depth += 1
        elif ch in ")]":
            depth -= 1
        elif ch == "x" and depth == 0:
            parts.append(s[start:i])
            start = i + 1
    parts.append(s[start:])
    return parts


_ATOM_RES = [
    (re.compile(r"^A(\d+)$"), "alternating"),
    (re.compile(r"^S(\d+)$"), "symmetric"),
    (re.compile(r"^C(\d+)$"), "cyclic"),
    (re.compile(r"^D(\d+)$"), "dihedral"),
    (re.compile(r"^Q(\d+)$"), "quaternion"),
    (re.compile(r"^SL\(2,(\d+)\)$"), "sl"),
    (re.compile(r"^PSL\(2,(\d+)\)$"), "psl"),
    (re.compile(r"^Heis\((\d+)\)$"), "heisenberg"),
    (re.compile(r"^MC\((\d+),(\d+),(\d+),(\d+)\)$"), "metacyclic"),
    (re.compile(r"^EA\((\d+),(\d+)\)$"), "elementary-abelian"),
]

_CYCLE_RE = re.compile(r"\(([\d,]*)\)")


def parse_group_spec(text: str) -> GroupSpec:
    """Parse the group-spec grammar.

    Grammar (whitespace insignificant): ``A<n>``, ``S<n>``, ``C<n>``,
    ``D<n>`` (dihedral of order 2n), ``Q<2^k>``, ``SL(2,<q>)``,
    ``PSL(2,<q>)``, ``Heis(<p>)``, ``MC(<p>,<a>,<b>,<t>)``, ``EA(<p>,<k>)``,
    ``Perm[<cycles>;<cycles>;...]`` with comma-separated 1-based points,
    and left-associative products with ``x``.
    """
    stripped = re.sub(r"\s+", "", text)
    if not stripped:
        raise ParseError("empty group spec", text)
    parts = _split_product(stripped)
    specs = []
    offset = 0
    for part in parts:
        if not part:
            raise ParseError("empty product factor", stripped, offset)
        specs.append(_parse_atom(part, stripped, offset))
        offset += len(part) + 1
    out = specs[0]
    for nxt in specs[1:]:
        out = GroupSpec("product", (out, nxt))
    out.validate()
    return out


def _parse_atom(part: str, whole: str, offset: int) -> GroupSpec:
    for rx, kind in _ATOM_RES:
        m = rx.match(part)
        if m:
            return GroupSpec(kind, tuple(int(x) for x in m.groups()))
    if part.startswith("Perm[") and part.endswith("]"):
        inner = part[5:-1]
        gens = []
        for gen_text in inner.split(";"):
            consumed = "".join(_CYCLE_RE.findall(gen_text))
            if _CYCLE_RE.sub("", gen_text) != "":
                raise ParseError("malformed cycle list", whole, offset)
            cycles = []
            for cyc in _CYCLE_RE.findall(gen_text):
                if not cyc:
                    continue
                try:
                    points = tuple(int(x) for x in cyc.split(","))
                except ValueError:
                    raise ParseError("malformed cycle", whole, offset) from None
                cycles.append(points)
            gens.append(tuple(cycles))
        if not gens or all(not g for g in gens):
            raise ParseError("Perm[...] needs at least one cycle", whole, offset)
        degree = max((pt for g in gens for cyc in g for pt in cyc), default=1)
        return GroupSpec("perm", (degree, *gens))
    raise ParseError(f"unrecognized group spec {part!r}", whole, offset)


# ---------------------------------------------------------------------------
# element types: Subgroup, ConjugacyData, CommutatorWidth, SubgroupLattice


@dataclass(frozen=True)
class Subgroup:
    """Subgroup given by its sorted element list, membership bitmask, and a
    witness generator list."""

    elements: tuple[int, ...]
    mask: int
    generators: tuple[int, ...]

    @property
    def size(self) -> int:
        return len(self.elements)

    def contains(self, i: int) -> bool:
        return bool(self.mask >> i & 1)

    def contains_all(self, mask: int) -> bool:
        return mask & ~self.mask == 0


@dataclass(frozen=True)
class ConjugacyData:
    """Conjugation-orbit partition; representatives are class minima."""

    class_of: tuple[int, ...]
    classes: tuple[tuple[int, ...], ...]
    representatives: tuple[int, ...]

    def class_size_of(self, i: int) -> int:
        return len(self.classes[self.class_of[i]])


@dataclass(frozen=True)
class CommutatorWidth:
    """Minimal-commutator-count layering of the derived subgroup.

    ``layer_of[x]`` is the least w with x a product of w commutators (0 only
    for the identity); ``width`` is the maximum over the derived subgroup.
    ``factorization(x)`` returns a witness list of pairs (c, d) whose
    commutators multiply, in order, to x.
    """

    width: int
    layer_of: dict[int, int]
    _pred: dict[int, tuple[int, int]] = field(repr=False)
    _pair_of: dict[int, tuple[int, int]] = field(repr=False)

    def factorization(self, x: int) -> tuple[tuple[int, int], ...]:
        if x not in self.layer_of:
            raise KeyError(f"element {x} is not in the derived subgroup")
        steps: list[tuple[int, int]] = []
        while x != 0:
            prev, comm = self._pred[x]
            steps.append(self._pair_of[comm])
            x = prev
        steps.reverse()
        return tuple(steps)


@dataclass(frozen=True)
class SubgroupLattice:
    """All subgroups with containment and the Moebius weights to the top."""

    subgroups: tuple[Subgroup, ...]
    moebius_to_top: tuple[int, ...]
    supersets: tuple[tuple[int, ...], ...]  # strict supersets, by index

    def __len__(self) -> int:
        return len(self.subgroups)

    def leq(self, i: int, j: int) -> bool:
        return self.subgroups[j].contains_all(self.subgroups[i].mask)

    @property
    def top_index(self) -> int:
        return max(range(len(self.subgroups)),
                   key=lambda i: self.subgroups[i].size)

    @property
    def bottom_index(self) -> int:
        return min(range(len(self.subgroups)),
                   key=lambda i: self.subgroups[i].size)


# ---------------------------------------------------------------------------
# the Group type


class Group:
    """A finite group on indices 0..order-1; index 0 is the identity."""

    def __init__(self, *, order: int, label: str, generators: tuple[int, ...],
                 element_names: list[str], inverses: list[int],
                 element_orders: list[int], mul_table: list[list[int]] | None,
                 mul_fn=None):
        if mul_table is None and mul_fn is None:
            raise ValueError("need a multiplication table or function")
        self.order = order
        self.label = label
        self.generators = tuple(generators)
        self.element_names = element_names
        self.inverses = inverses
        self.element_orders = element_orders
        self.exponent = 1
        for d in element_orders:
            self.exponent = _lcm(self.exponent, d)
        self.two_part = 1
        while order % (self.two_part * 2) == 0:
            self.two_part *= 2
        self._table = mul_table
        self._mul_fn = mul_fn
        self._rows: dict[int, list[int]] = {}
        self._order_set: tuple[int, ...] | None = None
        self._derived: Subgroup | None = None
        self._conjugacy: ConjugacyData | None = None
        self._width: CommutatorWidth | None = None
        self._lattice: SubgroupLattice | None = None

    def __repr__(self) -> str:
        return f"Group({self.label}, order={self.order})"

    # -- basic arithmetic ----------------------------------------------------

    def mul(self, i: int, j: int) -> int:
        t = self._table
        if t is not None:
            return t[i][j]
        r = self._rows.get(i)
        if r is not None:
            return r[j]
        return self._mul_fn(i, j)

    def row(self, i: int) -> list[int]:
        """Full product row, memoized for table-less groups."""
        if self._table is not None:
            return self._table[i]
        r = self._rows.get(i)
        if r is None:
            f = self._mul_fn
            r = [f(i, j) for j in range(self.order)]
            self._rows[i] = r
        return r

    def inv(self, i: int) -> int:
        return self.inverses[i]

    def power(self, i: int, e: int) -> int:
        if e < 0:
            return self.power(self.inverses[i], -e)
        acc = 0
        base = i
        while e:
            if e & 1:
                acc = self.mul(acc, base)
            base = self.mul(base, base)
            e >>= 1
        return acc

    def commutator(self, a: int, b: int) -> int:
        return self.mul(self.mul(self.inverses[a], self.inverses[b]),
                        self.mul(a, b))

    def conjugate(self, x: int, g: int) -> int:
        """g^{ -1} x g."""
        return self.mul(self.mul(self.inverses[g], x), g)

    def name(self, i: int) -> str:
        return self.element_names[i]

    # -- derived data ----------------------------------------------------------

    def order_set(self) -> tuple[int, ...]:
        """Ascending orders of the non-identity elements."""
        if self._order_set is None:
            self._order_set = tuple(sorted(set(self.element_orders[1:])))
        return self._order_set

    @property
    def is_abelian(self) -> bool:
        return all(self.mul(a, b) == self.mul(b, a)
                   for a in self.generators for b in self.generators)

    @property
    def is_perfect(self) -> bool:
        return self.derived_subgroup().size == self.order

    def elements_of_order(self, n: int) -> list[int]:
        return [x for x in range(self.order) if self.element_orders[x] == n]

    # -- subgroup machinery ------------------------------------------------

    def generated_subgroup(self, seeds) -> Subgroup:
        seeds = tuple(seeds)
        for s in seeds:
            if not 0 <= s < self.order:
                raise IndexError(f"element index {s} out of range")
        members, mask = self._closure(seeds)
        return Subgroup(tuple(sorted(members)), mask, seeds)

    def _closure(self, seeds) -> tuple[list[int], int]:
        """Closure of {e} u seeds under right multiplication by seeds."""
        members = [0]
        mask = 1
        for s in seeds:
            if not mask >> s & 1:
                mask |= 1 << s
                members.append(s)
        i = 0
        while i < len(members):
            m = members[i]
            i += 1
            for s in seeds:
                p = self.mul(m, s)
                if not mask >> p & 1:
                    mask |= 1 << p
                    members.append(p)
        return members, mask

    def derived_subgroup(self) -> Subgroup:
        """Smallest subgroup containing every commutator.

        Computed as the normal closure of the generator commutators, which
        equals the closure of the full commutator set.
        """
        if self._derived is not None:
            return self._derived
        gens = self.generators
        seed = sorted({self.commutator(a, b) for a in gens for b in gens} - {0})
        work = list(seed)
        members, mask = self._closure(work)
        while True:
            escapees = []
            for x in members:
                for g in gens:
                    y = self.conjugate(x, g)
                    if not mask >> y & 1:
                        escapees.append(y)
            if not escapees:
                break
            for y in sorted(set(escapees)):
                if not mask >> y & 1:
                    work.append(y)
            members, mask = self._closure(work)
        self._derived = Subgroup(tuple(sorted(members)), mask, tuple(work))
        return self._derived

    def conjugacy_classes(self) -> ConjugacyData:
        if self._conjugacy is not None:
            return self._conjugacy
        n = self.order
        class_of = [-1] * n
        classes: list[tuple[int, ...]] = []
        reps: list[int] = []
        gen_pairs = [(g, self.inverses[g]) for g in self.generators]
        for x in range(n):
            if class_of[x] >= 0:
                continue
            cid = len(classes)
            orbit = [x]
            class_of[x] = cid
            i = 0
            while i < len(orbit):
                y = orbit[i]
                i += 1
                for g, gi in gen_pairs:
                    z = self.mul(self.mul(gi, y), g)
                    if class_of[z] < 0:
                        class_of[z] = cid
                        orbit.append(z)
            classes.append(tuple(sorted(orbit)))
            reps.append(x)
        self._conjugacy = ConjugacyData(tuple(class_of), tuple(classes),
                                        tuple(reps))
        return self._conjugacy

    def commutator_width(self) -> CommutatorWidth:
        """Breadth-first commutator layering of the derived subgroup.

        Costs |G|^2 products to collect the commutator set; intended for
        groups of moderate order.
        """
        if self._width is not None:
            return self._width
        n = self.order
        pair_of: dict[int, tuple[int, int]] = {}
        for a in range(n):
            for b in range(n):
                c = self.commutator(a, b)
                if c not in pair_of:
                    pair_of[c] = (a, b)
        steps = sorted(c for c in pair_of if c != 0)
        layer = {0: 0}
        pred: dict[int, tuple[int, int]] = {}
        frontier = [0]
        while frontier:
            nxt = []
            for y in frontier:
                for c in steps:
                    z = self.mul(y, c)
                    if z not in layer:
                        layer[z] = layer[y] + 1
                        pred[z] = (y, c)
                        nxt.append(z)
            frontier = nxt
        self._width = CommutatorWidth(max(layer.values()), layer, pred, pair_of)
        return self._width

    def subgroup_lattice(self, *, cap: int = DEFAULT_LATTICE_CAP) -> SubgroupLattice:
        """Every subgroup, found by repeated single-element extensions.

        Extension candidates are the minimal generators of the distinct
        prime-power-order cyclic subgroups; every subgroup is generated by
        elements of prime-power order, so the enumeration is complete.
        """
        if self.order > cap:
            raise LatticeCapExceeded(
                f"|G| = {self.order} exceeds the lattice cap {cap}")
        if self._lattice is not None:
            return self._lattice
        cyclic_reps: dict[int, int] = {}
        for x in range(1, self.order):
            if prime_power(self.element_orders[x]) is None:
                continue
            _, m = self._closure((x,))
            if m not in cyclic_reps:
                cyclic_reps[m] = x
        candidates = sorted(cyclic_reps.values())
        trivial = Subgroup((0,), 1, ())
        by_mask: dict[int, Subgroup] = {1: trivial}
        queue = [trivial]
        qi = 0
        while qi < len(queue):
            sub = queue[qi]
            qi += 1
            for x in candidates:
                if sub.contains(x):
                    continue
                ext = self.generated_subgroup(sub.generators + (x,))
                if ext.mask not in by_mask:
                    by_mask[ext.mask] = ext
                    queue.append(ext)
        subs = sorted(by_mask.values(), key=lambda s: (s.size, s.elements))
        index_of = {s.mask: i for i, s in enumerate(subs)}
        supersets = []
        for s in subs:
            ups = tuple(j for j, t in enumerate(subs)
                        if t.size > s.size and t.contains_all(s.mask))
            supersets.append(ups)
        mu = [0] * len(subs)
        top = index_of[subs[-1].mask]
        mu[top] = 1
        for i in sorted(range(len(subs)), key=lambda i: -subs[i].size):
            if i == top:
                continue
            mu[i] = -sum(mu[j] for j in supersets[i])
        self._lattice = SubgroupLattice(tuple(subs), tuple(mu),
                                        tuple(supersets))
        return self._lattice


# ---------------------------------------------------------------------------
# constructions


@dataclass
class _Construction:
    identity: object
    generators: list
    op: object           # (x, y) -> concrete
    key: object          # concrete -> sortable canonical encoding
    name: object         # concrete -> str
    label: str


def _perm_key(p):
    return p


def _perm_name(p) -> str:
    moved = [i for i in range(len(p)) if p[i] != i]
    if not moved:
        return "()"
    seen = set()
    out = []
    for i in moved:
        if i in seen:
            continue
        cyc = [i]
        seen.add(i)
        j = p[i]
        while j != i:
            cyc.append(j)
            seen.add(j)
            j = p[j]
        if len(cyc) > 1:
            out.append("(" + " ".join(str(x + 1) for x in cyc) + ")")
    return "".join(out)


def _perm_construction(degree: int, gens: list[tuple[int, ...]], label: str) -> _Construction:
    identity = tuple(range(degree))

    def op(x, y):
        return tuple(y[x[i]] for i in range(degree))

    return _Construction(identity, gens, op, _perm_key, _perm_name, label)


def _cycles_to_perm(degree: int, cycles) -> tuple[int, ...]:
    img = list(range(degree))
    for cyc in cycles:
        pts = [p - 1 for p in cyc]
        for i, p in enumerate(pts):
            img[p] = pts[(i + 1) % len(pts)]
    return tuple(img)


def _alternating_gens(n: int) -> list[tuple[int, ...]]:
    if n <= 2:
        return []
    if n == 3:
        return [_cycles_to_perm(3, [(1, 2, 3)])]
    if n % 2 == 1:
        return [_cycles_to_perm(n, [(1, 2, 3)]),
                _cycles_to_perm(n, [tuple(range(1, n + 1))])]
    return [_cycles_to_perm(n, [(1, 2, 3)]),
            _cycles_to_perm(n, [tuple(range(2, n + 1))])]


def _symmetric_gens(n: int) -> list[tuple[int, ...]]:
    if n <= 1:
        return []
    if n == 2:
        return [_cycles_to_perm(2, [(1, 2)])]
    return [_cycles_to_perm(n, [(1, 2)]),
            _cycles_to_perm(n, [tuple(range(1, n + 1))])]


def _coord_construction(identity, gens, op, label, namer=None) -> _Construction:
    return _Construction(identity, gens, op, lambda x: x,
                         namer or (lambda x: str(x).replace(" ", "")),
                         label)


def _cyclic_construction(n: int) -> _Construction:
    return _coord_construction(0, [1 % n] if n > 1 else [],
                               lambda x, y: (x + y) % n, f"C{n}",
                               namer=str)


def _ea_construction(p: int, k: int) -> _Construction:
    identity = (0,) * k
    gens = [tuple(1 if j == i else 0 for j in range(k)) for i in range(k)]

    def op(x, y):
        return tuple((a + b) % p for a, b in zip(x, y))

    return _coord_construction(identity, gens, op, f"EA({p},{k})")


def _dihedral_construction(n: int) -> _Construction:
    def op(x, y):
        i, j = x
        i2, j2 = y
        return ((i + (i2 if j == 0 else -i2)) % n, (j + j2) % 2)

    gens = [(1 % n, 0), (0, 1)]
    return _coord_construction((0, 0), gens, op, f"D{n}")


def _quaternion_construction(order: int) -> _Construction:
    m = order // 2  # rotation subgroup size; y^2 = x^(m/2)

    def op(x, y):
        i, j = x
        i2, j2 = y
        i3 = (i + (i2 if j == 0 else -i2) + (m // 2 if j and j2 else 0)) % m
        return (i3, j ^ j2)

    return _coord_construction((0, 0), [(1, 0), (0, 1)], op, f"Q{order}")


def _heisenberg_construction(p: int) -> _Construction:
    def op(x, y):
        a, b, c = x
        a2, b2, c2 = y
        return ((a + a2) % p, (b + b2) % p, (c + c2 + a * b2) % p)

    gens = [(1, 0, 0), (0, 1, 0)]
    return _coord_construction((0, 0, 0), gens, op, f"Heis({p})")


def _metacyclic_construction(p: int, a: int, b: int, t: int) -> _Construction:
    pa = p**a
    pb = p**b
    twist = [pow(t, j, pa) for j in range(pb)]

    def op(x, y):
        i, j = x
        i2, j2 = y
        return ((i + twist[j] * i2) % pa, (j + j2) % pb)

    gens = [(1, 0), (0, 1)]
    return _coord_construction((0, 0), gens, op, f"MC({p},{a},{b},{t})")


def _sl2_construction(q: int) -> _Construction:
    p, k = prime_power(q)
    fld = SmallField(p, k)
    fmul, fadd = fld.mul, fld.add

    def op(x, y):
        a, b, c, d = x
        e, f, g, h = y
        return (fadd[fmul[a][e]][fmul[b][g]], fadd[fmul[a][f]][fmul[b][h]],
                fadd[fmul[c][e]][fmul[d][g]], fadd[fmul[c][f]][fmul[d][h]])

    identity = (1, 0, 0, 1)
    gens = []
    for i in range(k):
        u = p**i  # encodes the basis monomial x^i
        gens.append((1, u, 0, 1))
        gens.append((1, 0, u, 1))

    def name(mat):
        a, b, c, d = mat
        return f"[[{a},{b}],[{c},{d}]]"

    return _Construction(identity, gens, op, lambda x: x, name, f"SL(2,{q})")


def _psl2_construction(q: int) -> _Construction:
    base = _sl2_construction(q)
    p, k = prime_power(q)
    fld = SmallField(p, k)
    neg = fld.neg

    def rep(mat):
        other = tuple(neg[x] for x in mat)
        return min(mat, other)

    def op(x, y):
        return rep(base.op(x, y))

    def name(mat):
        a, b, c, d = mat
        # for even q the center is trivial and the class is its one matrix
        prefix = "" if q % 2 == 0 else "+-"
        return f"{prefix}[[{a},{b}],[{c},{d}]]"

    gens = [rep(g) for g in base.generators]
    return _Construction(rep(base.identity), gens, op, lambda x: x, name,
                         f"PSL(2,{q})")


def _construction_for(spec: GroupSpec) -> _Construction:
    k, p = spec.kind, spec.params
    if k == "alternating":
        n = max(p[0], 1)
        return _perm_construction(max(n, 1), _alternating_gens(p[0]), spec.text())
    if k == "symmetric":
        return _perm_construction(max(p[0], 1), _symmetric_gens(p[0]), spec.text())
    if k == "perm":
        degree = p[0]
        gens = [_cycles_to_perm(degree, cycles) for cycles in p[1:]]
        return _perm_construction(degree, gens, spec.text())
    if k == "cyclic":
        return _cyclic_construction(p[0])
    if k == "elementary-abelian":
        return _ea_construction(p[0], p[1])
    if k == "dihedral":
        return _dihedral_construction(p[0])
    if k == "quaternion":
        return _quaternion_construction(p[0])
    if k == "heisenberg":
        return _heisenberg_construction(p[0])
    if k == "metacyclic":
        return _metacyclic_construction(*p)
    if k == "sl":
        return _sl2_construction(p[0])
    if k == "psl":
        return _psl2_construction(p[0])
    raise InvalidSpec(f"no direct construction for {k}")


def _bfs_index(cons: _Construction, cap: int):
    """Deterministic element indexing: BFS levels, canonical-key ties."""
    elems = [cons.identity]
    index = {cons.identity: 0}
    frontier = [cons.identity]
    while frontier:
        fresh = {}
        for x in frontier:
            for s in cons.generators:
                y = cons.op(x, s)
                if y not in index and y not in fresh:
                    fresh[y] = None
        level = sorted(fresh, key=cons.key)
        for y in level:
            index[y] = len(elems)
            elems.append(y)
            if len(elems) > cap:
                raise OrderCapExceeded(
                    f"{cons.label}: closure passed the order cap {cap}")
        frontier = level
    return elems, index


def _orders_and_inverses(n: int, mul) -> tuple[list[int], list[int]]:
    """Element orders and inverses in one pass of successive powers."""
    orders = [1] * n
    invs = [0] * n
    for x in range(1, n):
        acc = x  # x^d for the current d
        prev = 0
        d = 1
        while acc != 0:
            prev = acc
            acc = mul(acc, x)
            d += 1
        orders[x] = d
        invs[x] = prev  # x^(order-1)
    return orders, invs


def build_group(spec: GroupSpec | str, *, max_order: int = DEFAULT_ORDER_CAP) -> Group:
    """Materialize a spec as an indexed Group.

    Deterministic: identical specs produce index-identical groups.
    """
    if isinstance(spec, str):
        spec = parse_group_spec(spec)
    spec.validate(max_order=max_order)
    if spec.kind == "product":
        g = build_group(spec.params[0], max_order=max_order)
        h = build_group(spec.params[1], max_order=max_order)
        return direct_product(g, h, max_order=max_order)
    cons = _construction_for(spec)
    elems, index = _bfs_index(cons, max_order)
    n = len(elems)
    op = cons.op
    if n <= DENSE_TABLE_LIMIT:
        table = [[index[op(a, b)] for b in elems] for a in elems]
        mul = lambda i, j: table[i][j]
        mul_fn = None
    else:
        table = None

        def mul_fn(i: int, j: int) -> int:
            return index[op(elems[i], elems[j])]

        mul = mul_fn
    orders, invs = _orders_and_inverses(n, mul)
    names = [cons.name(x) for x in elems]
    return Group(order=n, label=cons.label,
                 generators=tuple(index[s] for s in cons.generators),
                 element_names=names, inverses=invs, element_orders=orders,
                 mul_table=table, mul_fn=mul_fn if table is None else None)


def direct_product(g: Group, h: Group, *,
                   max_order: int = DEFAULT_ORDER_CAP) -> Group:
    """Componentwise product with row-major index encoding i_G*|H| + i_H."""
    n = g.order * h.order
    if n > max_order:
        raise OrderCapExceeded(
            f"{g.label}x{h.label} has order {n} > cap {max_order}")
    m = h.order
    if n <= DENSE_TABLE_LIMIT:
        grow = [g.row(a) for a in range(g.order)]
        hrow = [h.row(b) for b in range(h.order)]
        table = []
        for a in range(g.order):
            ra = [x * m for x in grow[a]]
            for b in range(h.order):
                rb = hrow[b]
                table.append([ra[c] + rb[d]
                              for c in range(g.order) for d in range(m)])
        mul_fn = None
    else:
        table = None

        def mul_fn(i: int, j: int) -> int:
            a, b = divmod(i, m)
            c, d = divmod(j, m)
            return g.mul(a, c) * m + h.mul(b, d)

    inverses = [g.inverses[a] * m + h.inverses[b]
                for a in range(g.order) for b in range(h.order)]
    orders = [_lcm(g.element_orders[a], h.element_orders[b])
              for a in range(g.order) for b in range(h.order)]
    names = [f"({g.name(a)},{h.name(b)})"
             for a in range(g.order) for b in range(h.order)]
    gens = tuple(a * m for a in g.generators) + tuple(h.generators)
    return Group(order=n, label=f"{g.label}x{h.label}", generators=gens,
                 element_names=names, inverses=inverses, element_orders=orders,
                 mul_table=table, mul_fn=mul_fn)
