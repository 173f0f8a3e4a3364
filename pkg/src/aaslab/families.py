"""Family-level scans and the direct-product closure checks.

``scan_family`` instantiates a named constructor family over a parameter
range, runs the AAS decision on every member, and attaches the expected
verdict wherever one of the library's established family facts covers the
instance.  ``check_product_theorems`` evaluates the two product-closure
hypothesis sets (same-prime AAS factors; AAS p-group times a compatible
p-group) and then decides the product directly, so agreement is computed,
never assumed.
"""

from __future__ import annotations

from dataclasses import dataclass

from . import aas
from .errors import AasLabError
from .group_core import (
    DEFAULT_ORDER_CAP,
    Group,
    GroupSpec,
    build_group,
    direct_product,
    factorize,
    is_prime,
    prime_power,
)


@dataclass(frozen=True)
class FamilyScanRow:
    """One scanned group: spec, verdict, and the expected value if any."""

    spec: GroupSpec
    order: int | None
    verdict: bool | None
    expected: bool | None
    agrees: bool
    classification: str | None = None
    failure_notes: tuple[str, ...] = ()
    error: str | None = None


@dataclass(frozen=True)
class ProductTheoremReport:
    """Hypothesis evaluation and direct verdict for a direct product."""

    left: GroupSpec
    right: GroupSpec
    product_order: int
    pgroup_hypothesis: bool
    pgroup_detail: str
    same_primes_hypothesis: bool
    same_primes_detail: str
    expected: bool | None
    verdict: bool
    agrees: bool


# ---------------------------------------------------------------------------
# expected verdicts backed by the established family facts


_METACYCLIC_KINDS = {"metacyclic", "dihedral", "quaternion"}


def expected_aas(group: Group, spec: GroupSpec | None = None) -> bool | None:
    """Expected verdict where a family fact covers this instance, else None.

    Facts used: non-abelian p-groups of exponent p are AAS; p-groups of
    maximal exponent p^(n-1) and metacyclic p-groups are not; abelian
    groups are not; a group that is neither perfect nor a p-group is not;
    SL(2,q) for odd q is not; the simple families (alternating n >= 5,
    PSL(2,q) and even-q SL(2,q) for q >= 4) are.
    """
    cls = aas.classify(group)
    if cls == aas.CLASS_ABELIAN:
        return False
    pp = prime_power(group.order)
    if pp is not None and cls != aas.CLASS_PERFECT:
        p, n = pp
        if group.exponent == p:
            return True
        if n >= 2 and group.exponent == p ** (n - 1):
            return False
        if spec is not None and spec.kind in _METACYCLIC_KINDS:
            return False
    if cls == aas.CLASS_OTHER:
        return False
    if spec is not None:
        if spec.kind == "alternating" and spec.params[0] >= 5:
            return True
        if spec.kind == "psl" and spec.params[0] >= 4:
            return True
        if spec.kind == "sl":
            q = spec.params[0]
            if q % 2 == 1 and q >= 3:
                return False
            if q >= 4:
                return True
    return None


# ---------------------------------------------------------------------------
# named families


def _metacyclic_specs(primes, max_order: int) -> list[GroupSpec]:
    """All split metacyclic p-group presentations within the order bound.

    The twist t = 1 gives the abelian product and is skipped; it is covered
    by the cyclic and elementary-abelian families.
    """
    out = []
    for p in primes:
        a = 1
        while p ** (a + 1) <= max_order:
            a += 1
            b = 0
            while p ** (a + b + 1) <= max_order:
                b += 1
                pa = p**a
                for t in range(2, pa):
                    if t % p == 0:
                        continue
                    if pow(t, p**b, pa) == 1:
                        out.append(GroupSpec("metacyclic", (p, a, b, t)))
        # a = 1 forces t = 1 (abelian), so the loop starts at a = 2
    return out


def family_specs(name: str, *, max_order: int = 128,
                 p: tuple[int, ...] = (), q: tuple[int, ...] = (),
                 n: tuple[int, ...] = ()) -> list[GroupSpec]:
    """Instantiate a named family over a parameter range."""
    name = name.lower()
    specs: list[GroupSpec] = []
    if name == "cyclic":
        ns = n or tuple(range(1, max_order + 1))
        specs = [GroupSpec("cyclic", (k,)) for k in ns if k <= max_order]
    elif name == "dihedral":
        ns = n or tuple(range(2, max_order // 2 + 1))
        specs = [GroupSpec("dihedral", (k,)) for k in ns if 2 * k <= max_order]
    elif name == "quaternion":
        k = 8
        while k <= max_order:
            specs.append(GroupSpec("quaternion", (k,)))
            k *= 2
    elif name in ("elementary-abelian", "ea"):
        primes = p or (2, 3, 5, 7)
        for pr in primes:
            k = 2
            while pr**k <= max_order:
                specs.append(GroupSpec("elementary-abelian", (pr, k)))
                k += 1
    elif name in ("heisenberg", "heis"):
        primes = p or (3, 5, 7)
        specs = [GroupSpec("heisenberg", (pr,)) for pr in primes
                 if pr**3 <= max_order]
    elif name in ("metacyclic", "mc"):
        specs = _metacyclic_specs(p or (2, 3), max_order)
    elif name == "semidihedral":
        # split metacyclic 2-group with twist 2^(a-1) - 1
        a = 3
        while 2 ** (a + 1) <= max_order:
            specs.append(GroupSpec("metacyclic", (2, a, 1, 2 ** (a - 1) - 1)))
            a += 1
    elif name == "modular":
        primes = p or (2, 3)
        for pr in primes:
            a = 2 if pr > 2 else 3
            while pr ** (a + 1) <= max_order:
                specs.append(GroupSpec("metacyclic", (pr, a, 1, pr ** (a - 1) + 1)))
                a += 1
    elif name == "alternating":
        ns = n or tuple(range(3, 9))
        for k in ns:
            spec = GroupSpec("alternating", (k,))
            if (spec.declared_order() or 0) <= max_order:
                specs.append(spec)
    elif name == "symmetric":
        ns = n or tuple(range(3, 8))
        for k in ns:
            spec = GroupSpec("symmetric", (k,))
            if (spec.declared_order() or 0) <= max_order:
                specs.append(spec)
    elif name in ("sl2", "sl"):
        qs = q or (2, 3, 4, 5, 7, 8, 9, 11, 13)
        for qq in qs:
            spec = GroupSpec("sl", (qq,))
            if (spec.declared_order() or 0) <= max_order:
                specs.append(spec)
    elif name in ("psl2", "psl"):
        qs = q or (2, 3, 4, 5, 7, 8, 9, 11, 13)
        for qq in qs:
            spec = GroupSpec("psl", (qq,))
            if (spec.declared_order() or 0) <= max_order:
                specs.append(spec)
    else:
        raise AasLabError(f"unknown family {name!r}")
    return specs


FAMILY_NAMES = ("cyclic", "dihedral", "quaternion", "elementary-abelian",
                "heisenberg", "metacyclic", "semidihedral", "modular",
                "alternating", "symmetric", "sl2", "psl2")


def constructor_corpus(max_order: int) -> list[GroupSpec]:
    """Every family instance up to the order bound, deduplicated by spec
    text and sorted by (order, text).  This is the corpus the test suite
    sweeps."""
    specs: dict[str, GroupSpec] = {}
    specs["C1"] = GroupSpec("cyclic", (1,))
    for name in FAMILY_NAMES:
        for spec in family_specs(name, max_order=max_order):
            specs.setdefault(spec.text(), spec)
    out = list(specs.values())
    out.sort(key=lambda s: (s.declared_order() or 0, s.text()))
    return out


def scan_family(name: str, *, max_order: int = 128, p: tuple[int, ...] = (),
                q: tuple[int, ...] = (), n: tuple[int, ...] = ()) -> list[FamilyScanRow]:
    """Build each family member, decide AAS, and attach expectations.

    Per-row errors are recorded, not raised, so one bad instance cannot
    abort a scan.
    """
    rows = []
    for spec in family_specs(name, max_order=max_order, p=p, q=q, n=n):
        rows.append(scan_one(spec, max_order=max_order))
    return rows


def scan_one(spec: GroupSpec, *, max_order: int = DEFAULT_ORDER_CAP) -> FamilyScanRow:
    try:
        group = build_group(spec, max_order=max_order)
        report = aas.is_aas(group)
        expected = expected_aas(group, spec)
        return FamilyScanRow(
            spec=spec,
            order=group.order,
            verdict=report.verdict,
            expected=expected,
            agrees=expected is None or expected == report.verdict,
            classification=report.classification,
            failure_notes=report.failure_notes,
        )
    except AasLabError as exc:
        return FamilyScanRow(spec=spec, order=spec.declared_order(),
                             verdict=None, expected=None, agrees=True,
                             error=str(exc))


def check_product_theorems(left: GroupSpec | str, right: GroupSpec | str, *,
                           max_order: int = DEFAULT_ORDER_CAP) -> ProductTheoremReport:
    """Evaluate the product-closure hypotheses and decide the product.

    Hypotheses: (a) the left factor is an AAS p-group of exponent p^e and
    the right factor is a p-group for the same p, of exponent at most p^e,
    generated by its order-p elements; (b) both factors are AAS with the
    same prime support.  When either holds the product must come out AAS;
    the verdict is computed directly either way.
    """
    from .group_core import parse_group_spec

    if isinstance(left, str):
        left = parse_group_spec(left)
    if isinstance(right, str):
        right = parse_group_spec(right)
    g = build_group(left, max_order=max_order)
    h = build_group(right, max_order=max_order)
    g_aas = aas.is_aas(g).verdict
    h_aas = aas.is_aas(h).verdict

    pg = prime_power(g.order)
    ph = prime_power(h.order)
    pgroup_hyp = False
    if pg is not None and ph is not None and pg[0] == ph[0] and g_aas:
        p = pg[0]
        if h.exponent <= g.exponent:
            if h.order == 1:
                gen_by_p = True
            elif p in h.order_set():
                gen_by_p = aas.generated_by_order(h, p) is not None
            else:
                gen_by_p = False
            pgroup_hyp = gen_by_p
            gen_word = "generated" if gen_by_p else "not generated"
            pgroup_detail = (
                f"left is an AAS {p}-group of exponent {g.exponent}; right has "
                f"exponent {h.exponent} and is {gen_word} by order-{p} elements")
        else:
            pgroup_detail = (f"right exponent {h.exponent} exceeds left "
                             f"exponent {g.exponent}")
    else:
        pgroup_detail = "factors are not p-groups for a shared prime, or left not AAS"

    same_primes = (set(factorize(g.order)) == set(factorize(h.order))
                   and g.order > 1 and h.order > 1)
    same_primes_hyp = g_aas and h_aas and same_primes
    same_primes_detail = (
        f"both AAS: {g_aas and h_aas}; prime support "
        f"{sorted(factorize(g.order))} vs {sorted(factorize(h.order))}")

    product = direct_product(g, h, max_order=max_order)
    verdict = aas.is_aas(product).verdict
    expected = True if (pgroup_hyp or same_primes_hyp) else None
    return ProductTheoremReport(
        left=left, right=right, product_order=product.order,
        pgroup_hypothesis=pgroup_hyp, pgroup_detail=pgroup_detail,
        same_primes_hypothesis=same_primes_hyp,
        same_primes_detail=same_primes_detail,
        expected=expected, verdict=verdict,
        agrees=expected is None or expected == verdict,
    )
