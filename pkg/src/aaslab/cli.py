"""Command-line front door.

Subcommands map one-to-one onto library pipelines and emit either an
aligned-column text view or a machine-readable JSON report with a stable
envelope: schema_version, command echo, group metadata, payload, timing,
and cache status.  Exit codes: 0 success / mathematical yes, 1 mathematical
no, 2 error, 3 unknown or budget exhausted.

Subgroup lattices and AAS bounds are cached as JSON under the cache
directory (``--cache-dir`` or ``$AASLAB_CACHE``, default
``.aaslab-cache/``), keyed by canonical spec text and schema version;
corrupt entries are silently recomputed.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import os
import sys
import time
from pathlib import Path

from . import aas, families, genvec
from .errors import AasLabError, BudgetExhausted
from .group_core import (
    DEFAULT_LATTICE_CAP,
    DEFAULT_ORDER_CAP,
    CommutatorWidth,
    Group,
    Subgroup,
    SubgroupLattice,
    build_group,
    parse_group_spec,
)
from .signatures import Signature, potentiality_failure, rh_genus
from .signatures import enumerate_potential_by_genus, exclusion_reason, is_potential

SCHEMA_VERSION = 1

EXIT_OK = 0
EXIT_NEGATIVE = 1
EXIT_ERROR = 2
EXIT_UNKNOWN = 3


def parse_signature(text: str) -> Signature:
    return Signature.parse(text)


# ---------------------------------------------------------------------------
# result cache


class ResultCache:
    """JSON cache for expensive per-group artifacts (lattice, bounds)."""

    def __init__(self, root: Path | None):
        self.root = root
        self.hits: list[str] = []
        if root is not None:
            root.mkdir(parents=True, exist_ok=True)

    def _path(self, kind: str, key: str) -> Path:
        digest = hashlib.sha256(
            f"{SCHEMA_VERSION}:{kind}:{key}".encode()).hexdigest()[:24]
        return self.root / f"{kind}-{digest}.json"

    def load(self, kind: str, key: str) -> dict | None:
        if self.root is None:
            return None
        path = self._path(kind, key)
        try:
            payload = json.loads(path.read_text(encoding="utf-8"))
        except (OSError, ValueError):
            return None
        if payload.get("schema_version") != SCHEMA_VERSION or payload.get("key") != key:
            return None
        self.hits.append(f"{kind}:{key}")
        return payload.get("data")

    def store(self, kind: str, key: str, data: dict) -> None:
        if self.root is None:
            return
        payload = {"schema_version": SCHEMA_VERSION, "key": key, "data": data}
        try:
            self._path(kind, key).write_text(json.dumps(payload),
                                             encoding="utf-8")
        except OSError:
            pass


def _lattice_to_json(lattice: SubgroupLattice) -> dict:
    return {
        "subgroups": [{"elements": list(s.elements),
                       "generators": list(s.generators)}
                      for s in lattice.subgroups],
        "moebius": list(lattice.moebius_to_top),
    }


def _lattice_from_json(group: Group, data: dict) -> SubgroupLattice | None:
    try:
        subs = []
        for entry in data["subgroups"]:
            elements = tuple(int(x) for x in entry["elements"])
            if not elements or elements[0] != 0 or elements[-1] >= group.order:
                return None
            mask = 0
            for x in elements:
                mask |= 1 << x
            subs.append(Subgroup(elements, mask,
                                 tuple(int(x) for x in entry["generators"])))
        moebius = tuple(int(x) for x in data["moebius"])
        if len(moebius) != len(subs) or not any(
                s.size == group.order for s in subs):
            return None
        supersets = tuple(
            tuple(j for j, t in enumerate(subs)
                  if t.size > s.size and t.contains_all(s.mask))
            for s in subs)
        return SubgroupLattice(tuple(subs), moebius, supersets)
    except (KeyError, TypeError, ValueError):
        return None


def _bounds_to_json(group: Group, bounds: aas.AasBounds) -> dict:
    width = bounds.width_witness
    return {
        "generating_set": list(bounds.generating_set),
        "width": bounds.width,
        "per_order": {
            str(n): {
                "even_vector": list(d.even_vector),
                "odd_vector": list(d.odd_vector),
                "identity_product": list(d.identity_product),
                "even_cover_radius": d.even_cover_radius,
                "odd_cover_radius": d.odd_cover_radius,
            }
            for n, d in bounds.per_order.items()
        },
        "width_layers": {str(x): layer for x, layer in width.layer_of.items()},
        "width_pred": {str(x): list(v) for x, v in width._pred.items()},
        "width_pairs": {str(c): list(v) for c, v in width._pair_of.items()},
    }


def _bounds_from_json(group: Group, data: dict) -> aas.AasBounds | None:
    try:
        per_order = {}
        for n_text, entry in data["per_order"].items():
            n = int(n_text)
            per_order[n] = aas.OrderTailData(
                order=n,
                even_vector=tuple(entry["even_vector"]),
                odd_vector=tuple(entry["odd_vector"]),
                identity_product=tuple(entry["identity_product"]),
                even_cover_radius=int(entry["even_cover_radius"]),
                odd_cover_radius=int(entry["odd_cover_radius"]),
            )
        if set(per_order) != set(group.order_set()):
            return None
        width = CommutatorWidth(
            int(data["width"]),
            {int(x): int(v) for x, v in data["width_layers"].items()},
            {int(x): (int(v[0]), int(v[1]))
             for x, v in data["width_pred"].items()},
            {int(c): (int(v[0]), int(v[1]))
             for c, v in data["width_pairs"].items()},
        )
        gen_set = tuple(int(x) for x in data["generating_set"])
        lengths = [len(d.even_vector) for d in per_order.values()]
        lengths += [len(d.odd_vector) for d in per_order.values()]
        radii = [d.even_cover_radius for d in per_order.values()]
        radii += [d.odd_cover_radius for d in per_order.values()]
        return aas.AasBounds(
            generating_set=gen_set,
            width=width.width,
            per_order=per_order,
            genus_threshold=len(gen_set) + width.width,
            max_vector_length=max(lengths),
            max_cover_radius=max(radii),
            global_tail_threshold=len(per_order) * (max(lengths) + max(radii)),
            width_witness=width,
        )
    except (KeyError, TypeError, ValueError):
        return None


def _cached_lattice(group: Group, key: str, cache: ResultCache, cap: int):
    data = cache.load("lattice", key)
    if data is not None:
        lattice = _lattice_from_json(group, data)
        if lattice is not None:
            group._lattice = lattice
            return lattice
    lattice = group.subgroup_lattice(cap=cap)
    cache.store("lattice", key, _lattice_to_json(lattice))
    return lattice


def _cached_bounds(group: Group, key: str, cache: ResultCache) -> aas.AasBounds:
    data = cache.load("bounds", key)
    if data is not None:
        bounds = _bounds_from_json(group, data)
        if bounds is not None:
            return bounds
    bounds = aas.compute_bounds(group)
    cache.store("bounds", key, _bounds_to_json(group, bounds))
    return bounds


# ---------------------------------------------------------------------------
# JSON rendering helpers


def _fraction_text(value) -> str:
    return str(value)


def _vector_json(group: Group, vec: genvec.GeneratingVector | None):
    if vec is None:
        return None
    return {
        "a": [group.name(x) for x in vec.a],
        "b": [group.name(x) for x in vec.b],
        "c": [group.name(x) for x in vec.c],
    }


def _reason_json(reason):
    if reason is None:
        return None
    return {"item": reason.item, "description": reason.description,
            "orders": list(reason.orders)}


def _outcome_json(group: Group, outcome: genvec.DecisionOutcome) -> dict:
    return {
        "outcome": outcome.status,
        "method": outcome.method,
        "count": None if outcome.count is None else str(outcome.count),
        "vector": _vector_json(group, outcome.vector),
        "reason": _reason_json(outcome.reason),
        "budget_spent": outcome.budget_spent,
    }


def _group_json(group: Group, spec_text: str) -> dict:
    return {
        "spec": spec_text,
        "label": group.label,
        "order": group.order,
        "order_set": list(group.order_set()),
        "exponent": group.exponent,
        "two_part": group.two_part,
        "classification": aas.classify(group),
    }


# ---------------------------------------------------------------------------
# command handlers; each returns (payload, exit_code)


def _cmd_group_info(args, group: Group, cache: ResultCache):
    conj = group.conjugacy_classes()
    payload = {
        "generators": [group.name(g) for g in group.generators],
        "is_perfect": group.is_perfect,
        "is_abelian": group.is_abelian,
        "derived_subgroup_order": group.derived_subgroup().size,
        "conjugacy_class_sizes": sorted(len(c) for c in conj.classes),
    }
    return payload, EXIT_OK


def _cmd_aas_check(args, group: Group, cache: ResultCache):
    report = aas.is_aas(group)
    conditions = {}
    for n in report.order_set:
        witness = report.derived_order_witness[n]
        gen = report.order_generating_witness[n]
        conditions[str(n)] = {
            "derived_witness": None if witness is None else group.name(witness),
            "generating_witness": None if gen is None else [group.name(x) for x in gen],
        }
    payload = {
        "verdict": report.verdict,
        "classification": report.classification,
        "conditions": conditions,
        "failure_notes": list(report.failure_notes),
    }
    return payload, EXIT_OK if report.verdict else EXIT_NEGATIVE


def _cmd_sig_genus(args, group: Group, cache: ResultCache):
    sig = parse_signature(args.signature)
    genus = rh_genus(group.order, sig)
    payload = {
        "signature": sig.text(),
        "genus": _fraction_text(genus),
        "integral": genus.denominator == 1,
        "hyperbolic": genus.denominator == 1 and genus >= 2,
    }
    return payload, EXIT_OK


def _cmd_sig_potential(args, group: Group, cache: ResultCache):
    if args.signature is None and args.genus_max is None:
        raise AasLabError("sig-potential needs a signature or --genus-max")
    payload: dict = {}
    code = EXIT_OK
    if args.signature is not None:
        sig = parse_signature(args.signature)
        potential = is_potential(group, sig)
        failure = potentiality_failure(group, sig)
        payload.update({
            "signature": sig.text(),
            "potential": potential,
            "genus": _fraction_text(rh_genus(group.order, sig)),
            "exclusion": _reason_json(failure),
        })
        code = EXIT_OK if potential else EXIT_NEGATIVE
    if args.genus_max is not None:
        by_genus = {}
        total = 0
        for genus in range(2, args.genus_max + 1):
            sigs = enumerate_potential_by_genus(group, genus)
            if sigs:
                by_genus[str(genus)] = [s.text() for s in sigs]
                total += len(sigs)
        payload["potential_by_genus"] = by_genus
        payload["total"] = total
    return payload, code


def _prepare_context(group: Group, key: str, cache: ResultCache, args):
    if group.order > args.lattice_cap:
        return genvec.build_context(group, lattice_cap=args.lattice_cap)
    lattice = _cached_lattice(group, key, cache, args.lattice_cap)
    return genvec.build_context(group, lattice=lattice)


def _cmd_sig_decide(args, group: Group, cache: ResultCache):
    sig = parse_signature(args.signature)
    ctx = _prepare_context(group, args.group, cache, args)
    bounds = None
    if aas.is_aas(group).verdict:
        bounds = _cached_bounds(group, args.group, cache)
    outcome = genvec.decide(group, sig, args.budget, context=ctx,
                            bounds=bounds)
    payload = {"signature": sig.text()}
    payload.update(_outcome_json(group, outcome))
    if outcome.status == genvec.STATUS_ACTUAL:
        code = EXIT_OK
    elif outcome.status == genvec.STATUS_UNKNOWN:
        code = EXIT_UNKNOWN
    else:
        code = EXIT_NEGATIVE
    return payload, code


def _cmd_sig_nonsigs(args, group: Group, cache: ResultCache):
    ctx = _prepare_context(group, args.group, cache, args)
    report = aas.is_aas(group)
    bounds = _cached_bounds(group, args.group, cache) if report.verdict else None
    result = genvec.non_signature_set(
        group, budget_seconds=args.budget_seconds, threads=args.threads,
        bounds=bounds, context=ctx)
    payload = {
        "authoritative": result.authoritative,
        "genus_threshold": result.genus_threshold,
        "tail_thresholds": {str(n): t for n, t in result.tail_thresholds.items()},
        "non_signatures": [
            {"signature": e.signature.text(), "genus": e.genus,
             "method": e.certificate.method}
            for e in result.entries
        ],
        "count": len(result.entries),
    }
    return payload, EXIT_OK


def _cmd_scan(args, group, cache: ResultCache):
    rows = families.scan_family(
        args.family, max_order=args.max_order,
        p=tuple(args.p or ()), q=tuple(args.q or ()), n=tuple(args.n or ()))
    payload = {
        "family": args.family,
        "rows": [
            {
                "spec": r.spec.text(),
                "order": r.order,
                "verdict": r.verdict,
                "expected": r.expected,
                "agrees": r.agrees,
                "classification": r.classification,
                "error": r.error,
            }
            for r in rows
        ],
        "all_agree": all(r.agrees for r in rows),
    }
    return payload, EXIT_OK if payload["all_agree"] else EXIT_NEGATIVE


def _cmd_product_check(args, group, cache: ResultCache):
    report = families.check_product_theorems(args.left, args.right,
                                             max_order=args.max_order)
    payload = {
        "left": report.left.text(),
        "right": report.right.text(),
        "product_order": report.product_order,
        "pgroup_hypothesis": report.pgroup_hypothesis,
        "pgroup_detail": report.pgroup_detail,
        "same_primes_hypothesis": report.same_primes_hypothesis,
        "same_primes_detail": report.same_primes_detail,
        "expected": report.expected,
        "verdict": report.verdict,
        "agrees": report.agrees,
    }
    if not report.agrees:
        return payload, EXIT_ERROR
    return payload, EXIT_OK if report.verdict else EXIT_NEGATIVE


# ---------------------------------------------------------------------------
# text rendering


def _render_text(command: str, report: dict) -> str:
    lines = []
    group = report.get("group")
    if group:
        lines.append(
            f"{group['spec']}: order {group['order']}, "
            f"order set {group['order_set']}, exponent {group['exponent']}, "
            f"{group['classification']}")
    payload = report["payload"]
    if command == "aas-check":
        lines.append(f"AAS: {'yes' if payload['verdict'] else 'no'}")
        for note in payload["failure_notes"]:
            lines.append(f"  fails: {note}")
    elif command == "sig-genus":
        lines.append(f"genus({payload['signature']}) = {payload['genus']}")
    elif command == "sig-potential":
        if "potential" in payload:
            verdict = "potential" if payload["potential"] else "not potential"
            lines.append(f"{payload['signature']}: {verdict} "
                         f"(genus {payload['genus']})")
            if payload.get("exclusion"):
                lines.append(f"  excluded: item {payload['exclusion']['item']} "
                             f"{payload['exclusion']['description']}")
        for genus, sigs in payload.get("potential_by_genus", {}).items():
            lines.append(f"genus {genus}: {', '.join(sigs)}")
    elif command == "sig-decide":
        lines.append(f"{payload['signature']}: {payload['outcome']}"
                     + (f" ({payload['method']})" if payload["method"] else ""))
        if payload.get("count") is not None:
            lines.append(f"  generating vectors: {payload['count']}")
        if payload.get("vector"):
            vec = payload["vector"]
            lines.append(f"  a = {vec['a']}")
            lines.append(f"  b = {vec['b']}")
            lines.append(f"  c = {vec['c']}")
        if payload.get("reason"):
            lines.append(f"  reason: item {payload['reason']['item']} "
                         f"{payload['reason']['description']}")
    elif command == "sig-nonsigs":
        lines.append(
            f"non-signatures: {payload['count']} "
            f"(genus threshold {payload['genus_threshold']}, "
            f"tail thresholds {payload['tail_thresholds']})")
        for entry in payload["non_signatures"]:
            lines.append(f"  {entry['signature']}  genus {entry['genus']}")
    elif command == "scan":
        header = f"{'SPEC':<18}{'ORDER':>6}  {'AAS':<5}{'EXPECTED':<10}{'AGREES':<8}CLASS"
        lines.append(header)
        for row in payload["rows"]:
            verdict = {True: "yes", False: "no", None: "err"}[row["verdict"]]
            expected = {True: "yes", False: "no", None: "-"}[row["expected"]]
            agrees = "yes" if row["agrees"] else "NO"
            lines.append(
                f"{row['spec']:<18}{row['order'] or 0:>6}  {verdict:<5}"
                f"{expected:<10}{agrees:<8}{row['classification'] or row['error'] or ''}")
    elif command == "product-check":
        lines.append(f"{payload['left']} x {payload['right']} "
                     f"(order {payload['product_order']})")
        lines.append(f"  p-group hypothesis: "
                     f"{'holds' if payload['pgroup_hypothesis'] else 'fails'}"
                     f" ({payload['pgroup_detail']})")
        lines.append(f"  same-primes hypothesis: "
                     f"{'holds' if payload['same_primes_hypothesis'] else 'fails'}"
                     f" ({payload['same_primes_detail']})")
        lines.append(f"  product AAS: {'yes' if payload['verdict'] else 'no'}"
                     + ("" if payload["agrees"] else "  [DISAGREES WITH EXPECTATION]"))
    elif command == "group-info":
        lines.append(f"generators: {payload['generators']}")
        lines.append(f"perfect: {payload['is_perfect']}, "
                     f"abelian: {payload['is_abelian']}, "
                     f"derived order: {payload['derived_subgroup_order']}")
        lines.append(f"class sizes: {payload['conjugacy_class_sizes']}")
    return "\n".join(lines)


# ---------------------------------------------------------------------------
# argument parsing and dispatch


_HANDLERS = {
    "group-info": (_cmd_group_info, True),
    "aas-check": (_cmd_aas_check, True),
    "sig-genus": (_cmd_sig_genus, True),
    "sig-potential": (_cmd_sig_potential, True),
    "sig-decide": (_cmd_sig_decide, True),
    "sig-nonsigs": (_cmd_sig_nonsigs, True),
    "scan": (_cmd_scan, False),
    "product-check": (_cmd_product_check, False),
}


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="aaslab",
        description="Decide which branching signatures a finite group acts with.",
    )
    parser.add_argument("--json", action="store_true",
                        help="emit a JSON report instead of text")
    parser.add_argument("--threads", type=int, default=os.cpu_count() or 1,
                        help="worker threads for sweep-style commands")
    parser.add_argument("--max-order", type=int, default=DEFAULT_ORDER_CAP,
                        help="order cap for group construction")
    parser.add_argument("--lattice-cap", type=int, default=DEFAULT_LATTICE_CAP,
                        help="largest order for subgroup-lattice counting")
    parser.add_argument("--cache-dir", default=None,
                        help="result cache directory (default $AASLAB_CACHE "
                             "or .aaslab-cache)")
    parser.add_argument("--no-cache", action="store_true",
                        help="disable the result cache")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("group-info", help="order, order set, structure data")
    p.add_argument("group")

    p = sub.add_parser("aas-check",
                       help="does the group act with almost all signatures?")
    p.add_argument("group")

    p = sub.add_parser("sig-genus", help="exact genus of a signature")
    p.add_argument("group")
    p.add_argument("signature")

    p = sub.add_parser("sig-potential",
                       help="potentiality test / enumeration by genus")
    p.add_argument("group")
    p.add_argument("signature", nargs="?", default=None)
    p.add_argument("--genus-max", type=int, default=None,
                   help="also enumerate potential signatures up to this genus")

    p = sub.add_parser("sig-decide",
                       help="actual / non-signature decision with certificate")
    p.add_argument("group")
    p.add_argument("signature")
    p.add_argument("--budget", type=int, dest="budget",
                   default=genvec.DEFAULT_SEARCH_BUDGET,
                   help="search node budget")

    p = sub.add_parser("sig-nonsigs",
                       help="the complete finite non-signature list (AAS groups)")
    p.add_argument("group")
    p.add_argument("--budget", type=float, dest="budget_seconds", default=300.0,
                   help="wall-clock budget in seconds")

    p = sub.add_parser("scan", help="scan a constructor family")
    p.add_argument("family", choices=sorted(families.FAMILY_NAMES))
    p.add_argument("--p", type=int, action="append", help="prime parameter(s)")
    p.add_argument("--q", type=int, action="append",
                   help="prime-power parameter(s)")
    p.add_argument("--n", type=int, action="append", help="size parameter(s)")

    p = sub.add_parser("product-check",
                       help="product-closure hypotheses and direct verdict")
    p.add_argument("left")
    p.add_argument("right")
    return parser


def _cache_from_args(args) -> ResultCache:
    if args.no_cache:
        return ResultCache(None)
    root = args.cache_dir or os.environ.get("AASLAB_CACHE") or ".aaslab-cache"
    try:
        return ResultCache(Path(root))
    except OSError:
        return ResultCache(None)


def main(argv: list[str] | None = None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    handler, needs_group = _HANDLERS[args.command]
    cache = _cache_from_args(args)
    started = time.monotonic()
    report: dict = {
        "schema_version": SCHEMA_VERSION,
        "command": args.command,
        "arguments": {k: v for k, v in sorted(vars(args).items())
                      if k not in ("json",) and not callable(v)},
    }
    try:
        group = None
        if needs_group:
            spec = parse_group_spec(args.group)
            group = build_group(spec, max_order=args.max_order)
            report["group"] = _group_json(group, spec.text())
        payload, code = handler(args, group, cache)
    except BudgetExhausted as exc:
        report["error"] = str(exc)
        report["payload"] = {"authoritative": False}
        report["timing"] = {"seconds": round(time.monotonic() - started, 6)}
        _emit(args, report, args.command)
        return EXIT_UNKNOWN
    except AasLabError as exc:
        report["error"] = f"{type(exc).__name__}: {exc}"
        report["payload"] = {}
        report["timing"] = {"seconds": round(time.monotonic() - started, 6)}
        _emit(args, report, args.command, error=True)
        return EXIT_ERROR
    report["payload"] = payload
    report["timing"] = {"seconds": round(time.monotonic() - started, 6)}
    report["cache"] = {"hit": bool(cache.hits), "entries": cache.hits}
    _emit(args, report, args.command)
    return code


def _emit(args, report: dict, command: str, error: bool = False) -> None:
    if args.json:
        print(json.dumps(report, indent=2, sort_keys=True))
    elif error:
        print(f"error: {report['error']}", file=sys.stderr)
    else:
        print(_render_text(command, report))


if __name__ == "__main__":
    raise SystemExit(main())
