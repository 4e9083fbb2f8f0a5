"""Command-line interface: tables, quotient reports, the A_n pipeline and corpus scans.

Exit codes: 0 success, 1 violation of a proven statement (or a regression
mismatch), 2 input error, 3 resource ceiling.
"""
from __future__ import annotations

import argparse
import json
import re
import sys
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from pathlib import Path
from typing import Callable

from . import __version__
from .cyclo import CycloSyntaxError, format_cyclo, lcm, parse_cyclo
from .families import (
    C15_D16_VARIANTS,
    abelian_table,
    alternating_group,
    c4c4_c3_group,
    c15_d16_group,
    cyclic_group,
    dihedral_group,
    dihedral_table,
    direct_product_group,
    direct_product_table,
    extraspecial_central_group,
    extraspecial_central_order,
    heisenberg_group,
    psl2_group,
    psl33_group,
    quaternion_group,
    symmetric_group,
)
from .groups import (
    CharacterTable,
    ClassData,
    GroupTooLargeError,
    Perm,
    PermGroup,
    TableInvariantError,
    _row_key,
    dixon_table,
    is_nilpotent,
    parse_cycles,
)
from .orders import (
    OrderReport,
    check_conjecture_C,
    check_navarro,
    check_qg_bound,
    check_theorem_A,
    format_divisors,
    group_order_report,
    ring_closure,
    _report,
)

SCHEMA_VERSION = 1
EXIT_OK, EXIT_VIOLATION, EXIT_INPUT, EXIT_RESOURCE = 0, 1, 2, 3


class InputError(ValueError):
    pass


class ResourceCeiling(RuntimeError):
    pass


# --- table documents ------------------------------------------------------------------

def table_to_document(T: CharacterTable, provenance: str = "") -> dict:
    cls = T.classes
    return {
        "schema_version": SCHEMA_VERSION,
        "name": T.name,
        "group_order": T.group_order,
        "class_sizes": list(cls.sizes),
        "element_orders": list(cls.element_orders),
        "power_maps": {str(p): list(m) for p, m in sorted(cls.power_maps.items())},
        "values": [[format_cyclo(v) for v in row] for row in T.values],
        "provenance": provenance,
    }


def document_to_table(doc: dict) -> CharacterTable:
    """Parse and validate a table document; errors carry the offending location."""
    if not isinstance(doc, dict):
        raise InputError("table document must be a JSON object")
    if doc.get("schema_version") != SCHEMA_VERSION:
        raise InputError(f"unsupported schema_version {doc.get('schema_version')!r}")
    try:
        N = int(doc["group_order"])
        sizes = [int(x) for x in doc["class_sizes"]]
        orders = [int(x) for x in doc["element_orders"]]
        raw = doc["values"]
    except (KeyError, TypeError, ValueError) as e:
        raise InputError(f"missing or malformed field: {e}") from None
    r = len(sizes)
    if len(orders) != r:
        raise InputError("element_orders and class_sizes differ in length")
    values = []
    for i, row in enumerate(raw):
        out = []
        for j, text in enumerate(row):
            try:
                out.append(parse_cyclo(str(text)))
            except CycloSyntaxError as e:
                raise InputError(f"values[{i}][{j}]: {e}") from None
        values.append(out)
    pm = {}
    for p, m in (doc.get("power_maps") or {}).items():
        m = [int(x) for x in m]
        if len(m) != r or any(not 0 <= x < r for x in m):
            raise InputError(f"power_maps[{p}] is malformed")
        pm[int(p)] = m
    cls = ClassData(sizes=sizes, element_orders=orders, power_maps=pm, exponent=lcm(*orders) if orders else 1)
    values.sort(key=_row_key)
    T = CharacterTable(N, cls, values, name=str(doc.get("name", "")))
    try:
        T.validate()
    except TableInvariantError as e:
        raise InputError(f"table validation failed: {e}") from None
    return T


def load_perm_group(path: Path) -> PermGroup:
    """JSON file {"degree": n, "generators": [...], "base": 0 or 1, "name": ...}.

    Generators are cycle strings "(0,1,2)(3,4)" or image arrays [1, 2, 0, 4, 3].
    """
    doc = _read_json(path)
    try:
        base = int(doc.get("base", 0))
        gens_text = doc["generators"]
        n = int(doc["degree"])
    except (KeyError, TypeError, ValueError) as e:
        raise InputError(f"{path}: malformed permutation group file ({e})") from None
    gens = []
    for k, text in enumerate(gens_text):
        if isinstance(text, list):
            try:
                gens.append(Perm(tuple(int(x) - base for x in text)))
            except (ValueError, TypeError) as e:
                raise InputError(f"{path}: generators[{k}]: {e}") from None
            continue
        if base:
            text = re.sub(r"\d+", lambda m: str(int(m.group()) - base), text)
        try:
            gens.append(parse_cycles(text, n))
        except ValueError as e:
            raise InputError(f"{path}: generators[{k}]: {e}") from None
    return PermGroup(gens, n, name=str(doc.get("name", path.stem)))


def _read_json(path: Path):
    try:
        return json.loads(Path(path).read_text())
    except OSError as e:
        raise InputError(f"cannot read {path}: {e.strerror}") from None
    except json.JSONDecodeError as e:
        raise InputError(f"{path}: invalid JSON at line {e.lineno} column {e.colno}") from None


# --- sources ------------------------------------------------------------------------------

@dataclass
class Source:
    """A resolved input: a table (with or without a group) or closed-form order generators."""

    label: str
    group_order: int
    table: Callable[[], CharacterTable] | None = None
    group: PermGroup | None = None
    closed_form: Callable[[], OrderReport] | None = None
    nilpotent: bool | None = None


def _ints(text: str) -> list[int]:
    try:
        return [int(t) for t in text.split(",") if t]
    except ValueError:
        raise InputError(f"expected comma-separated integers, got {text!r}") from None


def _group_source(label: str, G: PermGroup, nilpotent: bool | None = None) -> Source:
    return Source(label, G.order(), table=lambda: dixon_table(G, name=G.name), group=G, nilpotent=nilpotent)


def _table_source(label: str, T: CharacterTable, nilpotent: bool | None) -> Source:
    return Source(label, T.group_order, table=lambda: T, nilpotent=nilpotent)


def _is_2power(n: int) -> bool:
    return n & (n - 1) == 0


def resolve_family(spec: str) -> Source:
    label = spec
    head, _, rest = spec.partition(":")
    args = rest.split(":") if rest else []
    try:
        if head == "abelian":
            fs = _ints(args[0]) if args else [1]
            return _table_source(label, abelian_table(fs), True)
        if head == "cyclic":
            return _group_source(label, cyclic_group(int(args[0])), True)
        if head == "dihedral":
            m = int(args[0])
            if len(args) > 1 and args[1] == "group":
                return _group_source(label, dihedral_group(m), _is_2power(m))
            return _table_source(label, dihedral_table(m), _is_2power(m))
        if head == "quaternion":
            return _group_source(label, quaternion_group(), True)
        if head == "symmetric":
            return _group_source(label, symmetric_group(int(args[0])))
        if head == "alternating":
            return _group_source(label, alternating_group(int(args[0])))
        if head in ("c4c4xc3", "smallgroup48_3"):
            return _group_source(label, c4c4_c3_group(), False)
        if head in ("c15xd16", "smallgroup240_13"):
            variant = args[0] if args else "default"
            if variant not in C15_D16_VARIANTS:
                raise InputError(f"unknown variant {variant!r}")
            return _group_source(label, c15_d16_group(variant), False)
        if head == "psl2":
            return _group_source(label, psl2_group(int(args[0])), False)
        if head == "psl33":
            return _group_source(label, psl33_group(), False)
        if head == "heisenberg":
            return _group_source(label, heisenberg_group(int(args[0])), True)
        if head == "extraspecial":
            p, n = int(args[0]), int(args[1])
            if len(args) > 2 and args[2] == "group":
                return _group_source(label, extraspecial_central_group(p, n), True)
            K, gens = extraspecial_central_order(p, n)

            def closed():
                L = ring_closure(gens, K)
                return _report(K, L, 0, None)

            return Source(label, p ** (2 * n + 2), closed_form=closed, nilpotent=True)
        if head == "product":
            parts = rest.split("+")
            if len(parts) != 2:
                raise InputError("product needs two factors joined by '+'")
            a, b = resolve_family(parts[0]), resolve_family(parts[1])
            nil = a.nilpotent and b.nilpotent if None not in (a.nilpotent, b.nilpotent) else None
            if a.group is not None and b.group is not None:
                return _group_source(label, direct_product_group(a.group, b.group), nil)
            if a.table is None or b.table is None:
                raise InputError("product factors need character tables")
            return Source(label, a.group_order * b.group_order,
                          table=lambda: direct_product_table(a.table(), b.table()), nilpotent=nil)
    except (IndexError, ValueError) as e:
        if isinstance(e, InputError):
            raise
        raise InputError(f"bad family spec {spec!r}: {e}") from None
    raise InputError(f"unknown family {head!r}")


def resolve_source(text: str) -> Source:
    kind, _, arg = text.partition(":")
    if kind == "family":
        return resolve_family(arg)
    if kind == "json":
        T = document_to_table(_read_json(Path(arg)))
        return _table_source(text, T, None)
    if kind == "perm":
        G = load_perm_group(Path(arg))
        return _group_source(text, G)
    return resolve_family(text)


# --- rendering ------------------------------------------------------------------------------

def render_table(T: CharacterTable) -> str:
    cls = T.classes
    head = ["", *[f"{o}_{s}" for o, s in zip(cls.element_orders, cls.sizes)]]
    rows = [[f"X.{i + 1}", *[format_cyclo(v) for v in row]] for i, row in enumerate(T.values)]
    widths = [max(len(r[j]) for r in [head] + rows) for j in range(len(head))]
    lines = [f"{T.name or 'G'}  order {T.group_order}, {cls.count} classes (header: order_size)"]
    for r in [head] + rows:
        lines.append("  ".join(x.rjust(w) for x, w in zip(r, widths)).rstrip())
    return "\n".join(lines)


def table_style(divisors) -> str:
    """'3^4 x 15^4 x 45^4' (ascending), '1' for the trivial group."""
    if not divisors:
        return "1"
    counts: dict[int, int] = {}
    for d in divisors:
        counts[d] = counts.get(d, 0) + 1
    return " x ".join(f"{d}^{m}" if m > 1 else str(d) for d, m in sorted(counts.items()))


def _dump(obj) -> str:
    return json.dumps(obj, sort_keys=True, separators=(",", ": "))


def _write_json(path: str | None, obj) -> None:
    if path:
        Path(path).write_text(json.dumps(obj, sort_keys=True, indent=2) + "\n")


# --- commands ---------------------------------------------------------------------------------

def _report_for(src: Source) -> OrderReport:
    if src.closed_form is not None:
        return src.closed_form()
    return group_order_report(src.table())


def cmd_table(args) -> int:
    src = resolve_source(args.source)
    if src.table is None:
        raise InputError(f"{args.source} has no character table (closed-form order only)")
    T = src.table()
    print(render_table(T))
    _write_json(args.json, table_to_document(T, provenance=f"charlat {__version__}: {args.source}"))
    return EXIT_OK


def cmd_quotient(args) -> int:
    src = resolve_source(args.source)
    r = _report_for(src)
    okA, witness = check_theorem_A(r, src.group_order)
    doc = r.to_dict()
    doc.update(source=args.source, group_order=src.group_order, theorem_A=okA,
               conjecture_C=check_conjecture_C(r, src.group_order) if src.group_order > 1 else True)
    if witness is not None:
        doc["theorem_A_witness"] = witness
    print(format_divisors(r.divisors))
    print(_dump(doc))
    _write_json(args.json, doc)
    return EXIT_OK if okA else EXIT_VIOLATION


def _an_ranges(labels_rows):
    # group consecutive n with equal rows, as in "12,13,14" or "<= 11"
    out = []
    for n, row in labels_rows:
        if out and out[-1][1] == row:
            out[-1][0].append(n)
        else:
            out.append(([n], row))
    lines = []
    for i, (ns, row) in enumerate(out):
        if i == 0 and len(ns) > 1 and ns[0] == 2:
            lab = f"<= {ns[-1]}"
        else:
            lab = ",".join(map(str, ns))
        lines.append((lab, row))
    return lines


def cmd_an(args) -> int:
    from .families import an_field_basis
    from .multiquad import an_quotient, reference_an_table

    n = args.n
    if not 2 <= n <= args.max:
        raise InputError(f"n must lie in 2..{args.max}")
    ns = range(2, n + 1) if args.paper_table else [n]
    results, status = [], EXIT_OK
    for k in ns:
        rank = 1 << an_field_basis(k).dim
        if args.hnf_ceiling and rank > args.hnf_ceiling:
            print(f"n={k}: rank {rank} exceeds --hnf-ceiling {args.hnf_ceiling}", file=sys.stderr)
            return EXIT_RESOURCE
        divs = an_quotient(k)
        try:
            ref = reference_an_table(k)
        except KeyError:
            ref = None
        match = ref is None or ref == divs
        if not match:
            status = EXIT_VIOLATION
        results.append({"n": k, "divisors": table_style(divs), "reference": None if ref is None else table_style(ref),
                        "match": match})
    if args.paper_table:
        rows = _an_ranges([(r["n"], r["divisors"]) for r in results])
        w = max(len(lab) for lab, _ in rows)
        print("n".ljust(w) + "  Z_{Q(A_n)}/Z[A_n]")
        for lab, row in rows:
            print(lab.ljust(w) + "  " + row)
        for r in results:
            if not r["match"]:
                print(f"mismatch at n={r['n']}: computed {r['divisors']}, reference {r['reference']}", file=sys.stderr)
    else:
        r = results[0]
        print(r["divisors"])
        if not r["match"]:
            print(f"mismatch: reference row is {r['reference']}", file=sys.stderr)
    _write_json(args.json, results)
    return status


# --- corpus ---------------------------------------------------------------------------------------

BUILTIN_CORPUS: list[str] = (
    [f"abelian:{f}" for f in ("2", "3", "4", "2,2", "5", "6", "2,4", "3,3", "2,2,2", "8", "4,4", "2,6", "12", "3,9")]
    + [f"dihedral:{m}" for m in range(3, 21)]
    + [f"dihedral:{m}:group" for m in (3, 4, 5, 6, 8)]
    + ["quaternion", "symmetric:3", "symmetric:4", "symmetric:5", "alternating:4", "alternating:5"]
    + ["c4c4xc3", "c15xd16", "c15xd16:rot4", "c15xd16:rot11"]
    + ["heisenberg:3", "heisenberg:5", "extraspecial:3:1:group"]
    + [f"extraspecial:{p}:{n}" for p, n in ((3, 1), (3, 2), (5, 1), (7, 1))]
    + [f"psl2:{q}" for q in (4, 5, 7, 8, 9, 11, 13)] + ["psl33"]
    + ["product:dihedral:13+abelian:3", "product:dihedral:4+abelian:3", "product:quaternion+cyclic:3",
       "product:symmetric:3+cyclic:5", "product:dihedral:5+abelian:4"]
)

CHECKS = ("A", "C", "qg", "navarro")


def scan_entry(spec: str, checks=CHECKS) -> dict:
    """Run the requested checks on one corpus entry; errors are captured, not raised."""
    out: dict = {"source": spec}
    try:
        src = resolve_source(spec)
        out["group_order"] = src.group_order
        T = None
        if src.closed_form is None:
            T = src.table()
            out["name"] = T.name
        r = src.closed_form() if T is None else group_order_report(T)
        out["structure"] = format_divisors(r.divisors)
        out["exponent"] = r.exponent
        nil = src.nilpotent
        if nil is None and src.group is not None:
            nil = is_nilpotent(src.group, T.classes)
        out["nilpotent"] = nil
        if "A" in checks:
            ok, w = check_theorem_A(r, src.group_order)
            out["theorem_A"] = ok
            if w is not None:
                out["theorem_A_witness"] = w
        if "C" in checks and src.group_order > 1:
            out["conjecture_C"] = check_conjecture_C(r, src.group_order)
        for name, fn in (("qg", check_qg_bound), ("navarro", check_navarro)):
            if name in checks and src.group is not None and T is not None:
                bad = [j for j in range(T.class_count) if not fn(src.group, T, j)]
                out[name] = {"classes": T.class_count, "failed": bad}
    except (InputError, TableInvariantError, ValueError) as e:
        out["error"] = str(e)
    except GroupTooLargeError as e:
        out["error"] = f"resource ceiling: {e}"
    return out


def scan_violations(entry: dict) -> list[str]:
    """Violations of proven statements (Theorem A, Theorem B, Qg, Navarro) in a scan entry."""
    v = []
    if entry.get("theorem_A") is False:
        v.append("A")
    if entry.get("conjecture_C") is False and entry.get("nilpotent"):
        v.append("B")
    for name in ("qg", "navarro"):
        if entry.get(name, {}).get("failed"):
            v.append(name)
    return v


def cmd_scan(args) -> int:
    if args.corpus in (None, "builtin"):
        corpus = list(BUILTIN_CORPUS)
    else:
        doc = _read_json(Path(args.corpus))
        entries = doc.get("entries") if isinstance(doc, dict) else doc
        if not isinstance(entries, list):
            raise InputError("corpus file must be a list of sources or {'entries': [...]}")
        base = Path(args.corpus).parent
        corpus = []
        for e in entries:
            e = str(e)
            kind, _, arg = e.partition(":")
            if kind in ("json", "perm") and not Path(arg).is_absolute():
                e = f"{kind}:{base / arg}"
            corpus.append(e)
    checks = tuple(args.check) if args.check else CHECKS
    with ThreadPoolExecutor(max_workers=max(1, args.threads)) as pool:
        results = list(pool.map(lambda s: scan_entry(s, checks), corpus))
    violations = counter = errors = 0
    for i, entry in enumerate(results):
        entry["index"] = i
        bad = scan_violations(entry)
        entry["violations"] = bad
        violations += bool(bad)
        errors += "error" in entry
        if entry.get("conjecture_C") is False and not entry.get("nilpotent"):
            counter += 1
            entry["conjecture_C_counterexample"] = True
        print(_dump(entry))
    summary = {"entries": len(results), "violations": violations, "errors": errors,
               "conjecture_C_counterexamples": counter, "checks": list(checks)}
    print(_dump({"summary": summary}))
    _write_json(args.json, {"summary": summary, "entries": results})
    return EXIT_VIOLATION if violations else EXIT_OK


# --- entry point ----------------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="charlat", description="Orders generated by character values.")
    ap.add_argument("--version", action="version", version=f"charlat {__version__}")
    sub = ap.add_subparsers(dest="command", required=True)

    t = sub.add_parser("table", help="print a character table")
    t.add_argument("source", help="family spec (dihedral:8, family:c4c4xc3), perm:<file> or json:<file>")
    t.add_argument("--json", metavar="PATH", help="also write a table document")
    t.set_defaults(func=cmd_table)

    q = sub.add_parser("quotient", help="structure of Z_K / Z[G]")
    q.add_argument("source")
    q.add_argument("--json", metavar="PATH")
    q.set_defaults(func=cmd_quotient)

    a = sub.add_parser("an", help="Z_{Q(A_n)} / Z[A_n] via multiquadratic orders")
    a.add_argument("n", type=int)
    a.add_argument("--max", type=int, default=31)
    a.add_argument("--paper-table", action="store_true", help="render all rows 2..n in table layout")
    a.add_argument("--hnf-ceiling", type=int, default=0, metavar="RANK", help="refuse lattices above this rank")
    a.add_argument("--json", metavar="PATH")
    a.set_defaults(func=cmd_an)

    s = sub.add_parser("scan", help="run theorem checks over a corpus")
    s.add_argument("--corpus", default="builtin", help="'builtin' or a JSON list of sources")
    s.add_argument("--check", action="append", choices=CHECKS)
    s.add_argument("--threads", type=int, default=1)
    s.add_argument("--json", metavar="PATH")
    s.set_defaults(func=cmd_scan)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except InputError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_INPUT
    except (GroupTooLargeError, ResourceCeiling) as e:
        print(f"resource ceiling: {e}", file=sys.stderr)
        return EXIT_RESOURCE


if __name__ == "__main__":
    sys.exit(main())
