"""Description-file ingestion, pipeline orchestration, and report emission.

Exit codes: 0 all non-skipped verdicts pass, 1 a theorem hypothesis or check
failed, 2 parse/schema/internal error.  Reports are byte-stable for equal
inputs and configuration.
"""

import argparse
import json
import os
import sys
from dataclasses import dataclass

from . import completion as completion_mod
from . import moncat, sheaf, zi as zi_mod
from .spectrum import hasse_edges, spectrum as spectrum_of
from .catcore import validate_category
from .errors import (BudgetExceeded, HypothesisNotMet, MalformedTable,
                     NotAFilter, NotAMonoid, NotAQuantale, NotASemilattice,
                     NotATopology, ParseError, SchemaError,
                     SearchBudgetExceeded)
from .moncat import validate_monoidal

BUILDER_ERRORS = (MalformedTable, NotAMonoid, NotAQuantale, NotASemilattice,
                  NotATopology, SchemaError, ParseError)


@dataclass
class CategoryDescription:
    name: str
    kind: str
    payload: dict


@dataclass
class RunConfig:
    budget_halfbraiding: int = zi_mod.DEFAULT_HALFBRAIDING_BUDGET
    budget_completion: int = completion_mod.DEFAULT_COMPLETION_BUDGET
    jobs: int = 1
    seed: int = 0
    verbose: bool = False
    fmt: str = "json"

    def __post_init__(self):
        if self.budget_halfbraiding <= 0 or self.budget_completion <= 0:
            raise SchemaError("budgets must be positive")


def format_id(x):
    """Readable, deterministic display name for object/morphism ids."""
    if isinstance(x, tuple):
        if all(isinstance(e, str) for e in x):
            return "{" + ",".join(x) + "}"
        return "(" + ",".join(format_id(e) for e in x) + ")"
    return str(x)


def parse_description(path):
    """Load and schema-check a description file."""
    try:
        with open(path, "rb") as fh:
            raw = json.load(fh)
    except OSError as e:
        raise ParseError(f"cannot read {path}: {e}")
    except json.JSONDecodeError as e:
        raise ParseError(f"{path}: line {e.lineno}, column {e.colno}: {e.msg}")
    if not isinstance(raw, dict):
        raise SchemaError(f"{path}: top level must be an object")
    for key in ("name", "kind", "payload"):
        if key not in raw:
            raise SchemaError(f"{path}: missing field {key!r}")
    kind = raw["kind"]
    if kind not in ("table", "semilattice", "quantale", "topology",
                    "boolean", "monoid", "functor"):
        raise SchemaError(f"{path}: unknown kind {kind!r}")
    return CategoryDescription(raw["name"], kind, raw["payload"])


def build_category(desc):
    """Run the builder named by the description kind."""
    p = desc.payload
    if desc.kind == "semilattice":
        return moncat.from_semilattice(_strs(p["elements"]), p["meet"])
    if desc.kind == "quantale":
        return moncat.from_quantale(_strs(p["elements"]), p["leq"],
                                    p["mul"], p["unit"])
    if desc.kind == "topology":
        return moncat.from_topology(_strs(p["points"]),
                                    [tuple(o) for o in p["opens"]])
    if desc.kind == "boolean":
        return boolean_algebra(int(p["atoms"]))
    if desc.kind == "monoid":
        return moncat.from_monoid(_strs(p["elements"]), p["mul"], p["unit"])
    if desc.kind == "table":
        return _table_from_payload(p)
    raise SchemaError(f"kind {desc.kind!r} does not describe a category")


def boolean_algebra(n_atoms):
    """The Boolean algebra 2^n as a posetal monoidal category."""
    if not 0 <= n_atoms <= 6:
        raise SchemaError("atoms must lie between 0 and 6")
    atoms = [chr(ord("a") + i) for i in range(n_atoms)]
    elements = []
    for mask in range(1 << n_atoms):
        elements.append(tuple(a for i, a in enumerate(atoms) if mask >> i & 1))
    elements.sort(key=lambda t: (len(t), t))
    meet = {(x, y): tuple(sorted(set(x) & set(y)))
            for x in elements for y in elements}
    return moncat.from_semilattice(elements, meet)


def _strs(xs):
    return [str(x) for x in xs]


def _tuplize(x):
    """JSON arrays standing for tuple ids become tuples (hashable)."""
    if isinstance(x, list):
        return tuple(_tuplize(e) for e in x)
    return x


def _table_from_payload(p):
    from .catcore import CategoryTable
    objects = tuple(_tuplize(o) for o in p["objects"])
    homs, src, dst = {}, {}, {}
    for entry in p["homs"]:
        a, b = _tuplize(entry["src"]), _tuplize(entry["dst"])
        ms = tuple(_tuplize(f) for f in entry["morphisms"])
        homs[a, b] = ms
        for f in ms:
            src[f], dst[f] = a, b
    compose = {(_tuplize(e["g"]), _tuplize(e["f"])): _tuplize(e["result"])
               for e in p["compose"]}
    identity = {}
    for a in objects:
        cands = [e for e in homs.get((a, a), ())
                 if all(compose.get((e, f)) == f for f in src if dst[f] == a)
                 and all(compose.get((g, e)) == g for g in src if src[g] == a)]
        if len(cands) != 1:
            raise SchemaError(f"cannot derive an identity for object {a!r}")
        identity[a] = cands[0]
    base = CategoryTable(objects, homs, identity, compose)
    tensor_obj = {(_tuplize(e["a"]), _tuplize(e["b"])): _tuplize(e["result"])
                  for e in p["tensor_obj"]}
    tensor_mor = {(_tuplize(e["f"]), _tuplize(e["g"])): _tuplize(e["result"])
                  for e in p["tensor_mor"]}
    symmetry = None
    if "symmetry" in p:
        symmetry = {(_tuplize(e["a"]), _tuplize(e["b"])): _tuplize(e["morphism"])
                    for e in p["symmetry"]}
    return moncat.MonoidalTable(base, _tuplize(p["unit"]), tensor_obj,
                                tensor_mor, symmetry)


def emit_description(m, name, kind="table"):
    """Serialize a MonoidalTable back into the table schema (round-trips
    through parse_description/build_category)."""
    c = m.base
    payload = {
        "objects": list(c.objects),
        "unit": m.unit,
        "homs": [{"src": a, "dst": b, "morphisms": list(c.homs[a, b])}
                 for (a, b) in sorted(c.homs, key=c._hom_key)],
        "compose": [{"g": g, "f": f, "result": r}
                    for (g, f), r in sorted(c.compose.items(),
                                            key=lambda kv: (c.mor_index[kv[0][0]],
                                                            c.mor_index[kv[0][1]]))],
        "tensor_obj": [{"a": a, "b": b, "result": m.tensor_obj[a, b]}
                       for a in c.objects for b in c.objects],
        "tensor_mor": [{"f": f, "g": g, "result": m.tensor_mor[f, g]}
                       for f in c.morphisms for g in c.morphisms],
    }
    if m.symmetry is not None:
        payload["symmetry"] = [{"a": a, "b": b, "morphism": m.symmetry[a, b]}
                               for a in c.objects for b in c.objects]
    return {"name": name, "kind": kind, "payload": payload}


def report_to_dict(report):
    """The SheafReport JSON schema: zi Hasse edges, spectrum, verdicts, stalks."""
    out = {}
    if report.lattice is not None:
        out["zi"] = [[format_id(a), format_id(b)]
                     for a, b in hasse_edges(report.lattice)]
        pts = [sorted(format_id(e) for e in P.members(report.lattice))
               for P in report.space.points]
        basis = {format_id(u): [i for i in range(len(report.space.points))
                                if report.space.basis[u] >> i & 1]
                 for u in report.lattice.elements}
        out["spectrum"] = {"points": pts, "basis": basis}
    else:
        out["zi"] = []
        out["spectrum"] = {"points": [], "basis": {}}
    out["verdicts"] = {
        name: {"status": v.status,
               "witness": None if v.witness is None else _plain(v.witness),
               "note": v.note}
        for name, v in sorted(report.verdicts.items())}
    out["stalks"] = {str(p): {"zi": info["zi"], "local": info["local"],
                              "two_valued": info["two_valued"]}
                     for p, info in sorted(report.stalk_info.items())}
    out["global_sections_count"] = report.global_sections_count
    out["half_braiding_counts"] = report.half_braiding_counts
    return out


def _plain(x):
    if isinstance(x, dict):
        return {format_id(k) if isinstance(k, tuple) else str(k): _plain(v)
                for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_plain(v) for v in x]
    if isinstance(x, (bool, int, float, str)) or x is None:
        return x
    return format_id(x) if isinstance(x, tuple) else str(x)


def emit_report(report, fmt="json"):
    """Bytes of the report; JSON per the sheaf schema, or DOT graphs."""
    if fmt == "json":
        return (json.dumps(report_to_dict(report), indent=2) + "\n").encode()
    lines = ["digraph tensortopo {"]
    if report.lattice is not None:
        lines.append("  subgraph cluster_zi {")
        lines.append('    label="ZI";')
        for e in report.lattice.elements:
            lines.append(f'    "zi_{format_id(e)}";')
        for a, b in hasse_edges(report.lattice):
            lines.append(f'    "zi_{format_id(a)}" -> "zi_{format_id(b)}";')
        lines.append("  }")
        lines.append("  subgraph cluster_spectrum {")
        lines.append('    label="Spec";')
        for i in range(len(report.space.points)):
            lines.append(f'    "pt_{i}";')
        for u in report.lattice.elements:
            mask = report.space.basis[u]
            for i in range(len(report.space.points)):
                if mask >> i & 1:
                    lines.append(f'    "zi_{format_id(u)}" -> "pt_{i}";')
        lines.append("  }")
    lines.append("}")
    return ("\n".join(lines) + "\n").encode()


def lattice_to_dict(lat):
    return {"elements": [format_id(e) for e in lat.elements],
            "hasse": [[format_id(a), format_id(b)]
                      for a, b in hasse_edges(lat)]}


def run_pipeline(desc, config):
    """Build the described category, run represent, return (report, exit)."""
    m = build_category(desc)
    report = sheaf.represent(m, halfbraiding_budget=config.budget_halfbraiding,
                             jobs=config.jobs)
    return report, (0 if report.ok else 1)


def _zi_with_joins(m, config):
    zi = zi_mod.central_idempotents(m, config.budget_halfbraiding)
    fj = zi_mod.has_universal_finite_joins(m, zi)
    return zi, fj


def cmd_validate(desc, config, out):
    m = build_category(desc)
    rep_c = validate_category(m.base)
    rep_m = validate_monoidal(m)
    ok = rep_c.ok and rep_m.ok
    payload = {"name": desc.name, "category": str(rep_c), "monoidal": str(rep_m)}
    out.write((json.dumps(payload, indent=2) + "\n").encode())
    return 0 if ok else 1


def cmd_zi(desc, config, out):
    m = build_category(desc)
    zi, fj = _zi_with_joins(m, config)
    if config.fmt == "dot" and fj.ok:
        lat = zi_mod.to_lattice_model(zi)
        lines = ["digraph zi {"]
        for e in lat.elements:
            lines.append(f'  "{format_id(e)}";')
        for a, b in hasse_edges(lat):
            lines.append(f'  "{format_id(a)}" -> "{format_id(b)}";')
        lines.append("}")
        out.write(("\n".join(lines) + "\n").encode())
        return 0
    payload = {
        "name": desc.name,
        "classes": [format_id(zi.class_name(i)) for i in range(zi.n)],
        "top": format_id(zi.class_name(zi.top)),
        "leq": sorted([format_id(zi.class_name(i)), format_id(zi.class_name(j))]
                      for (i, j) in sorted(zi.leq) if i != j),
        "universal_finite_joins": fj.status,
    }
    if fj.ok:
        payload["bottom"] = format_id(zi.class_name(zi.bottom))
    out.write((json.dumps(payload, indent=2) + "\n").encode())
    return 0


def cmd_spectrum(desc, config, out):
    m = build_category(desc)
    zi, fj = _zi_with_joins(m, config)
    if not fj.ok:
        out.write((json.dumps({"error": fj.note}, indent=2) + "\n").encode())
        return 1
    lat = zi_mod.to_lattice_model(zi)
    space = spectrum_of(lat)
    if config.fmt == "dot":
        lines = ["digraph spectrum {"]
        for i in range(len(space.points)):
            lines.append(f'  "pt_{i}";')
        for u in lat.elements:
            for i in range(len(space.points)):
                if space.basis[u] >> i & 1:
                    lines.append(f'  "B_{format_id(u)}" -> "pt_{i}";')
        lines.append("}")
        out.write(("\n".join(lines) + "\n").encode())
        return 0
    payload = {
        "name": desc.name,
        "points": [sorted(format_id(e) for e in P.members(lat))
                   for P in space.points],
        "basis": {format_id(u): [i for i in range(len(space.points))
                                 if space.basis[u] >> i & 1]
                  for u in lat.elements},
    }
    out.write((json.dumps(payload, indent=2) + "\n").encode())
    return 0


def cmd_restrict(desc, config, out, at):
    m = build_category(desc)
    zi = zi_mod.central_idempotents(m, config.budget_halfbraiding)
    matches = [i for i in range(zi.n) if format_id(zi.class_name(i)) == at]
    if not matches:
        raise SchemaError(f"no central idempotent class named {at!r}; "
                          f"classes: {[format_id(zi.class_name(i)) for i in range(zi.n)]}")
    sec = sheaf.restrict(m, zi, matches[0])
    c = m.base
    payload = {"name": desc.name, "at": at,
               "hom_counts": {f"{format_id(a)}->{format_id(b)}":
                              len(sec.hom_mors(a, b))
                              for a in c.objects for b in c.objects
                              if sec.hom_mors(a, b)}}
    if config.verbose:
        payload["homs"] = {f"{format_id(a)}->{format_id(b)}":
                           [format_id(r) for r in sec.hom_mors(a, b)]
                           for a in c.objects for b in c.objects
                           if sec.hom_mors(a, b)}
    out.write((json.dumps(payload, indent=2) + "\n").encode())
    return 0


def cmd_stalks(desc, config, out):
    m = build_category(desc)
    zi, fj = _zi_with_joins(m, config)
    if not fj.ok:
        out.write((json.dumps({"error": fj.note}, indent=2) + "\n").encode())
        return 1
    lat = zi_mod.to_lattice_model(zi)
    space = spectrum_of(lat)
    name_to_idx = {zi.class_name(i): i for i in range(zi.n)}
    payload = {"name": desc.name, "stalks": {}}
    code = 0
    for p, P in enumerate(space.points):
        xs = [name_to_idx[e] for e in P.members(lat)]
        st = sheaf.stalk(m, zi, xs)
        zs = zi_mod.central_idempotents(st.section.table)
        local = sheaf.is_vee_local(zs)
        payload["stalks"][str(p)] = {
            "point": sorted(format_id(e) for e in P.members(lat)),
            "zi": [format_id(zs.class_name(i)) for i in range(zs.n)],
            "local": local,
            "two_valued": zs.n == 2,
        }
        if not local:
            code = 1
    out.write((json.dumps(payload, indent=2) + "\n").encode())
    return code


def cmd_sheaf_check(desc, config, out):
    m = build_category(desc)
    zi, fj = _zi_with_joins(m, config)
    payload = {"name": desc.name, "universal_finite_joins": fj.status}
    if not fj.ok:
        payload["note"] = fj.note
        out.write((json.dumps(payload, indent=2) + "\n").encode())
        return 1
    bad = []
    for i in range(zi.n):
        for j in range(i, zi.n):
            v = sheaf.check_sheaf_equalizer(m, zi, i, j)
            if not v.ok:
                bad.append(_plain(v.witness))
    zero = sheaf.check_zero_section(m)
    payload["equalizers"] = "pass" if not bad else bad
    payload["zero_section"] = zero.status
    out.write((json.dumps(payload, indent=2) + "\n").encode())
    return 0 if not bad and zero.ok else 1


def cmd_represent(desc, config, out):
    report, code = run_pipeline(desc, config)
    out.write(emit_report(report, config.fmt))
    return code


def cmd_complete(desc, config, out, target_path, functor_path):
    m = build_category(desc)
    zi = zi_mod.central_idempotents(m, config.budget_halfbraiding)
    comp = completion_mod.build_completion(m, zi, budget=config.budget_completion)
    emb = completion_mod.embed(m, zi, comp)
    verdicts = {
        "zi_completion": completion_mod.check_zi_completion(m, zi, comp),
        "completion_joins": completion_mod.check_completion_joins(m, zi, comp),
        "embedding": completion_mod.check_embedding(m, zi, comp, emb),
    }
    if target_path:
        if not functor_path:
            raise SchemaError("--target requires --functor")
        target_desc = parse_description(target_path)
        functor_desc = parse_description(functor_path)
        if functor_desc.kind != "functor":
            raise SchemaError("functor file must have kind 'functor'")
        target = build_category(target_desc)
        obj_map = dict(functor_desc.payload["obj_map"])
        F = moncat.posetal_monoidal_functor(m, target, obj_map)
        zi_d = zi_mod.central_idempotents(target, config.budget_halfbraiding)
        zi_mod.has_universal_finite_joins(target, zi_d)
        try:
            ext = completion_mod.extend_functor(F, comp, zi, zi_d)
            verdicts["extension"] = ext.verdict
        except HypothesisNotMet as e:
            verdicts["extension"] = zi_mod.Verdict("extension", False, note=str(e))
    payload = {"name": desc.name,
               "objects": len(comp.table.base.objects),
               "morphisms": len(comp.table.base.morphisms),
               "verdicts": {k: {"status": v.status,
                                "witness": _plain(v.witness),
                                "note": v.note}
                            for k, v in sorted(verdicts.items())}}
    out.write((json.dumps(payload, indent=2) + "\n").encode())
    return 0 if all(v.ok for v in verdicts.values()) else 1


def cmd_embed_product(desc, config, out):
    m = build_category(desc)
    zi, fj = _zi_with_joins(m, config)
    if not fj.ok:
        out.write((json.dumps({"error": fj.note}, indent=2) + "\n").encode())
        return 1
    lat = zi_mod.to_lattice_model(zi)
    space = spectrum_of(lat)
    name_to_idx = {zi.class_name(i): i for i in range(zi.n)}
    sections = {}
    stalks = {}
    for p, P in enumerate(space.points):
        xs = [name_to_idx[e] for e in P.members(lat)]
        stalks[p] = sheaf.stalk(m, zi, xs, sections)
    _, verdict = sheaf.embed_into_product_of_stalks(m, zi, stalks)
    payload = {"name": desc.name, "points": len(space.points),
               "faithful": verdict.ok, "note": verdict.note}
    out.write((json.dumps(payload, indent=2) + "\n").encode())
    return 0 if verdict.ok else 1


def make_parser():
    ap = argparse.ArgumentParser(
        prog="tensortopo",
        description="Verification engine for sheaf representations of finite "
                    "monoidal categories")
    ap.add_argument("--budget-halfbraiding", type=int,
                    default=zi_mod.DEFAULT_HALFBRAIDING_BUDGET)
    ap.add_argument("--budget-completion", type=int,
                    default=completion_mod.DEFAULT_COMPLETION_BUDGET)
    ap.add_argument("--jobs", type=int, default=1)
    ap.add_argument("--seed", type=int, default=None)
    ap.add_argument("--format", choices=["json", "dot"], default="json")
    ap.add_argument("--verbose", action="store_true")
    sub = ap.add_subparsers(dest="command", required=True)
    for name in ("validate", "zi", "spectrum", "stalks", "sheaf-check",
                 "represent", "embed-product"):
        p = sub.add_parser(name)
        p.add_argument("file")
    p = sub.add_parser("restrict")
    p.add_argument("file")
    p.add_argument("--at", required=True, help="central idempotent class name")
    p = sub.add_parser("complete")
    p.add_argument("file")
    p.add_argument("--target", default=None)
    p.add_argument("--functor", default=None)
    return ap


def main(argv=None):
    args = make_parser().parse_args(argv)
    seed = args.seed
    if seed is None:
        seed = int(os.environ.get("TENSORTOPO_SEED", "0"))
    out = sys.stdout.buffer
    try:
        config = RunConfig(args.budget_halfbraiding, args.budget_completion,
                           args.jobs, seed, args.verbose, args.format)
        desc = parse_description(args.file)
        if args.command == "validate":
            return cmd_validate(desc, config, out)
        if args.command == "zi":
            return cmd_zi(desc, config, out)
        if args.command == "spectrum":
            return cmd_spectrum(desc, config, out)
        if args.command == "restrict":
            return cmd_restrict(desc, config, out, args.at)
        if args.command == "stalks":
            return cmd_stalks(desc, config, out)
        if args.command == "sheaf-check":
            return cmd_sheaf_check(desc, config, out)
        if args.command == "represent":
            return cmd_represent(desc, config, out)
        if args.command == "complete":
            return cmd_complete(desc, config, out, args.target, args.functor)
        if args.command == "embed-product":
            return cmd_embed_product(desc, config, out)
        raise SchemaError(f"unknown command {args.command!r}")
    except BUILDER_ERRORS as e:
        sys.stderr.write(f"error: {e}\n")
        return 2
    except (BudgetExceeded, SearchBudgetExceeded, NotAFilter) as e:
        sys.stderr.write(f"error: {e}\n")
        return 2


if __name__ == "__main__":
    sys.exit(main())
