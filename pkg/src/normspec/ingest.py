"""Group documents, report serialization, DOT export and batch runs."""

from __future__ import annotations

import hashlib
import json
import re
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .bits import to_indices
from .catalog import UnknownCatalogName, catalog, normalize_name
from .group import DEFAULT_ORDER_CAP, GroupError, direct_product, from_permutation_generators, validate_cayley_table
from .lattice import LABEL_ELEMENTS_UP_TO, LatticeTooLarge, hasse_edges, proper_points, subgroup_label
from .topology import FamilyTooLarge, FiniteSpace, coarse_lower_topology, subspace
from .verify import TheoremViolation, VerifyConfig, verify_theorem_main

FORMAT_VERSION = 1
SCHEMA_VERSION = 1
KINDS = ("cayley", "permutation", "catalog", "product")
EMIT_CHOICES = ("report-json", "report-text", "dot-hasse", "dot-specialization")
INLINE_WITNESS_LIMIT = 64


class ParseError(ValueError):
    def __init__(self, line, column, reason):
        super().__init__(f"line {line}, column {column}: {reason}")
        self.line = line
        self.column = column
        self.reason = reason


class MalformedCycle(ValueError):
    pass


@dataclass(frozen=True)
class GroupDocument:
    kind: str
    payload: object
    id: str
    format_version: int = FORMAT_VERSION


def _position(text, needle):
    i = text.find(needle)
    if i < 0:
        return 1, 1
    line = text.count("\n", 0, i) + 1
    return line, i - (text.rfind("\n", 0, i) + 1) + 1


_CYCLE = re.compile(r"\(([^()]*)\)")


def parse_cycles(text, degree):
    """Image list of a permutation written in cycle notation, e.g. ``"(0 1 2)(3 4)"``."""
    s = text.strip()
    perm = list(range(degree))
    if s in ("", "1", "()", "e", "id"):
        return perm
    if _CYCLE.sub("", s).strip():
        raise MalformedCycle(f"unexpected text outside cycles in {text!r}")
    seen = set()
    for body in _CYCLE.findall(s):
        pts = [p for p in re.split(r"[\s,]+", body.strip()) if p]
        try:
            pts = [int(p) for p in pts]
        except ValueError as exc:
            raise MalformedCycle(f"non-integer point in {text!r}") from exc
        if any(p < 0 or p >= degree for p in pts):
            raise MalformedCycle(f"point out of range 0..{degree - 1} in {text!r}")
        if seen & set(pts) or len(set(pts)) != len(pts):
            raise MalformedCycle(f"repeated point in {text!r}")
        seen |= set(pts)
        for a, b in zip(pts, pts[1:] + pts[:1]):
            perm[a] = b
    return perm


def _check_payload(kind, payload, where):
    line, col = where
    if kind == "catalog":
        if not isinstance(payload, str):
            raise ParseError(line, col, "catalog payload must be a group name")
        name = normalize_name(payload)
        catalog(name)  # raises UnknownCatalogName
        return name
    if kind == "cayley":
        if isinstance(payload, list):
            payload = {"table": payload}
        if not isinstance(payload, dict) or "table" not in payload:
            raise ParseError(line, col, "cayley payload must be a table or {table, names}")
        table = payload["table"]
        n = len(table) if isinstance(table, list) else -1
        if n <= 0 or not all(isinstance(r, list) and len(r) == n for r in table):
            raise ParseError(line, col, "Cayley table must be a non-empty square list of lists")
        if not all(isinstance(v, int) and not isinstance(v, bool) for r in table for v in r):
            raise ParseError(line, col, "Cayley table entries must be integers")
        out = {"table": table}
        names = payload.get("names")
        if names is not None:
            if not isinstance(names, list) or len(names) != n:
                raise ParseError(line, col, f"names must be a list of {n} strings")
            out["names"] = [str(x) for x in names]
        return out
    if kind == "permutation":
        if not isinstance(payload, dict) or not isinstance(payload.get("degree"), int):
            raise ParseError(line, col, "permutation payload needs an integer degree")
        degree = payload["degree"]
        if degree < 1:
            raise ParseError(line, col, "degree must be positive")
        gens = payload.get("gens", [])
        if not isinstance(gens, list):
            raise ParseError(line, col, "gens must be a list")
        for gen in gens:
            if isinstance(gen, str):
                parse_cycles(gen, degree)
            elif not (isinstance(gen, list) and sorted(gen) == list(range(degree))):
                raise MalformedCycle(f"generator {gen!r} is not a permutation of 0..{degree - 1}")
        return {"degree": degree, "gens": gens}
    if kind == "product":
        factors = payload.get("factors") if isinstance(payload, dict) else payload
        if not isinstance(factors, list) or len(factors) < 1:
            raise ParseError(line, col, "product payload needs a non-empty factors list")
        out = []
        for f in factors:
            if isinstance(f, str):
                out.append(_check_payload("catalog", f, where))
            elif isinstance(f, dict) and f.get("kind") in KINDS:
                out.append({"kind": f["kind"], "payload": _check_payload(f["kind"], f.get("payload"), where)})
            else:
                raise ParseError(line, col, "each factor is a catalog name or {kind, payload}")
        return {"factors": out}
    raise ParseError(line, col, f"unknown kind {kind!r}")


def _default_id(kind, payload):
    if kind == "catalog":
        return payload
    digest = hashlib.sha1(json.dumps(payload, sort_keys=True).encode()).hexdigest()[:10]
    return f"{kind}-{digest}"


def parse_group_document(text):
    """Parse and structurally validate a JSON group document."""
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(exc.lineno, exc.colno, exc.msg) from exc
    if not isinstance(obj, dict):
        raise ParseError(1, 1, "document must be a JSON object")
    version = obj.get("format_version", FORMAT_VERSION)
    if version != FORMAT_VERSION:
        raise ParseError(*_position(text, '"format_version"'), f"unsupported format_version {version!r}")
    kind = obj.get("kind")
    if kind not in KINDS:
        raise ParseError(*_position(text, '"kind"'), f"kind must be one of {', '.join(KINDS)}")
    if "payload" not in obj:
        raise ParseError(1, 1, "missing payload")
    payload = _check_payload(kind, obj["payload"], _position(text, '"payload"'))
    doc_id = obj.get("id") or _default_id(kind, payload)
    if not isinstance(doc_id, str):
        raise ParseError(*_position(text, '"id"'), "id must be a string")
    return GroupDocument(kind, payload, doc_id, version)


def serialize_group_document(doc):
    obj = {"format_version": doc.format_version, "id": doc.id, "kind": doc.kind, "payload": doc.payload}
    return json.dumps(obj, sort_keys=True, indent=2) + "\n"


def catalog_document(name):
    name = normalize_name(name)
    catalog(name)
    return GroupDocument("catalog", name, name)


def _payload_group(kind, payload, order_cap):
    if kind == "catalog":
        return catalog(payload)
    if kind == "cayley":
        return validate_cayley_table(payload["table"], payload.get("names"))
    if kind == "permutation":
        degree = payload["degree"]
        gens = [parse_cycles(x, degree) if isinstance(x, str) else x for x in payload["gens"]]
        return from_permutation_generators(degree, gens, order_cap=order_cap)
    g = None
    for f in payload["factors"]:
        h = catalog(f) if isinstance(f, str) else _payload_group(f["kind"], f["payload"], order_cap)
        g = h if g is None else direct_product(g, h, order_cap=order_cap)
    return g


def document_to_group(doc, order_cap=DEFAULT_ORDER_CAP):
    return _payload_group(doc.kind, doc.payload, order_cap)


# labels and DOT


def _quote(s):
    return '"' + s.replace("\\", "\\\\").replace('"', '\\"') + '"'


def _dot(name, labels, edges, rankdir="BT"):
    lines = [f"digraph {name} {{", f"  rankdir={rankdir};"]
    for i, lab in enumerate(labels):
        lines.append(f"  n{i} [label={_quote(lab)}];")
    for a, b in sorted(edges):
        lines.append(f"  n{a} -> n{b};")
    lines.append("}")
    return "\n".join(lines) + "\n"


def specialization_reduction(spec):
    """Covering pairs of the specialization preorder; mutually specializing
    points are joined in index order."""
    spec = np.asarray(spec, dtype=bool)
    n = spec.shape[0]
    strict = spec & ~spec.T
    edges = []
    for x in range(n):
        for y in range(n):
            if x == y or not spec[x, y]:
                continue
            if spec[y, x]:
                if x < y:
                    edges.append((x, y))
                continue
            if not (strict[x] & strict[:, y]).any():
                edges.append((x, y))
    return edges


def export_dot(obj, flavor):
    """DOT text for a lattice (``"hasse"``) or a finite space (``"specialization"``)."""
    if flavor == "hasse":
        if isinstance(obj, FiniteSpace):
            raise ValueError("hasse flavor needs a NormalLattice")
        labels = [subgroup_label(obj.parent, p.members) for p in obj.points]
        return _dot("hasse", labels, hasse_edges(obj))
    if flavor == "specialization":
        if not isinstance(obj, FiniteSpace):
            raise ValueError("specialization flavor needs a FiniteSpace")
        return _dot("specialization", list(obj.point_labels),
                    specialization_reduction(obj.specialization()))
    raise ValueError(f"unknown flavor {flavor!r}")


def group_spaces(lat, exhaustive_point_cap=20):
    labels = [subgroup_label(lat.parent, p.members) for p in lat.points]
    x = coarse_lower_topology(lat, exhaustive_point_cap=exhaustive_point_cap, point_labels=labels)
    return x, subspace(x, proper_points(lat).indices)


# reports


def _limited(items, limit=INLINE_WITNESS_LIMIT):
    items = list(items)
    return items[:limit], len(items) > limit


def spectral_to_dict(rep):
    qc = rep.quasi_compact
    qc_wit, qc_trunc = _limited(qc.witnesses)
    sep, sep_trunc = _limited(sorted(rep.t0.separating.items()))
    gen = sorted((to_indices(c), x) for c, x in rep.sober.generic_points.items())
    b = rep.qc_open_basis
    return {
        "space_id": rep.space_id,
        "point_count": rep.point_count,
        "mode": rep.mode,
        "verdict": rep.verdict,
        "flags": rep.flags,
        "quasi_compact": {
            "holds": qc.holds,
            "method": qc.method,
            "subfamilies_checked": qc.subfamilies_checked,
            "witnesses": [{"subfamily": f, "finite_subfamily": w} for f, w in qc_wit],
            "witnesses_truncated": qc_trunc,
        },
        "sober": {
            "holds": rep.sober.holds,
            "generic_points": [{"closed_set": c, "point": x} for c, x in gen],
            "failure": None if rep.sober.failure is None else {
                "closed_set": to_indices(rep.sober.failure[0]), "candidates": rep.sober.failure[1]},
        },
        "t0": {
            "holds": rep.t0.holds,
            "witness": list(rep.t0.witness) if rep.t0.witness else None,
            "separating": [{"pair": list(k), "closed_set": to_indices(v)} for k, v in sep],
            "separating_truncated": sep_trunc,
        },
        "qc_open_basis": {
            "holds": b.holds,
            "is_basis": b.is_basis,
            "intersection_closed": b.intersection_closed,
            "method": b.method,
            "failure": None if b.failure is None else [to_indices(m) for m in b.failure],
        },
    }


def _family_to_dict(res):
    return {
        "holds": res.holds,
        "method": res.method,
        "families_checked": res.families_checked,
        "empty_instances": res.empty_instances,
        "witnesses": res.witnesses,
        "failure": res.failure,
        "seed": res.seed,
    }


def report_to_dict(rep, with_timings=False):
    lat = rep.lattice
    g = lat.parent
    lemma = rep.lemma
    return {
        "schema_version": SCHEMA_VERSION,
        "group_id": rep.group_id,
        "order": rep.order,
        "status": rep.status,
        "normal_subgroup_count": len(lat),
        "normal_subgroups": [
            {
                "index": i,
                "size": p.size,
                "label": subgroup_label(g, p.members),
                "elements": p.elements() if g.order <= LABEL_ELEMENTS_UP_TO else None,
            }
            for i, p in enumerate(lat.points)
        ],
        "maximal_normal_subgroups": rep.maximal_normal_subgroups,
        "hypothesis_holds": rep.hypothesis_holds,
        "n_space": spectral_to_dict(rep.n_space_report),
        "n_plus_open": rep.n_plus_open,
        "n_plus_space": spectral_to_dict(rep.n_plus_report),
        "lemma_chain_valid": rep.lemma_chain_valid,
        "lemma": {
            "premises": lemma.premises,
            "implication_holds": lemma.implication_holds,
            "open_transfer": lemma.open_transfer,
            "qc_open_transfer": lemma.qc_open_transfer,
        },
        "closure_identity": {
            "holds": rep.closure_identity.holds,
            "points": [
                {k: (to_indices(v) if k in ("closure", "v_set", "proper_closure") else v)
                 for k, v in row.items()}
                for row in rep.closure_identity.points
            ],
        },
        "intersection_identity": _family_to_dict(rep.intersection_identity),
        "join_compactness": _family_to_dict(rep.join_compactness),
        "seed": rep.seed,
        "caps": rep.caps,
        "timings_ms": rep.timings_ms if with_timings else None,
    }


def report_to_text(rep):
    lines = [f"group {rep.group_id}: order {rep.order}, {len(rep.lattice)} normal subgroups, "
             f"status {rep.status}"]
    lines.append(f"  maximal normal subgroups: {rep.maximal_normal_subgroups}")
    for name, sr in (("N(G)", rep.n_space_report), ("N+(G)", rep.n_plus_report)):
        flags = f" [{'; '.join(sr.flags)}]" if sr.flags else ""
        lines.append(
            f"  {name}: {sr.point_count} points ({sr.mode}) quasi-compact={sr.quasi_compact.holds} "
            f"sober={sr.sober.holds} t0={sr.t0.holds} qc-open-basis={sr.qc_open_basis.holds} "
            f"spectral={sr.verdict}{flags}"
        )
    lines.append(f"  N+(G) open in N(G): {rep.n_plus_open}; lemma chain valid: {rep.lemma_chain_valid}")
    lines.append(
        f"  closure identity: {rep.closure_identity.holds}; "
        f"intersection identity: {rep.intersection_identity.holds} "
        f"({rep.intersection_identity.method}, {rep.intersection_identity.families_checked} families); "
        f"join compactness: {rep.join_compactness.holds} "
        f"({rep.join_compactness.method}, {rep.join_compactness.families_checked} families, "
        f"{rep.join_compactness.empty_instances} empty)"
    )
    return "\n".join(lines) + "\n"


# batch runs


@dataclass
class RunConfig:
    inputs: list
    order_cap: int = 128
    lattice_cap: int = 4096
    exhaustive_point_cap: int = 20
    seed: int = 0
    emit: tuple = ("report-json",)
    trials: int = 1000
    out_dir: str | None = None
    timings: bool = False

    def __post_init__(self):
        if min(self.order_cap, self.lattice_cap, self.exhaustive_point_cap) <= 0:
            raise ValueError("caps must be positive")
        if not self.emit:
            raise ValueError("emit must be non-empty")
        bad = set(self.emit) - set(EMIT_CHOICES)
        if bad:
            raise ValueError(f"unknown emit kinds: {sorted(bad)}")


@dataclass
class RunResult:
    exit_code: int
    outputs: dict = field(default_factory=dict)
    errors: list = field(default_factory=list)


INPUT_ERRORS = (GroupError, UnknownCatalogName, LatticeTooLarge, FamilyTooLarge, ParseError,
                MalformedCycle)


def _safe_name(doc_id):
    return re.sub(r"[^A-Za-z0-9_.-]+", "_", doc_id)


def run(config):
    """Verify every input and render the requested outputs.

    Exit code 0 when everything verified (hypothesis failures included),
    1 on input errors, 2 when a proved statement failed.
    """
    vcfg = VerifyConfig(order_cap=config.order_cap, lattice_cap=config.lattice_cap,
                        exhaustive_point_cap=config.exhaustive_point_cap,
                        seed=config.seed, trials=config.trials)
    entries = []
    text_parts = []
    outputs = {}
    errors = []
    code = 0
    ids = [d.id for d in config.inputs]
    dup = sorted({i for i in ids if ids.count(i) > 1})
    if dup:
        return RunResult(1, {}, [f"duplicate group ids: {', '.join(dup)}"])
    for doc in config.inputs:
        try:
            g = document_to_group(doc, order_cap=DEFAULT_ORDER_CAP)
            rep = verify_theorem_main(g, doc.id, vcfg)
        except TheoremViolation as exc:
            code = 2
            errors.append(f"{doc.id}: TheoremViolation: {exc}")
            entries.append({"schema_version": SCHEMA_VERSION, "group_id": doc.id,
                            "status": "assertion_failed", "error": str(exc)})
            continue
        except INPUT_ERRORS as exc:
            code = max(code, 1)
            errors.append(f"{doc.id}: {type(exc).__name__}: {exc}")
            entries.append({"schema_version": SCHEMA_VERSION, "group_id": doc.id,
                            "status": "input_error", "error": f"{type(exc).__name__}: {exc}"})
            continue
        entries.append(report_to_dict(rep, with_timings=config.timings))
        text_parts.append(report_to_text(rep))
        base = _safe_name(doc.id)
        if "dot-hasse" in config.emit:
            outputs[f"{base}.hasse.dot"] = export_dot(rep.lattice, "hasse")
        if "dot-specialization" in config.emit:
            _, plus_space = group_spaces(rep.lattice, config.exhaustive_point_cap)
            outputs[f"{base}.specialization.dot"] = export_dot(plus_space, "specialization")
    if "report-json" in config.emit:
        outputs["report.json"] = json.dumps(entries, indent=2, sort_keys=True) + "\n"
    if "report-text" in config.emit:
        outputs["report.txt"] = "".join(text_parts)
    if config.out_dir is not None:
        out = Path(config.out_dir)
        out.mkdir(parents=True, exist_ok=True)
        for name, body in outputs.items():
            (out / name).write_text(body, encoding="utf-8")
    return RunResult(code, outputs, errors)
