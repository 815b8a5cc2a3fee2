"""Command line front end: config parsing, the pipeline, and text emitters.

    strataforge cartans|orbits|hasse|mhd|classify|limit --config run.yaml [--format dot|ascii|json]

Exit codes: 0 ok, 2 bad config or arguments, 3 internal consistency failure.
"""

from __future__ import annotations

import argparse
import json
import re
import sys
from dataclasses import dataclass, field

import yaml

from . import hodgelimits as H
from . import linalg as L
from .chevalley import InternalError
from .cyclofield import C, to_text
from .orbits import ConfigError, build_engine
from .realform import GradingError, find_frame
from .rootsystem import RootSystemError

SCHEMA_VERSION = 1
TYPES = ("A1", "A2", "B2", "C2", "G2", "C3")
RANKS = {"A1": 1, "A2": 2, "B2": 2, "C2": 2, "G2": 2, "C3": 3}
KEYS = ("type", "grading", "real_weyl_fixtures", "dotted_edges", "search_height",
        "search_depth", "max_candidates", "format")
FORMATS = ("json", "ascii", "dot")


# ---------------------------------------------------------------------------
# config

@dataclass
class RunConfig:
    type: str
    grading: tuple
    real_weyl_fixtures: dict = field(default_factory=dict)
    dotted_edges: list = field(default_factory=list)
    search_height: int = 3
    search_depth: int = 2
    max_candidates: int = 4000
    format: str | None = None


def _positions(node, path=(), out=None) -> dict:
    """Map key paths to 'line:col' using the composed YAML node tree."""
    out = {} if out is None else out
    out[path] = f"{node.start_mark.line + 1}:{node.start_mark.column + 1}"
    if isinstance(node, yaml.MappingNode):
        for k, v in node.value:
            _positions(v, path + (k.value,), out)
            # report mapping entries at their key
            out[path + (k.value,)] = f"{k.start_mark.line + 1}:{k.start_mark.column + 1}"
    elif isinstance(node, yaml.SequenceNode):
        for i, v in enumerate(node.value):
            _positions(v, path + (i,), out)
    return out


def parse_config(text: str) -> RunConfig:
    try:
        data = yaml.safe_load(text)
        node = yaml.compose(text)
    except yaml.YAMLError as e:
        raise ConfigError(f"config is not valid YAML: {e}") from None
    if not isinstance(data, dict):
        raise ConfigError("config must be a mapping")
    pos = _positions(node) if node is not None else {}
    errors = []

    def err(path, msg):
        where = pos.get(tuple(path)) or pos.get(tuple(path[:1])) or "?"
        name = "".join(f"[{p}]" if isinstance(p, int) else (f".{p}" if i else p) for i, p in enumerate(path))
        errors.append(f"{where}: {name}: {msg}")

    for k in data:
        if k not in KEYS:
            err([k], f"unknown key (allowed: {', '.join(KEYS)})")
    t = data.get("type")
    if t is None:
        err(["type"], "missing")
    elif not isinstance(t, str) or t.strip().upper() not in TYPES:
        err(["type"], f"must be one of {', '.join(TYPES)}")
    g = data.get("grading")
    if g is None:
        err(["grading"], "missing")
    elif not isinstance(g, list):
        err(["grading"], "must be a list of 0/1")
    else:
        for i, v in enumerate(g):
            if v not in (0, 1) or isinstance(v, bool):
                err(["grading", i], f"must be 0 or 1, got {v!r}")
        if isinstance(t, str) and t.strip().upper() in RANKS and len(g) != RANKS[t.strip().upper()]:
            err(["grading"], f"length {len(g)} does not match rank {RANKS[t.strip().upper()]} of {t}")
        if g and all(v == 0 for v in g):
            err(["grading"], "needs at least one 1")
    fx = data.get("real_weyl_fixtures") or {}
    if not isinstance(fx, dict):
        err(["real_weyl_fixtures"], "must map frame labels to lists of generators")
    else:
        for k, v in fx.items():
            if not isinstance(v, list) or not all(isinstance(x, str) for x in v):
                err(["real_weyl_fixtures", k], "must be a list of generator strings")
    de = data.get("dotted_edges") or []
    if not isinstance(de, list):
        err(["dotted_edges"], "must be a list of [src, dst, note]")
    else:
        for i, e in enumerate(de):
            if not isinstance(e, list) or len(e) not in (2, 3):
                err(["dotted_edges", i], "must be [src, dst] or [src, dst, note]")
    for k, lo in (("search_height", 1), ("search_depth", 0), ("max_candidates", 1)):
        v = data.get(k)
        if v is not None and (not isinstance(v, int) or isinstance(v, bool) or v < lo):
            err([k], f"must be an integer >= {lo}")
    f = data.get("format")
    if f is not None and f not in FORMATS:
        err(["format"], f"must be one of {', '.join(FORMATS)}")
    if errors:
        raise ConfigError("invalid config:\n  " + "\n  ".join(errors))
    return RunConfig(t.strip().upper(), tuple(g), dict(fx), [list(e) for e in de],
                     data.get("search_height", 3), data.get("search_depth", 2),
                     data.get("max_candidates", 4000), f)


def load_config(path: str) -> RunConfig:
    try:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as e:
        raise ConfigError(f"cannot read config {path}: {e.strerror}") from None
    return parse_config(text)


# ---------------------------------------------------------------------------
# pipeline

class Report:
    """Everything one run computes, built lazily."""

    def __init__(self, cfg: RunConfig):
        self.cfg = cfg
        self.eng = build_engine(cfg.type, cfg.grading, cfg.real_weyl_fixtures or None, cfg.search_depth)
        self.eng.classify()
        labels = {r.label for r in self.eng.records}
        for i, e in enumerate(cfg.dotted_edges):
            for x in e[:2]:
                if x not in labels:
                    raise ConfigError(f"dotted_edges[{i}]: unknown orbit {x!r}")
        self._annotated = False

    @property
    def records(self):
        return self.eng.records

    def annotate(self):
        if self._annotated:
            return
        eng = self.eng
        for r in eng.records:
            if r.flags["base"] or r.flags["boundary_stratum"]:
                r.polarizable = H.polarizability(eng, r, self.cfg.search_height, self.cfg.max_candidates)
            else:
                r.polarizable = {"verdict": "not_in_closure", "reason": "not reachable from D",
                                 "witness": None, "support": None, "rule": None}
            r.cuspidal = H.cuspidality(eng, r)
            r.flags["polarizable"] = r.polarizable["verdict"] == "polarizable"
            r.flags["cuspidal"] = r.cuspidal["verdict"] == "cuspidal"
        self._annotated = True

    def style(self, r) -> str:
        self.annotate()
        if r.flags["base"] or (r.flags["boundary_stratum"] and r.flags["polarizable"]):
            return "solid"
        if r.flags["boundary_stratum"]:
            return "crossed"
        return "open"


def _root(a) -> str:
    return "(" + ",".join(str(x) for x in a) + ")"


def _flags(r) -> dict:
    return {k: bool(r.flags[k]) for k in sorted(r.flags)}


def orbit_rows(rep: Report) -> list:
    out = []
    for r in rep.records:
        out.append({
            "label": r.label,
            "frame": rep.eng.frames[r.frame].label,
            "coset_rep_word": r.word,
            "members": [[rep.eng.frames[j].label, w or "e"] for j, w in r.members],
            "codim": r.codim,
            "flags": _flags(r),
            "hpq": r.bigrading.table(),
            "edges": [[d, k] for d, k in r.edges],
        })
    return out


def _witness_json(eng, rec):
    pol = rec.polarizable
    if pol["witness"] is None:
        return None
    fr = eng.frames[rec.frame]
    coords = L.matvec(fr.Cinv, pol["witness"])
    out = {}
    for k, x in enumerate(coords):
        if not x.is_zero():
            out[eng.la.basis_label(k)] = to_text(x)
    return out


def classify_rows(rep: Report) -> list:
    rep.annotate()
    rows = orbit_rows(rep)
    for row, r in zip(rows, rep.records):
        pol, cu = r.polarizable, r.cuspidal
        row["polarizable"] = {"verdict": pol["verdict"], "rule": pol["rule"], "reason": pol["reason"],
                              "witness_frame_coords": _witness_json(rep.eng, r),
                              "witness_support": None if pol["support"] is None else
                              [s if s == "h" else _root(s) for s in pol["support"]]}
        row["cuspidal"] = {"verdict": cu["verdict"], "levi_type": cu["levi_type"],
                           "inverse_cayley_roots": [_root(a) for a in cu["steps"]]}
        row["hodge_tate"] = bool(r.flags["hodge_tate"])
        row["style"] = rep.style(r)
    return rows


def cartan_rows(rep: Report) -> dict:
    eng = rep.eng
    rs = eng.rs
    frames = []
    for f, rw in zip(eng.frames, eng.real_weyl):
        frames.append({
            "label": f.label, "index": f.index, "real_rank": f.real_rank,
            "cayley_path": [_root(a) for a in f.path],
            "roots": f.summary(rs),
            "real_weyl_order": rw.order, "real_weyl_source": rw.source,
            "real_weyl_complete": bool(rw.complete),
            "real_weyl_upper_bound": rw.upper_bound_order,
        })
    edges = [[eng.frames[s].label, eng.frames[d].label, _root(a)] for s, d, a in eng.hasse.edges]
    return {"frames": frames, "edges": edges}


def _envelope(rep: Report, kind: str, body) -> dict:
    return {"schema_version": SCHEMA_VERSION, "kind": kind, "type": rep.cfg.type,
            "grading": list(rep.cfg.grading), kind: body}


def dumps(obj) -> str:
    return json.dumps(obj, indent=2, ensure_ascii=False) + "\n"


# ---------------------------------------------------------------------------
# emitters

@dataclass
class EnhancedHasseDiagram:
    vertices: list          # (label, style, codim)
    edges: list             # (src, dst, kind, note)


def hasse_diagram(rep: Report) -> EnhancedHasseDiagram:
    verts = [(r.label, rep.style(r), r.codim) for r in rep.records]
    edges = [(s, d, k, "") for s, d, k, _ in rep.eng.edges]
    for e in rep.cfg.dotted_edges:
        edges.append((e[0], e[1], "dotted", e[2] if len(e) > 2 else ""))
    return EnhancedHasseDiagram(verts, edges)


_DOT_NODE = {
    "solid": 'shape=circle, style=filled, fillcolor=black, fontcolor=white',
    "crossed": 'shape=Mcircle',
    "open": 'shape=circle',
}
_DOT_EDGE = {
    "cayley": "",
    "cross": "dir=none",
    "wolf_closed": "style=dashed, color=gray",
    "dotted": "style=dotted, dir=none",
}


def _q(s: str) -> str:
    return '"' + s.replace("\\", "\\\\").replace('"', '\\"') + '"'


def emit_dot(dg: EnhancedHasseDiagram, name: str = "hasse") -> str:
    lines = [f"digraph {_q(name)} {{", "  rankdir=TB;"]
    for label, style, codim in dg.vertices:
        lines.append(f"  {_q(label)} [{_DOT_NODE[style]}, codim={codim}, vstyle={style}];")
    for c in sorted({v[2] for v in dg.vertices}):
        same = " ".join(_q(v[0]) + ";" for v in dg.vertices if v[2] == c)
        lines.append(f"  {{ rank=same; {same} }}")
    for s, d, kind, note in dg.edges:
        attrs = [a for a in (_DOT_EDGE[kind], f"kind={kind}") if a]
        if note:
            attrs.append(f"label={_q(note)}")
        lines.append(f"  {_q(s)} -> {_q(d)} [{', '.join(attrs)}];")
    lines.append("}")
    return "\n".join(lines) + "\n"


_MARK = {"solid": "*", "crossed": "x", "open": "o"}
_ARROW = {"cayley": "-->", "cross": "---", "wolf_closed": "..>", "dotted": "..."}


def emit_ascii(dg: EnhancedHasseDiagram) -> str:
    out = []
    for c in sorted({v[2] for v in dg.vertices}):
        row = "   ".join(f"[{_MARK[s]}] {lab}" for lab, s, cc in dg.vertices if cc == c)
        out.append(f"codim {c:>2}:  {row}")
    out.append("")
    for s, d, kind, note in dg.edges:
        tail = f"  ({note})" if note else ""
        out.append(f"  {s} {_ARROW[kind]} {d}   {kind}{tail}")
    out.append("")
    out.append("legend: [*] polarizable or D, [x] in cl(D) not polarizable, [o] not in cl(D)")
    out.append("        --> cayley, --- cross action, ..> to the closed orbit, ... annotation")
    return "\n".join(out) + "\n"


def emit_mhd(table) -> str:
    """ASCII grid of h^{p,q}: p across, q down; origin in parentheses."""
    h = {(p, q): d for p, q, d in table}
    ps = [p for p, _ in h] + [0]
    qs = [q for _, q in h] + [0]
    prange = range(min(ps), max(ps) + 1)
    qrange = range(max(qs), min(qs) - 1, -1)
    width = max(4, max(len(str(d)) for d in h.values()) + 3)

    def cell(p, q):
        d = h.get((p, q), 0)
        s = str(d) if d else "."
        if (p, q) == (0, 0):
            s = f"({s})"
        return s.rjust(width)

    lines = ["q\\p".rjust(5) + "".join(str(p).rjust(width) for p in prange)]
    for q in qrange:
        lines.append(str(q).rjust(5) + "".join(cell(p, q) for p in prange))
    lines.append("sum".rjust(5) + "".join(str(sum(h.get((p, q), 0) for q in qrange)).rjust(width)
                                           for p in prange))
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# limit

_TERM = re.compile(r"^\s*(?:([+-]?\d+(?:/\d+)?)\s*\*\s*)?\(\s*(-?\d+(?:\s*,\s*-?\d+)*)\s*\)\s*$")


def parse_root_combination(text: str, rank: int) -> list:
    """'(-1,0)+2*(0,-1)' -> [(coeff, root)]."""
    from fractions import Fraction
    terms = []
    for part in re.split(r"\+(?![^()]*\))", text.replace(" ", "")):
        if not part:
            continue
        m = _TERM.match(part)
        if not m:
            raise ConfigError(f"--n: cannot parse term {part!r}; use e.g. '(-1,0)+2*(0,-1)'")
        c = Fraction(m.group(1)) if m.group(1) else Fraction(1)
        root = tuple(int(x) for x in m.group(2).split(","))
        if len(root) != rank:
            raise ConfigError(f"--n: root {root} has length {len(root)}, rank is {rank}")
        terms.append((c, root))
    if not terms:
        raise ConfigError("--n: empty root combination")
    return terms


def limit_report(rep: Report, j_key: str, word: str, n_text: str) -> dict:
    eng = rep.eng
    try:
        fr = find_frame(eng.hasse, j_key)
    except KeyError:
        raise ConfigError(f"--j: unknown frame {j_key!r}; frames are "
                          f"{[f.label for f in eng.frames]}") from None
    try:
        w = eng.W.from_word("" if word in ("e", "") else word)
    except (RootSystemError, KeyError, ValueError):
        raise ConfigError(f"--w: bad Weyl word {word!r}") from None
    N = [C(0)] * eng.dim
    for c, a in parse_root_combination(n_text, eng.rs.rank):
        if not eng.rs.is_root(a):
            raise ConfigError(f"--n: {a} is not a root of {eng.rs.name}")
        N = L.vadd(N, L.vscale(C(c), fr.Y(eng.la, a)))
    la, sigma = eng.la, eng.sigma
    F = H.flag_filtration(eng, fr.index, w)
    try:
        W = H.weight_filtration(la, N)
        mfd = H.deligne_bigrading(la, sigma, F, W, N)
    except H.HodgeError as e:
        raise ConfigError(f"limit: {e}") from None
    out = {"frame": fr.label, "w": w.word or "e", "N": n_text,
           "weights": {str(k): v for k, v in W.dims().items()},
           "limit_bigrading": mfd.table(), "is_split": mfd.is_split}
    if mfd.is_split:
        try:
            hat = H.naive_limit(la, sigma, mfd, N)
        except H.HodgeError as e:
            raise ConfigError(f"limit: {e}") from None
        out["naive_limit_bigrading"] = hat.table()
        out["naive_limit_orbit"] = locate_flag(eng, fr.index, hat.F)
        out["dimensions"] = H.dimension_report(la, sigma, N, mfd)
        levi = [a for a in eng.rs.roots
                if W[0].contains(fr.Y(la, a)) and W[0].contains(fr.Y(la, tuple(-x for x in a)))
                and not W[-1].contains(fr.Y(la, a))]
        out["levi_type"] = H.root_subsystem_type(eng.rs, levi)
    return out


def locate_flag(eng, j: int, F) -> str | None:
    for w in eng.W.elements:
        if H.flag_filtration(eng, j, w) == F:
            return eng.node_label(j, w)
    return None


# ---------------------------------------------------------------------------
# main

def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="strataforge",
                                 description="Real group orbits in flag varieties and their Hodge-theoretic boundary data.")
    ap.add_argument("command", choices=("cartans", "orbits", "hasse", "mhd", "classify", "limit"))
    ap.add_argument("label", nargs="?", help="orbit label for mhd (default: the base orbit)")
    ap.add_argument("--config", required=True, help="YAML run configuration")
    ap.add_argument("--format", choices=FORMATS, help="output format (default json, hasse: ascii)")
    ap.add_argument("--j", help="limit: frame label (e.g. R1:L) or H<k>")
    ap.add_argument("--w", default="e", help="limit: Weyl word (default e)")
    ap.add_argument("--n", help="limit: root combination in frame j, e.g. '(-1,0)+(0,-1)'")
    return ap


def run(argv) -> str:
    ap = build_parser()
    args = ap.parse_args(argv)
    cfg = load_config(args.config)
    fmt = args.format or cfg.format
    rep = Report(cfg)
    cmd = args.command
    if cmd == "cartans":
        body = cartan_rows(rep)
        if fmt == "dot":
            lines = ["digraph cartans {"]
            for f in body["frames"]:
                lines.append(f"  {_q(f['label'])} [real_rank={f['real_rank']}];")
            for s, d, a in body["edges"]:
                lines.append(f"  {_q(s)} -> {_q(d)} [label={_q(a)}];")
            return "\n".join(lines) + "\n}\n"
        if fmt == "ascii":
            out = [f"{f['label']:<8} rank {f['real_rank']}  {f['roots']}  |W_R| = {f['real_weyl_order']}"
                   f" ({f['real_weyl_source']}{'' if f['real_weyl_complete'] else ', INCOMPLETE'})"
                   for f in body["frames"]]
            out += [f"  {s} --{a}--> {d}" for s, d, a in body["edges"]]
            return "\n".join(out) + "\n"
        return dumps(_envelope(rep, "cartans", body))
    if cmd == "orbits":
        rows = orbit_rows(rep)
        if fmt == "ascii":
            return "".join(f"{r['label']:<14} codim {r['codim']:>2}  {r['frame']:<6} "
                           f"{' '.join(k for k, v in r['flags'].items() if v)}\n" for r in rows)
        return dumps(_envelope(rep, "orbits", rows))
    if cmd == "hasse":
        dg = hasse_diagram(rep)
        if fmt == "dot":
            return emit_dot(dg, f"{cfg.type} {list(cfg.grading)}")
        if fmt == "json":
            return dumps(_envelope(rep, "hasse", {
                "vertices": [{"label": l, "style": s, "codim": c} for l, s, c in dg.vertices],
                "edges": [{"src": s, "dst": d, "kind": k, "note": n} for s, d, k, n in dg.edges]}))
        return emit_ascii(dg)
    if cmd == "mhd":
        try:
            r = rep.eng.record(args.label) if args.label else rep.eng.base_record()
        except KeyError:
            raise ConfigError(f"unknown orbit {args.label!r}") from None
        if fmt == "json":
            return dumps(_envelope(rep, "mhd", {"label": r.label, "hpq": r.bigrading.table()}))
        return f"{r.label}  (codim {r.codim})\n" + emit_mhd(r.bigrading.table())
    if cmd == "classify":
        rows = classify_rows(rep)
        if fmt == "ascii":
            return "".join(f"{r['label']:<14} codim {r['codim']:>2}  [{_MARK[r['style']]}] "
                           f"{r['polarizable']['verdict']:<16} {r['cuspidal']['verdict']:<13} "
                           f"{'hodge_tate' if r['hodge_tate'] else ''}\n" for r in rows)
        return dumps(_envelope(rep, "classify", rows))
    # limit
    if not args.j or not args.n:
        raise ConfigError("limit needs --j and --n")
    body = limit_report(rep, args.j, args.w, args.n)
    if fmt == "ascii":
        out = [f"F~ = F({body['frame']}, {body['w']}),  N = {body['N']},  split: {body['is_split']}",
               "limit MHS:", emit_mhd(body["limit_bigrading"])]
        if body["is_split"]:
            out += ["naive limit (flip):", emit_mhd(body["naive_limit_bigrading"]),
                    f"lands in orbit: {body['naive_limit_orbit']}",
                    "dimensions: " + json.dumps(body["dimensions"])]
        return "\n".join(out) + "\n"
    return dumps(_envelope(rep, "limit", body))


def main(argv=None) -> int:
    argv = sys.argv[1:] if argv is None else argv
    try:
        sys.stdout.write(run(argv))
    except (ConfigError, GradingError, RootSystemError) as e:
        print(f"strataforge: {e}", file=sys.stderr)
        return 2
    except InternalError as e:
        print(f"strataforge: internal consistency failure: {e}", file=sys.stderr)
        return 3
    return 0


if __name__ == "__main__":
    sys.exit(main())
