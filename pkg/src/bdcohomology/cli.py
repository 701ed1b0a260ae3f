"""Command-line front end.

Four subcommands: ``triples`` lists admissible triples for one series and
rank, ``verify`` runs the exact identity checks and reports each one,
``classify`` computes cohomology classes per triple, and ``table``
aggregates classifications over a rank range into the summary tables.

All output is byte-deterministic: JSON is emitted with sorted keys and
fixed separators, text tables use left-aligned fixed-width columns, and
everything iterates in canonical order.  Exit codes: 0 success, 1 a
verification check failed (or a table row came out inhomogeneous), 2
usage error (bad flags, malformed triple JSON, rank outside the budget).
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from dataclasses import dataclass
from fractions import Fraction as Q

from .cohomology import (CohomologyClass, classify_nontwisted,
                         classify_twisted, has_fork_string, is_twistable,
                         j_matrix, lift_matrix, s_matrix, s_prime_matrix)
from .errors import (BDError, BudgetExceeded, LieAlgebraError, ParseError,
                     TripleError)
from .field import BASE_TOWER, FieldPolicy, Tower, parse_element, sigma0
from .liealg import LieAlgebra
from .linalg import Matrix, eye
from .rmatrix import (build_r_matrix, check_r_plus_r21_is_omega,
                      cybe_residual, dj_spectral_check)
from .triples import BDTriple, enumerate_triples

SCHEMA = "bdcohomology.classification/1"
DEFAULT_BUDGET = 5
BUDGET_ENV = "BDCOHOMOLOGY_RANK_BUDGET"
RANK_FLOOR = {"B": 2, "C": 2, "D": 3}


def rank_budget() -> int:
    raw = os.environ.get(BUDGET_ENV)
    if raw is None:
        return DEFAULT_BUDGET
    try:
        return int(raw)
    except ValueError:
        raise BudgetExceeded(f"{BUDGET_ENV} must be an integer, got {raw!r}")


def guard_rank(series: str, rank: int) -> None:
    if rank < RANK_FLOOR[series]:
        raise TripleError(
            f"series {series} starts at rank {RANK_FLOOR[series]}")
    budget = rank_budget()
    if rank > budget:
        raise BudgetExceeded(
            f"rank {rank} exceeds the work budget {budget}; "
            f"set {BUDGET_ENV} to raise it")


@dataclass(frozen=True)
class RunConfig:
    """Validated option bundle handed to one subcommand."""

    command: str
    series: tuple[str, ...]
    rank: int | None = None
    max_rank: int | None = None
    kind: str = "nontwisted"
    policy: FieldPolicy = FieldPolicy.LAURENT
    fmt: str = "table"
    level: str = "fast"
    triple_text: str | None = None
    twistable_only: bool = False

    def jobs(self):
        """(series, rank) pairs, skipping ranks below a series floor."""
        for s in self.series:
            lo = RANK_FLOOR[s]
            if self.rank is not None:
                if self.rank >= lo:
                    yield s, self.rank
            elif self.max_rank is not None:
                for n in range(lo, self.max_rank + 1):
                    yield s, n


def config_from_args(args) -> RunConfig:
    series = getattr(args, "series", None)
    max_rank = getattr(args, "max_rank", None)
    if args.command == "verify" and getattr(args, "rank", None) is None:
        max_rank = 3
    return RunConfig(
        command=args.command,
        series=(series,) if series else ("B", "C", "D"),
        rank=getattr(args, "rank", None),
        max_rank=max_rank,
        kind=getattr(args, "kind", "nontwisted"),
        policy=FieldPolicy(getattr(args, "field", "laurent")),
        fmt=getattr(args, "format", "table"),
        level=getattr(args, "level", "fast"),
        triple_text=getattr(args, "triple", None),
        twistable_only=getattr(args, "twistable", False),
    )


def canon_json(obj) -> str:
    return json.dumps(obj, sort_keys=True, separators=(",", ":"))


def emit_rows(out, header, rows) -> None:
    widths = [len(h) for h in header]
    for r in rows:
        widths = [max(w, len(c)) for w, c in zip(widths, r)]
    for line in [header] + rows:
        text = "  ".join(c.ljust(w) for c, w in zip(line, widths))
        out.write(text.rstrip() + "\n")


# Triples cross the CLI boundary with 1-based root indices: {"gamma1":[4],
# "tau":{"4":5}} maps the fourth simple root to the fifth.

def triple_to_obj(triple: BDTriple) -> dict:
    items = sorted(triple.tau_map.items())
    return {"gamma1": [i + 1 for i, _ in items],
            "tau": {str(i + 1): j + 1 for i, j in items}}


def triple_from_obj(alg: LieAlgebra, obj) -> BDTriple:
    if not isinstance(obj, dict) or "tau" not in obj:
        raise TripleError("triple JSON needs a tau object")
    extra = set(obj) - {"gamma1", "tau"}
    if extra:
        raise TripleError(f"unknown triple keys {sorted(extra)}")
    if not isinstance(obj["tau"], dict):
        raise TripleError("tau must be an object of 1-based root indices")
    tau = {}
    for k, v in obj["tau"].items():
        try:
            i, j = int(k) - 1, int(v) - 1
        except (TypeError, ValueError):
            raise TripleError(f"tau entries must be integers, got {k!r}: {v!r}")
        if not (0 <= i < alg.rank and 0 <= j < alg.rank):
            raise TripleError(
                f"root index out of range for rank {alg.rank}")
        tau[i] = j
    if "gamma1" in obj:
        try:
            listed = sorted(int(x) - 1 for x in obj["gamma1"])
        except (TypeError, ValueError):
            raise TripleError("gamma1 must be a list of integers")
        if listed != sorted(tau):
            raise TripleError("gamma1 does not list the tau sources")
    return BDTriple(alg, tau)


def cmd_triples(cfg: RunConfig, out) -> int:
    s, n = cfg.series[0], cfg.rank
    guard_rank(s, n)
    alg = LieAlgebra(s, n)
    recs = []
    for tr in enumerate_triples(alg):
        twistable = is_twistable(alg, tr)
        if cfg.twistable_only and not twistable:
            continue
        rec = {"triple": triple_to_obj(tr), "strings": tr.describe(),
               "twistable": twistable}
        if s == "D":
            rec["fork_string"] = has_fork_string(tr)
        recs.append(rec)
    if cfg.fmt == "json":
        out.write(canon_json({"schema": SCHEMA, "command": "triples",
                              "series": s, "rank": n,
                              "results": recs}) + "\n")
        return 0
    rows = [[canon_json(r["triple"]), r["strings"],
             "yes" if r["twistable"] else "-",
             "fork-joined" if r.get("fork_string") else "-"]
            for r in recs]
    emit_rows(out, ["triple", "strings", "twistable", "note"], rows)
    out.write(f"total: {len(rows)}\n")
    return 0


def verify_checks(alg: LieAlgebra, level: str):
    """Yield (name, passed, detail) for one algebra.  Every comparison is
    exact; a failure becomes a report line, never an exception."""
    rm = build_r_matrix(BDTriple(alg, {}))
    res = cybe_residual(rm)
    yield "cybe[DJ]", not res, f"{len(res)} nonzero terms"
    yield "r+r21=Omega[DJ]", check_r_plus_r21_is_omega(rm), "exact"
    if alg.rank <= 4:
        ok = dj_spectral_check(alg)
        yield "spectral[DJ]", ok, "0 on n+, 1/2 on h, 1 on n-"
    jm, t = j_matrix(alg)
    sp = lift_matrix(s_prime_matrix(alg), t)
    yield "sigma0(J)=J.S", jm.map(sigma0(t).apply) == jm * sp, "entrywise"
    s = s_matrix(alg)
    ident = eye(alg.size, Q(1))
    if alg.series == "C":
        yield "S^2=-I", s * s == -ident, "exact"
    else:
        yield "S^2=I", s * s == ident, "exact"
    yield "S in G", alg.group_contains(lift_matrix(s, BASE_TOWER)), \
        "bilinear form and determinant"
    if level == "full-cybe":
        for tr in enumerate_triples(alg):
            if tr.is_empty():
                continue
            rm = build_r_matrix(tr)
            res = cybe_residual(rm)
            ok = not res and check_r_plus_r21_is_omega(rm)
            name = "cybe[" + canon_json(triple_to_obj(tr)) + "]"
            yield name, ok, f"{len(res)} nonzero terms"


def cmd_verify(cfg: RunConfig, out) -> int:
    failed = total = 0
    for s, n in cfg.jobs():
        guard_rank(s, n)
        alg = LieAlgebra(s, n)
        for name, ok, detail in verify_checks(alg, cfg.level):
            total += 1
            failed += not ok
            out.write(f"{'PASS' if ok else 'FAIL'} {s}{n} {name}: {detail}\n")
    out.write(f"checks: {total - failed} passed, {failed} failed\n")
    return 1 if failed else 0


def classification_obj(alg: LieAlgebra, triple: BDTriple, kind: str,
                       policy: FieldPolicy) -> dict:
    if kind == "twisted":
        cs = classify_twisted(alg, triple)
    else:
        cs = classify_nontwisted(alg, triple, policy)
    classes = []
    for c in cs.classes:
        gens = [{"name": g.name, "square": str(g.square),
                 "valuation": str(g.valuation)} for g in c.tower.gens]
        rec = {"label": c.label, "tower": gens,
               "representative": [[str(e) for e in row]
                                  for row in c.representative.rows]}
        if c.diagonal is not None:
            rec["diagonal"] = [str(e) for e in c.diagonal]
        classes.append(rec)
    return {"triple": triple_to_obj(triple), "count": cs.cardinality,
            "size": cs.describe(), "labels": list(cs.labels),
            "classes": classes}


def parse_classification(text: str):
    """Parse ``classify --format json`` output back into exact objects.

    Returns (kind, algebra, results) where results pairs each triple with
    its class count and rebuilt CohomologyClass tuple.  Towers come back
    by replaying the recorded generator descriptors, so every matrix
    entry round-trips through the printed form exactly.
    """
    data = json.loads(text)
    if not isinstance(data, dict) or data.get("schema") != SCHEMA:
        raise ParseError("not a classification document")
    alg = LieAlgebra(data["series"], int(data["rank"]))
    results = []
    for rec in data["results"]:
        tr = triple_from_obj(alg, rec["triple"])
        classes = []
        for c in rec["classes"]:
            t: Tower = BASE_TOWER
            for g in c["tower"]:
                t = t.extend(g["name"], parse_element(g["square"], t),
                             Q(g["valuation"]))
            mat = Matrix([[parse_element(s, t) for s in row]
                          for row in c["representative"]])
            diag = None
            if "diagonal" in c:
                diag = tuple(parse_element(s, t) for s in c["diagonal"])
            classes.append(CohomologyClass(mat, t, c["label"], diag))
        if rec["count"] is not None and len(classes) != rec["count"]:
            raise ParseError("count disagrees with the class list")
        results.append((tr, rec["count"], tuple(classes)))
    return data["kind"], alg, results


def cmd_classify(cfg: RunConfig, out) -> int:
    s, n = cfg.series[0], cfg.rank
    guard_rank(s, n)
    alg = LieAlgebra(s, n)
    if cfg.triple_text is not None:
        try:
            obj = json.loads(cfg.triple_text)
        except json.JSONDecodeError as exc:
            raise TripleError(f"bad triple JSON: {exc}")
        trs = [triple_from_obj(alg, obj)]
    else:
        trs = enumerate_triples(alg)
    recs = [classification_obj(alg, tr, cfg.kind, cfg.policy) for tr in trs]
    if cfg.fmt == "json":
        out.write(canon_json({"schema": SCHEMA, "command": "classify",
                              "series": s, "rank": n, "kind": cfg.kind,
                              "results": recs}) + "\n")
        return 0
    rows = [[canon_json(r["triple"]),
             "square-classes" if r["count"] is None else str(r["count"]),
             ",".join(r["labels"]) or "-", r["size"]] for r in recs]
    emit_rows(out, ["triple", "count", "labels", "size"], rows)
    return 0


# Table rows group triples the way the results are stated: one row per
# series for the plain case, split by the fork-string condition for the
# even orthogonal algebras; the twisted case separates the empty triple,
# the twistable families, and everything else.

TWISTED_ROW_ORDER = ("Drinfeld-Jimbo", "fork families", "other")


def nontwisted_row_label(alg: LieAlgebra, tr: BDTriple) -> str:
    if alg.series != "D":
        return "any triple"
    return "fork string" if has_fork_string(tr) else "no fork string"


def twisted_row_label(alg: LieAlgebra, tr: BDTriple) -> str:
    if tr.is_empty():
        return "Drinfeld-Jimbo"
    if is_twistable(alg, tr):
        return "fork families"
    return "other"


def twisted_size_word(cs) -> str:
    words = {0: "empty", 1: "one element", 2: "two elements"}
    return words.get(cs.cardinality, cs.describe())


def cmd_table(cfg: RunConfig, out) -> int:
    rows = []
    mixed = 0
    for s, n in cfg.jobs():
        guard_rank(s, n)
        alg = LieAlgebra(s, n)
        cells: dict[str, set] = {}
        for tr in enumerate_triples(alg):
            if cfg.kind == "twisted":
                lab = twisted_row_label(alg, tr)
                word = twisted_size_word(classify_twisted(alg, tr))
            else:
                lab = nontwisted_row_label(alg, tr)
                word = classify_nontwisted(alg, tr, cfg.policy).describe()
            cells.setdefault(lab, set()).add(word)
        if cfg.kind == "twisted":
            order = TWISTED_ROW_ORDER
        else:
            order = ("any triple", "fork string", "no fork string")
        for lab in order:
            if lab not in cells:
                continue
            vals = sorted(cells[lab])
            if len(vals) > 1:
                mixed += 1
                rows.append([f"{s}{n}", lab, "MIXED: " + ", ".join(vals)])
            else:
                rows.append([f"{s}{n}", lab, vals[0]])
    if cfg.fmt == "json":
        payload = {"schema": SCHEMA, "command": "table", "kind": cfg.kind,
                   "rows": [{"algebra": a, "triples": b, "classes": c}
                            for a, b, c in rows]}
        out.write(canon_json(payload) + "\n")
    else:
        emit_rows(out, ["algebra", "triples", "cohomology"], rows)
    return 1 if mixed else 0


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="bdcohomology",
        description="Exact r-matrices and cocycle classification for the "
                    "orthogonal and symplectic series.")
    sub = p.add_subparsers(dest="command", required=True)

    t = sub.add_parser("triples", help="list admissible triples")
    t.add_argument("--series", choices=("B", "C", "D"), required=True)
    t.add_argument("--rank", type=int, required=True)
    t.add_argument("--twistable", action="store_true",
                   help="keep only triples passing the twist criterion")
    t.add_argument("--format", choices=("table", "json"), default="table")
    t.set_defaults(func=cmd_triples)

    v = sub.add_parser("verify", help="run the exact identity checks")
    v.add_argument("--series", choices=("B", "C", "D"))
    v.add_argument("--rank", type=int)
    v.add_argument("--level", choices=("fast", "full-cybe"), default="fast",
                   help="full-cybe also checks every nonempty triple")
    v.set_defaults(func=cmd_verify)

    c = sub.add_parser("classify", help="cohomology classes per triple")
    c.add_argument("--series", choices=("B", "C", "D"), required=True)
    c.add_argument("--rank", type=int, required=True)
    c.add_argument("--kind", choices=("nontwisted", "twisted"),
                   default="nontwisted")
    c.add_argument("--triple", metavar="JSON",
                   help='one triple, 1-based: {"gamma1":[3],"tau":{"3":4}}')
    c.add_argument("--field", choices=("laurent", "rational"),
                   default="laurent")
    c.add_argument("--format", choices=("table", "json"), default="table")
    c.set_defaults(func=cmd_classify)

    tb = sub.add_parser("table", help="summary table over a rank range")
    tb.add_argument("--kind", choices=("nontwisted", "twisted"),
                    default="nontwisted")
    tb.add_argument("--series", choices=("B", "C", "D"))
    tb.add_argument("--max-rank", type=int, default=4)
    tb.add_argument("--field", choices=("laurent", "rational"),
                    default="laurent")
    tb.add_argument("--format", choices=("table", "json"), default="table")
    tb.set_defaults(func=cmd_table)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    cfg = config_from_args(args)
    try:
        return args.func(cfg, sys.stdout)
    except (BudgetExceeded, TripleError, ParseError, LieAlgebraError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except BDError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
