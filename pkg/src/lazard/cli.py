"""lazard-lab: batch front end.

Exit codes: 0 done, 1 malformed input, 2 refused (a hypothesis does not
hold), 3 inconclusive or undecided, 4 a verification ran and failed.
Reports are JSON with sorted keys and no timestamps.
"""
from __future__ import annotations

import argparse
import json
import sys

import numpy as np

from . import __version__
from .bchgroup import LazardBoundViolated, LazardGroup, recover_lie
from .cohomology import (
    HypothesisViolated,
    SizeBoundExceeded,
    baer_sum_classes,
    compare,
    h0,
    h0_co,
    h1,
    h2,
    in_scope,
    require,
)
from .crossedmod import (
    BoundaryMismatch,
    GroupCrossedModule,
    InvalidCrossedModule,
    LieCrossedModule,
    baer_sum_crossed,
    boundary_mismatch,
    check_axioms,
    crossed_equivalent,
    exp_crossed,
    log_crossed,
)
from .freelie import bch_table
from .io import MalformedInput, crossed_from_doc, dumps_crossed, dumps_ring, dumps_triple, load_object, loads, read, sha256
from .ring import subgroup_invariants
from .liering import InvalidLieRing, NilLieRing, NotNilpotent
from .triples import GroupTriple, InvalidTriple, LieTriple, OutsideLazardRange, exp_triple, log_triple, trivial_triple

SCHEMA = "lazard-lab/1"
OK, MALFORMED, REFUSED, INCONCLUSIVE, FAILED = 0, 1, 2, 3, 4


class Outcome(Exception):
    """Finish early with a status and exit code, keeping the partial result."""

    def __init__(self, code, status, result):
        super().__init__(status)
        self.code, self.status, self.result = code, status, result


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # usage errors are malformed input, not refusals
        self.print_usage(sys.stderr)
        sys.stderr.write(f"{self.prog}: error: {message}\n")
        raise SystemExit(MALFORMED)


def _positive(text):
    v = int(text)
    if v <= 0:
        raise argparse.ArgumentTypeError("must be positive")
    return v


def _jsonable(x):
    if isinstance(x, dict):
        return {str(k): _jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_jsonable(v) for v in x]
    if isinstance(x, np.ndarray):
        return _jsonable(x.tolist())
    if isinstance(x, np.integer):
        return int(x)
    if isinstance(x, np.bool_):
        return bool(x)
    return x


# ----------------------------------------------------------------- loading

class Inputs:
    def __init__(self, paths):
        self.docs, raws = [], []
        for path in paths:
            try:
                doc, raw = read(path)
            except OSError as exc:
                raise MalformedInput(f"cannot read {path}: {exc.strerror}") from exc
            self.docs.append(doc)
            raws.append(raw)
        self.hash = sha256(b"".join(sha256(r).encode() for r in raws)) if raws else None

    def triple(self, i=0) -> LieTriple:
        """The file's triple; a bare ring gets the trivial module Z/p."""
        obj = load_object(self.docs[i])
        if isinstance(obj, NilLieRing):
            return trivial_triple(obj, (1,))
        if isinstance(obj, GroupTriple):
            return log_triple(obj)
        return obj

    def ring(self, i=0) -> NilLieRing:
        obj = load_object(self.docs[i])
        return obj if isinstance(obj, NilLieRing) else (obj.L if isinstance(obj, LieTriple) else obj.G.lie)


def _inv(x):
    return [int(v) for v in x]


# ---------------------------------------------------------------- commands

def cmd_validate(a, inp: Inputs):
    doc = inp.docs[0]
    obj = crossed_from_doc(doc) if "crossed" in doc else load_object(doc)
    if isinstance(obj, (LieCrossedModule, GroupCrossedModule)):
        rep = check_axioms(obj)
        text = dumps_crossed(obj)
        again = dumps_crossed(crossed_from_doc(loads(text)))
        return {"ok": rep.ok, "kind": "crossed", "violations": rep.violations, "round_trip": again == text, "canonical": text}
    if isinstance(obj, NilLieRing):
        text = dumps_ring(obj)
        again = dumps_ring(load_object(loads(text)))
        hint = doc["ring"].get("class_hint")
        c = obj.nilpotency_class()
        out = {"ok": True, "kind": "ring", "p": obj.p, "orders": obj.orders.tolist(), "class": c}
        if hint is not None:
            out["class_hint_matches"] = int(hint) == c
        out.update(round_trip=again == text, canonical=text)
        return out
    T = obj if isinstance(obj, LieTriple) else log_triple(obj)
    text = dumps_triple(T)
    again = dumps_triple(load_object(loads(text)))
    return {
        "ok": True, "kind": "triple", "p": T.L.p, "class": T.L.nilpotency_class(),
        "action_length": T.action_length(), "round_trip": again == text, "canonical": text,
    }


def cmd_bch_table(a, inp):
    t = bch_table(a.cls)
    return {"class": a.cls, "entries": t.to_json()}


def cmd_exp(a, inp: Inputs):
    L = inp.ring()
    G = LazardGroup(L)
    gam = G.gamma_series()
    out = {"order": G.size, "class": G.nilpotency_class(), "gamma_series": [len(s) for s in gam]}
    if "module" in inp.docs[0]:
        TG = exp_triple(inp.triple())
        out["action_length"] = TG.action_length()
    return out


def cmd_log(a, inp: Inputs):
    L = inp.ring()
    G = LazardGroup(L)
    R = recover_lie(G)
    out = {"recovered_equals_input": R == L, "structure": dumps_ring(R)}
    if "module" in inp.docs[0]:
        T = inp.triple()
        out["triple_round_trip"] = log_triple(exp_triple(T)) == T
    return out


def _cohomology_side(T: LieTriple, degree, side):
    X = T if side == "lie" else exp_triple(T)
    if degree == 0:
        fixed = h0(X)
        co = _inv(h0_co(X))
        data = {"fixed_points": fixed.generators, "fixed_order": fixed.order(), "coinvariant_invariants": co}
        return _inv(subgroup_invariants(fixed.generators, T.M.exps, T.M.p)), data
    H = h1(X) if degree == 1 else h2(X)
    return _inv(H.invariants), {"order": H.order, "moduli": H.moduli}


def cmd_cohomology(a, inp: Inputs):
    T = inp.triple()
    if a.side == "compare":
        require(T, a.degree)
        rep = compare(T, a.degree, pairs=a.pairs, seed=a.seed).to_json()
        out = {
            "invariant_factors": rep.pop("invariant_factors"),
            "verdict": rep.pop("verdict"),
            "witnesses": rep.pop("witnesses", []),
            "side_data": rep,
        }
        if out["verdict"] != "equivalent":
            raise Outcome(FAILED, "failed", out)
        return out
    inv, data = _cohomology_side(T, a.degree, a.side)
    return {
        "invariant_factors": {a.side: inv},
        "side_data": data,
        "verdict": "computed" if in_scope(T, a.degree) else "computed outside the transport range",
        "witnesses": [],
    }


def cmd_compare(a, inp: Inputs):
    T = inp.triple()
    require(T, a.degree)
    rep = compare(T, a.degree, pairs=a.pairs, seed=a.seed).to_json()
    if rep["verdict"] != "equivalent":
        raise Outcome(FAILED, "failed", rep)
    return rep


def cmd_baer_sum(a, inp: Inputs):
    T = inp.triple()
    X = T if a.side == "lie" else exp_triple(T)
    H = h1(X) if a.degree == 1 else h2(X)
    rng = np.random.default_rng(a.seed)
    rows = []
    for _ in range(a.pairs):
        u, v = H.random_class(rng), H.random_class(rng)
        w, same = baer_sum_classes(X, a.degree, u, v, H)
        rows.append({"u": H.coords(u), "v": H.coords(v), "sum": H.coords(w), "matches_cocycle_sum": same})
    out = {"side": a.side, "degree": a.degree, "moduli": H.moduli, "pairs": rows}
    if not all(r["matches_cocycle_sum"] for r in rows):
        raise Outcome(FAILED, "failed", out)
    return out


def cmd_schur(a, inp: Inputs):
    from .schur import compare_schur, schur

    L = inp.ring()
    if a.side == "compare":
        rep = compare_schur(L, extra_levels=a.extra_levels)
        out = rep.to_json()
        if rep.verdict == "inconclusive":
            raise Outcome(INCONCLUSIVE, "inconclusive", out)
        if rep.verdict != "equal":
            raise Outcome(FAILED, "failed", out)
        return out
    obj = L if a.side == "lie" else LazardGroup(L)
    rep = schur(obj, extra_levels=a.extra_levels)
    if rep.status != "certified":
        raise Outcome(INCONCLUSIVE, "inconclusive", rep.to_json())
    return rep.to_json()


def _normal_subgroup(G: LazardGroup, spec: str):
    L = G.lie
    key = spec.strip().lower()
    if key == "whole":
        return np.arange(G.size)
    if key == "trivial":
        return np.array([G.identity])
    if key == "center":
        return G.center()
    if key == "derived":
        gam = G.gamma_series()
        return gam[1] if len(gam) > 1 else np.array([G.identity])
    try:
        vecs = [[int(x) for x in part.split(",")] for part in spec.split(";") if part.strip()]
    except ValueError as exc:
        raise MalformedInput(f"bad subgroup spec {spec!r}") from exc
    if any(len(v) != L.rank for v in vecs):
        raise MalformedInput(f"subgroup generators need {L.rank} coordinates")
    N = G.closure(G.to_index(np.array(vecs, np.int64).reshape(-1, L.rank)))
    if not G.is_normal(N):
        raise MalformedInput("the given subgroup is not normal")
    return N


def cmd_five_term(a, inp: Inputs):
    from .fiveterm import five_term_verify, require_class

    L = inp.ring()
    require_class(L)  # before resolving the subgroup, which can be expensive
    G = LazardGroup(L)
    N = _normal_subgroup(G, a.normal)
    rep = five_term_verify(G, N)
    out = rep.to_json()
    if not (rep.is_exact and rep.commutes):
        raise Outcome(FAILED, "failed", out)
    return out


def cmd_crossed(a, inp: Inputs):
    X = crossed_from_doc(inp.docs[0])
    if a.op == "check":
        return {"op": "check", **check_axioms(X).to_json()}
    rep = check_axioms(X)
    if not rep.ok:
        raise MalformedInput("input is not a crossed module: " + "; ".join(v["message"] for v in rep.violations))
    if a.op == "log":
        if not isinstance(X, GroupCrossedModule):
            raise MalformedInput("--op log needs a group-side file")
        Y = log_crossed(X)
        return {"op": "log", "axioms_ok": check_axioms(Y).ok, "round_trip": exp_crossed(Y) == X, "lie": dumps_crossed(Y)}
    if a.op == "exp":
        if not isinstance(X, LieCrossedModule):
            raise MalformedInput("--op exp needs a Lie-side file")
        Z = exp_crossed(X)
        return {"op": "exp", "axioms_ok": check_axioms(Z).ok, "round_trip": log_crossed(Z) == X, "group": dumps_crossed(Z)}
    if len(inp.docs) < 2:
        raise MalformedInput(f"--op {a.op} needs two files")
    Y = crossed_from_doc(inp.docs[1])
    if a.op == "equiv":
        res = crossed_equivalent(X, Y, a.bound)
        out = {"op": "equiv", **res.to_json()}
        if res.value is None:
            raise Outcome(INCONCLUSIVE, "inconclusive", out)
        return out
    S = baer_sum_crossed(X, Y)
    out = {
        "op": "sum",
        "axioms_ok": check_axioms(S).ok,
        "boundary_preserved": boundary_mismatch(S, X) is None,
        "sum": dumps_crossed(S),
    }
    try:
        if isinstance(X, GroupCrossedModule):
            res = crossed_equivalent(log_crossed(S), baer_sum_crossed(log_crossed(X), log_crossed(Y)), a.bound)
        else:
            res = crossed_equivalent(exp_crossed(S), baer_sum_crossed(exp_crossed(X), exp_crossed(Y)), a.bound)
        out["transport_commutes"] = res.verdict
    except HypothesisViolated as exc:
        out["transport_commutes"] = f"not checked: {exc}"
    return out


COMMANDS = {
    "validate": cmd_validate,
    "bch-table": cmd_bch_table,
    "exp": cmd_exp,
    "log": cmd_log,
    "cohomology": cmd_cohomology,
    "compare": cmd_compare,
    "baer-sum": cmd_baer_sum,
    "schur": cmd_schur,
    "five-term": cmd_five_term,
    "crossed": cmd_crossed,
}


def build_parser() -> argparse.ArgumentParser:
    ap = _Parser(prog="lazard-lab", description="Lazard correspondence and cohomology transport.")
    ap.add_argument("--version", action="version", version=f"lazard-lab {__version__}")
    sub = ap.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def cmd(name, files=1, **kw):
        sp = sub.add_parser(name, **kw)
        if files == 1:
            sp.add_argument("file")
        elif files == 2:
            sp.add_argument("file")
            sp.add_argument("file2", nargs="?")
        sp.add_argument("--out", help="write the JSON report here instead of stdout")
        return sp

    cmd("validate", help="parse, validate and round-trip an input file")
    sp = cmd("bch-table", files=0, help="BCH coefficients up to a class")
    sp.add_argument("--class", dest="cls", type=_positive, required=True)
    cmd("exp", help="exp(L): order, class, lower central series")
    cmd("log", help="recover log(G) from the group law")
    sp = cmd("cohomology", help="H^0, H^1 or H^2 on one side, or both")
    sp.add_argument("--degree", type=int, choices=(0, 1, 2), required=True)
    sp.add_argument("--side", choices=("group", "lie", "compare"), default="lie")
    sp.add_argument("--pairs", type=_positive, default=5)
    sp.add_argument("--seed", type=int, default=0)
    sp = cmd("compare", help="compare both sides and test the transport")
    sp.add_argument("--degree", type=int, choices=(0, 1, 2), required=True)
    sp.add_argument("--pairs", type=_positive, default=5)
    sp.add_argument("--seed", type=int, default=0)
    sp = cmd("baer-sum", help="Baer sums of random classes against cocycle sums")
    sp.add_argument("--degree", type=int, choices=(1, 2), required=True)
    sp.add_argument("--side", choices=("group", "lie"), default="lie")
    sp.add_argument("--pairs", type=_positive, default=5)
    sp.add_argument("--seed", type=int, default=0)
    sp = cmd("schur", help="Schur multiplier on one side, or both")
    sp.add_argument("--side", choices=("group", "lie", "compare"), default="compare")
    sp.add_argument("--extra-levels", type=int, default=0)
    sp = cmd("five-term", help="five-term sequences for G and a normal subgroup")
    sp.add_argument("--normal", required=True, help="center, derived, whole, trivial, or 'v1;v2;...'")
    sp = cmd("crossed", files=2, help="crossed-module checks, transport, sums, equivalence")
    sp.add_argument("--op", choices=("check", "log", "exp", "sum", "equiv"), required=True)
    sp.add_argument("--bound", type=_positive, default=None)
    return ap


def _report(a, inp, status, result) -> dict:
    args = {k: v for k, v in sorted(vars(a).items()) if k not in ("file", "file2", "out", "command")}
    return {"schema": SCHEMA, "command": a.command, "args": args, "input_sha256": inp.hash if inp else None,
            "status": status, "result": result}


def run(argv=None) -> tuple[int, dict]:
    a = build_parser().parse_args(argv)
    inp = None
    try:
        paths = [p for p in (getattr(a, "file", None), getattr(a, "file2", None)) if p]
        inp = Inputs(paths)
        code, status, result = OK, "ok", COMMANDS[a.command](a, inp)
    except Outcome as out:
        code, status, result = out.code, out.status, out.result
    except (HypothesisViolated, LazardBoundViolated, OutsideLazardRange) as exc:
        code, status, result = REFUSED, "refused", {"reason": str(exc)}
    except SizeBoundExceeded as exc:
        code, status, result = INCONCLUSIVE, "inconclusive", {"reason": f"undecided at this scale: {exc}"}
    except (MalformedInput, InvalidLieRing, InvalidTriple, InvalidCrossedModule, BoundaryMismatch, NotNilpotent) as exc:
        code, status, result = MALFORMED, "malformed", {"reason": str(exc)}
    return code, _jsonable(_report(a, inp, status, result))


def main(argv=None) -> int:
    code, report = run(argv)
    text = json.dumps(report, sort_keys=True, indent=2, ensure_ascii=False) + "\n"
    out = getattr(build_parser().parse_args(argv), "out", None)
    if out:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    if code == MALFORMED:
        sys.stderr.write(f"lazard-lab: {report['result']['reason']}\n")
    return code


if __name__ == "__main__":
    sys.exit(main())
