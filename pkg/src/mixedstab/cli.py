"""Command line front end: ``mixedstab <command> SPEC [options]``.

SPEC is a JSON document (see :mod:`mixedstab.specfile`), inline JSON, or
the name of a built-in fixture.  Exit status: 0 success or verdict true,
1 verdict false, 2 input error, 3 budget exceeded, 4 internal inconsistency.
"""

from __future__ import annotations

import argparse
import json
import sys

from . import constructions
from ._config import override
from .codes import CodeParams, dimensional_distance, singleton_check
from .entanglement import em_r, is_ame
from .errors import MixedStabError, PreconditionError
from .specfile import (
    SpecDocument,
    cyclotomic_to_json,
    document,
    fixture_document,
    load_spec,
    state_to_json,
)
from .stabiliser import CodeSpace, close_group, code_basis, code_dimension

OK, FALSE, INPUT_ERROR = 0, 1, 2


def _echo(doc: SpecDocument, **extra) -> dict:
    """The input document plus ``extra``, so reports can be fed back in."""
    parts = {"state": doc.state, "generators": doc.generators or None, "code": doc.code, "params": doc.params}
    parts.update(extra)
    return document(doc.dims, **parts)


def _sub(S) -> list[int]:
    return list(S.sites)


def _fmt_complex(z: complex) -> str:
    z = complex(z)
    re, im = round(z.real, 12) + 0.0, round(z.imag, 12) + 0.0
    if im == 0:
        return f"{re:g}"
    if re == 0:
        return f"{im:g}i"
    return f"{re:g}{im:+g}i"


def _group(doc: SpecDocument, max_order):
    if not doc.generators:
        raise PreconditionError("the spec has no generators")
    return close_group(doc.generators, max_order=max_order, dims=doc.dims)


def _code(doc: SpecDocument, max_order) -> CodeSpace:
    if doc.code:
        return CodeSpace.from_states(doc.code)
    if doc.state is not None:
        return CodeSpace.from_states([doc.state])
    if doc.generators:
        return code_basis(_group(doc, max_order))
    raise PreconditionError("the spec has no code, state or generators")


def _state(doc: SpecDocument):
    if doc.state is None:
        raise PreconditionError("the spec has no state")
    return doc.state


def _trace_rows(group) -> list[dict]:
    rows = []
    for word, t in zip(group.words, group.traces()):
        row = {"word": list(word), "name": group.word_string(word)}
        if group.exact:
            row.update(cyclotomic_to_json(t))
        else:
            row["value"] = [round(t.real, 12) + 0.0, round(t.imag, 12) + 0.0]
        rows.append(row)
    return rows


def cmd_dim(doc, args):
    group = _group(doc, args.max_order)
    K = code_dimension(group)
    report = {"order": group.order, "dim": K}
    text = [f"order={group.order} dim={K}"]
    if args.table:
        rows = _trace_rows(group)
        report["nonzero"] = sum(1 for r in rows if r["value"] != [0.0, 0.0])
        report["table"] = rows
        text.append(f"nonzero traces: {report['nonzero']}")
        text += [f"{r['name']:>16}  {_fmt_complex(complex(*r['value']))}" for r in rows]
    return OK, _echo(doc, report=report), text


def cmd_trace_table(doc, args):
    args.table = True
    return cmd_dim(doc, args)


def cmd_basis(doc, args):
    code = code_basis(_group(doc, args.max_order))
    text = [f"dim={code.K}"]
    for i, b in enumerate(code.basis):
        terms = " ".join(f"{_fmt_complex(complex(*a))}|{k}>" for k, a in state_to_json(b).items())
        text.append(f"b{i}: {terms}")
    return OK, _echo(doc, code=code, report={"dim": code.K}), text


def cmd_distance(doc, args):
    code = _code(doc, args.max_order)
    res = dimensional_distance(code, limit=args.limit, jobs=args.jobs)
    witness = None
    if res.witness is not None:
        witness = {"pairs": [list(p) for p in res.witness.pairs], "label": str(res.witness)}
    report = {"K": code.K, "distance": res.distance, "bounded": res.bounded, "witness": witness}
    if res.bounded:
        text = [f"K={code.K} distance>={res.distance} (all errors up to dimwt {res.limit} detectable)"]
    else:
        text = [f"K={code.K} distance={res.distance}", f"witness: {res.witness}"]
    return OK, _echo(doc, report=report), text


def cmd_ame(doc, args):
    rep = is_ame(_state(doc), full=args.full)
    checked = [{"sites": _sub(S), "dim": S.dim, "deviation": d} for S, d in rep.checked]
    report = {"delta": rep.delta, "verdict": rep.verdict, "max_deviation": rep.max_deviation, "checked": checked}
    text = [f"Delta={rep.delta:.12g}"]
    text += [f"  S={c['sites']} dim={c['dim']} deviation={c['deviation']:.3e}" for c in checked]
    text.append(f"AME: {'yes' if rep.verdict else 'no'}")
    return (OK if rep.verdict else FALSE), _echo(doc, report=report), text


def cmd_em(doc, args):
    res = em_r(_state(doc), args.r)
    terms = [{"sites": _sub(S), "linear_entropy": t} for S, t in res.terms]
    report = {"r": res.r, "f": res.f, "EM": res.value, "terms": terms}
    text = [f"EM_{res.r}={res.value:.12g} (f={res.f})"]
    return OK, _echo(doc, report=report), text


def cmd_singleton(doc, args):
    K = args.K if args.K is not None else (doc.params or {}).get("K")
    D = args.D if args.D is not None else (doc.params or {}).get("D")
    if K is None or D is None:
        raise PreconditionError("K and D are needed, from params in the spec or --K/--D")
    verdict = singleton_check(CodeParams(doc.dims, K, D))
    report = {"K": K, "D": D, "ok": verdict.ok, "witness": None}
    text = [f"({list(doc.dims.dims)}, {K}, {D}) Singleton bound: {'satisfied' if verdict.ok else 'violated'}"]
    if not verdict.ok:
        A, B, C = verdict.witness
        report["witness"] = {"A": _sub(A), "B": _sub(B), "C": _sub(C), "dim_C": C.dim}
        text.append(f"witness: A={_sub(A)} B={_sub(B)} C={_sub(C)} dim C={C.dim} < K")
    return (OK if verdict.ok else FALSE), _echo(doc, params={"K": K, "D": D}, report=report), text


def cmd_purify(doc, args):
    code = _code(doc, args.max_order)
    if args.check_ame:
        phi = constructions.purify_to_ame(code.basis, args.r, jobs=args.jobs)
    else:
        phi = constructions.purify(code.basis, args.r)
    out = document(phi.dims, state=phi)
    text = [json.dumps(out, indent=2)]
    return OK, out, text


def cmd_fixtures(doc, args):
    if args.name:
        out = fixture_document(args.name)
        return OK, out, [json.dumps(out, indent=2)]
    rows = [
        {"name": f.name, "kind": f.kind, "dims": list(f.dims), "description": f.provenance}
        for f in constructions.FIXTURES.values()
    ]
    text = [f"{r['name']:<16} {r['kind']:<9} {str(tuple(r['dims'])):<14} {r['description']}" for r in rows]
    return OK, {"fixtures": rows}, text


COMMANDS = {
    "dim": (cmd_dim, "group order and stabilised-subspace dimension"),
    "trace-table": (cmd_trace_table, "exact trace of every group element"),
    "basis": (cmd_basis, "orthonormal basis of the stabilised subspace"),
    "distance": (cmd_distance, "dimensional minimum distance of a code"),
    "ame": (cmd_ame, "check absolute maximal entanglement"),
    "em": (cmd_em, "the EM_r entanglement measure"),
    "singleton": (cmd_singleton, "check the Singleton bound for (dims, K, D)"),
    "purify": (cmd_purify, "purify a code to a state on C^r x H"),
    "fixtures": (cmd_fixtures, "list or export built-in fixtures"),
}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=["text", "json"], default="text")
    common.add_argument("--tol", type=float, default=None, help="numerical tolerance")
    common.add_argument("--max-order", type=int, default=None, help="group closure budget")
    common.add_argument("--jobs", type=int, default=1, help="worker threads for distance scans")
    common.add_argument("--normalize", action="store_true", help="rescale states to unit norm on load")

    parser = argparse.ArgumentParser(prog="mixedstab", description=__doc__.splitlines()[0])
    subs = parser.add_subparsers(dest="command", required=True)
    for name, (_, help_) in COMMANDS.items():
        p = subs.add_parser(name, help=help_, parents=[common])
        if name == "fixtures":
            p.add_argument("name", nargs="?", choices=sorted(constructions.FIXTURES))
            continue
        p.add_argument("spec", help="JSON file, inline JSON or fixture name")
        if name == "dim":
            p.add_argument("--table", action="store_true", help="also print the trace table")
        elif name == "distance":
            p.add_argument("--limit", type=int, default=None, help="largest dimwt to scan")
        elif name == "ame":
            p.add_argument("--full", action="store_true", help="check every small subsystem")
        elif name == "em":
            p.add_argument("-r", type=int, required=True)
        elif name == "singleton":
            p.add_argument("--K", type=int, default=None)
            p.add_argument("--D", type=int, default=None)
        elif name == "purify":
            p.add_argument("-r", type=int, required=True)
            p.add_argument("--check-ame", action="store_true", help="verify the hypotheses and the result")
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return INPUT_ERROR if exc.code else OK
    func = COMMANDS[args.command][0]
    kw = {}
    if args.tol is not None:
        kw = {"atol": args.tol, "norm_atol": args.tol, "ame_atol": args.tol}
    if args.max_order is not None:
        kw["max_order"] = args.max_order
    try:
        with override(**kw):
            doc = None
            if args.command != "fixtures":
                doc = load_spec(args.spec, normalize=True if args.normalize else None)
            status, payload, text = func(doc, args)
    except MixedStabError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.exit_code
    if args.format == "json":
        print(json.dumps(payload, indent=2, sort_keys=False))
    else:
        print("\n".join(text))
    return status


if __name__ == "__main__":
    sys.exit(main())
