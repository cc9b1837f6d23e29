"""Command-line driver.

Exit codes: 0 success / property holds, 1 property fails or negative
verdict, 2 input error.
"""

import argparse
import json
import sys

from . import fcatfile
from .category import all_pairs_products, initial_terminal, validate_category
from .errors import CategoryError, FcatError
from .ho import emit_for_iteration, quotient
from .homotopy import left_homotopic, lemma_suite, right_homotopic
from .localization import compare, localize
from .model import (
    check_axioms,
    cofibrant_replacement,
    enumerate_model_structures,
    fibrant_cofibrant,
    fibrant_replacement,
    from_block,
    projection_fibration_check,
)

OK, FAIL, INPUT_ERROR = 0, 1, 2


class _Exit(Exception):
    def __init__(self, code, payload):
        self.code = code
        self.payload = payload


def _emit(args, payload, text=None):
    if args.json or text is None:
        print(json.dumps(payload, indent=2, ensure_ascii=False))
    else:
        print(text)


def _load(args):
    doc = fcatfile.load(args.file)
    return doc


def _category(doc, name=None):
    return validate_category(doc.category(name))


def _model(doc, name):
    block = doc.model(name)
    K = _category(doc, block.category)
    return from_block(K, block)


def _first_failure(checks):
    for c in checks:
        if not c["passed"]:
            return {"check": c["name"], "tuple": c["counterexample"]}
    return None


def _axiom_payload(M):
    report = check_axioms(M)
    payload = report.to_json(M.base)
    payload["counterexample"] = _first_failure(payload["checks"])
    return report, payload


def _require_valid(M):
    report, payload = _axiom_payload(M)
    if not report.valid:
        raise _Exit(FAIL, payload)


def cmd_validate(args):
    doc = _load(args)
    cats = {}
    for block in doc.categories:
        cats[block.name] = validate_category(block)
    for block in doc.models:
        from_block(cats[block.category], block)
    payload = {
        "verdict": "valid",
        "categories": [
            {"name": n, "objects": K.n_objects, "morphisms": K.n_morphisms}
            for n, K in cats.items()
        ],
        "models": [m.name for m in doc.models],
        "counterexample": None,
    }
    lines = [f"{n}: {K.n_objects} objects, {K.n_morphisms} morphisms" for n, K in cats.items()]
    _emit(args, payload, "\n".join(lines + ["valid"]))
    return OK


def cmd_check_model(args):
    M = _model(_load(args), args.model)
    report, payload = _axiom_payload(M)
    lines = [
        f"{'PASS' if c['passed'] else 'FAIL'} {c['name']}"
        + (f"  counterexample: {c['counterexample']}" if c["counterexample"] else "")
        for c in payload["checks"]
    ]
    lines.append(payload["verdict"])
    _emit(args, payload, "\n".join(lines))
    return OK if report.valid else FAIL


def cmd_classify(args):
    M = _model(_load(args), args.model)
    K = M.base
    fib, cof, Kcf = fibrant_cofibrant(M)
    initial, terminal = initial_terminal(K)
    repl = {}
    for x in range(K.n_objects):
        entry = {}
        try:
            q, i, p = cofibrant_replacement(M, x)
            entry["cofibrant"] = {"object": K.objects[q], "i": K.names[i], "p": K.names[p]}
            r, j, t = fibrant_replacement(M, x)
            entry["fibrant"] = {"object": K.objects[r], "j": K.names[j], "q": K.names[t]}
        except FcatError as exc:
            entry["error"] = str(exc)
        repl[K.objects[x]] = entry
    proj = projection_fibration_check(M)
    payload = {
        "verdict": "ok",
        "initial": K.objects[initial],
        "terminal": K.objects[terminal],
        "fibrant": [K.objects[x] for x in fib],
        "cofibrant": [K.objects[x] for x in cof],
        "Kcf": list(Kcf.objects),
        "replacements": repl,
        "projections_are_fibrations": proj["passed"],
        "all_pairs_products": all_pairs_products(K),
    }
    text = "\n".join([
        f"fibrant:   {' '.join(payload['fibrant'])}",
        f"cofibrant: {' '.join(payload['cofibrant'])}",
        f"K_cf:      {' '.join(payload['Kcf'])}",
    ])
    _emit(args, payload, text)
    return OK


def cmd_homotopy(args):
    M = _model(_load(args), args.model)
    K = M.base
    try:
        a, b = K.morphism(args.pair[0]), K.morphism(args.pair[1])
    except KeyError as exc:
        raise fcatfile.UnknownName(f"unknown arrow {exc.args[0]!r}") from None
    if (K.dom[a], K.cod[a]) != (K.dom[b], K.cod[b]):
        raise FcatError("the two arrows are not parallel")
    sides = ["left", "right"] if args.side == "both" else [args.side]
    payload = {"pair": list(args.pair), "verdict": "related", "witness": {},
               "counterexample": None}
    missing = []
    for side in sides:
        w = (left_homotopic if side == "left" else right_homotopic)(M, a, b)
        payload["witness"][side] = w.to_json(K) if w else None
        if w is None:
            missing.append(side)
    related = not missing
    if not related:
        payload["verdict"] = "unrelated"
        payload["counterexample"] = {"pair": list(args.pair), "sides": missing}
    _emit(args, payload)
    return OK if related else FAIL


def cmd_ho(args):
    M = _model(_load(args), args.model)
    _require_valid(M)
    H = quotient(M)
    doc, report = emit_for_iteration(H)
    if args.out:
        fcatfile.save(doc, args.out)
    K = M.base
    payload = {
        "verdict": "ok",
        "objects": list(H.quotient.objects),
        "morphisms": H.quotient.n_morphisms,
        "classes": {H.quotient.names[q]: [K.names[m] for m in ms] for q, ms in H.classes.items()},
        "inheritance": report,
        "out": args.out,
    }
    text = None if args.json else fcatfile.dumps(doc) if not args.out else (
        f"Ho: {len(payload['objects'])} objects, {payload['morphisms']} morphisms -> {args.out}"
    )
    _emit(args, payload, text)
    return OK


def cmd_localize(args):
    M = _model(_load(args), args.model)
    loc = localize(M, args.bound)
    K = M.base
    P = loc.presentation
    classes = {}
    for (a, b), n in loc.counts().items():
        if n:
            classes[f"{K.objects[a]}->{K.objects[b]}"] = [
                P.word_name(w) or f"id({K.objects[a]})" for w in loc.classes(a, b)
            ]
    payload = {"status": loc.status, "bound": args.bound, "classes": classes,
               "verdict": loc.status}
    if loc.exact and args.out:
        C = loc.to_category()
        fcatfile.save(fcatfile.FcatDocument([C.to_block()]), args.out)
        payload["out"] = args.out
    _emit(args, payload)
    return OK if loc.exact else FAIL


def cmd_compare(args):
    M = _model(_load(args), args.model)
    _require_valid(M)
    result = compare(M, args.bound)
    payload = {"verdict": result.verdict, "witness": result.witness, "checks": result.checks,
               "counterexample": None if result.equivalent else result.witness}
    _emit(args, payload, None if args.json else f"verdict: {result.verdict}")
    return OK if result.equivalent else FAIL


def cmd_enumerate(args):
    doc = _load(args)
    K = _category(doc, args.category)
    found = enumerate_model_structures(K, cap=args.cap)
    payload = {"verdict": "ok", "count": len(found),
               "structures": [dict(name=M.name, **M.describe()) for M in found]}
    if args.emit:
        blocks = [fcatfile.ModelBlock(M.name, doc.category(args.category).name, M.describe())
                  for M in found]
        out = fcatfile.FcatDocument([doc.category(args.category)], blocks)
        fcatfile.save(out, args.emit)
    lines = [f"{len(found)} model structures"]
    for M in found:
        d = M.describe()
        lines.append(f"{M.name}: W={d['weq']} C={d['cof']} F={d['fib']}")
    _emit(args, payload, "\n".join(lines))
    return OK


def cmd_lemma_suite(args):
    M = _model(_load(args), args.model)
    _require_valid(M)
    report = lemma_suite(M)
    payload = report.to_json(M.base)
    payload["counterexample"] = _first_failure(payload["checks"])
    lines = [f"{'PASS' if c['passed'] else 'FAIL'} {c['name']} ({c['checked']} tuples)"
             for c in payload["checks"]]
    _emit(args, payload, "\n".join(lines))
    return OK if report.passed else FAIL


def cmd_fmt(args):
    sys.stdout.write(fcatfile.dumps(_load(args)))
    return OK


def build_parser():
    parser = argparse.ArgumentParser(prog="fcat", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, func, model=False):
        p = sub.add_parser(name)
        p.add_argument("file")
        p.add_argument("--json", action="store_true", help="machine-readable report")
        if model:
            p.add_argument("--model", required=True)
        p.set_defaults(func=func)
        return p

    add("validate", cmd_validate)
    add("check-model", cmd_check_model, model=True)
    add("classify", cmd_classify, model=True)
    p = add("homotopy", cmd_homotopy, model=True)
    p.add_argument("--pair", nargs=2, required=True, metavar=("F", "G"))
    p.add_argument("--side", choices=["left", "right", "both"], default="both")
    p = add("ho", cmd_ho, model=True)
    p.add_argument("--out")
    p = add("localize", cmd_localize, model=True)
    p.add_argument("--bound", type=int, default=8)
    p.add_argument("--out")
    p = add("compare", cmd_compare, model=True)
    p.add_argument("--bound", type=int, default=8)
    p = add("enumerate", cmd_enumerate)
    p.add_argument("--category")
    p.add_argument("--cap", type=int, default=12)
    p.add_argument("--emit", metavar="OUT", help="write the structures as model blocks")
    add("lemma-suite", cmd_lemma_suite, model=True)
    add("fmt", cmd_fmt)
    return parser


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except _Exit as exc:
        print(json.dumps(exc.payload, indent=2, ensure_ascii=False))
        return exc.code
    except CategoryError as exc:
        payload = {"verdict": "invalid-input",
                   "counterexample": [str(v) for v in exc.violations]}
        print(json.dumps(payload, indent=2, ensure_ascii=False))
        return INPUT_ERROR
    except (FcatError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return INPUT_ERROR


if __name__ == "__main__":
    sys.exit(main())
