"""Builders for the example corpus shipped in ``corpus/``.

``python -m fcat.corpus DIR`` regenerates every file.
"""

import sys
from itertools import permutations, product
from pathlib import Path

from .fcatfile import ALL, CategoryBlock, FcatDocument, ModelBlock, dumps, identity_name


def _model(name, cat, weq=(), cof=(), fib=()):
    return ModelBlock(name, cat, {"weq": list(weq), "cof": list(cof), "fib": list(fib)})


def terminal():
    cat = CategoryBlock("T", objects=["*"])
    return FcatDocument([cat], [_model("trivial", "T")])


def two():
    cat = CategoryBlock("two", objects=["0", "1"], arrows=[("f", "0", "1")])
    models = [
        _model("M1", "two", weq=[], cof=["f"], fib=["f"]),
        _model("M2", "two", weq=["f"], cof=[], fib=["f"]),
        _model("M3", "two", weq=["f"], cof=["f"], fib=[]),
        _model("trivial", "two", weq=[], cof=[ALL], fib=[ALL]),
    ]
    return FcatDocument([cat], models)


def chain3():
    cat = CategoryBlock(
        "chain3",
        objects=["0", "1", "2"],
        arrows=[("a", "0", "1"), ("b", "1", "2"), ("c", "0", "2")],
        composes=[("b", "a", "c")],
    )
    models = [
        _model("trivial", "chain3", cof=[ALL], fib=[ALL]),
        _model("collapse", "chain3", weq=[ALL], cof=[ALL]),
        _model("mixed", "chain3", weq=["a"], cof=["b", "c"], fib=[ALL]),
    ]
    return FcatDocument([cat], models)


def diamond():
    cat = CategoryBlock(
        "diamond",
        objects=["0", "a", "b", "1"],
        arrows=[
            ("ia", "0", "a"), ("ib", "0", "b"),
            ("ja", "a", "1"), ("jb", "b", "1"),
            ("d", "0", "1"),
        ],
        composes=[("ja", "ia", "d"), ("jb", "ib", "d")],
    )
    models = [
        _model("trivial", "diamond", cof=[ALL], fib=[ALL]),
        _model("collapse", "diamond", weq=[ALL], cof=[ALL]),
    ]
    return FcatDocument([cat], models)


FINSET_SIZES = (0, 1, 2, 4)


def _fn_name(m, n, values):
    return f"m{m}{n}_{''.join(map(str, values)) or 'e'}"


def finset_fragment(sizes=FINSET_SIZES):
    """Full subcategory of finite sets on the given cardinalities."""
    cat = CategoryBlock("finset", objects=[str(s) for s in sizes])
    maps = []
    for m in sizes:
        for n in sizes:
            for values in product(range(n), repeat=m):
                if m == n and values == tuple(range(m)):
                    continue
                maps.append((m, n, values))
                cat.arrows.append((_fn_name(m, n, values), str(m), str(n)))

    def name(m, n, values):
        if m == n and values == tuple(range(m)):
            return identity_name(str(m))
        return _fn_name(m, n, values)

    by_dom = {}
    for entry in maps:
        by_dom.setdefault(entry[0], []).append(entry)
    for m, n, f in maps:
        for _, k, g in by_dom.get(n, ()):
            gf = tuple(g[v] for v in f)
            cat.composes.append((_fn_name(n, k, g), _fn_name(m, n, f), name(m, k, gf)))
    bijections = [
        _fn_name(s, s, p)
        for s in sizes
        for p in permutations(range(s))
        if p != tuple(range(s))
    ]
    models = [
        _model("trivial", "finset", weq=bijections, cof=[ALL], fib=[ALL]),
        # every parallel pair becomes homotopic
        _model("contract", "finset", weq=[ALL], cof=bijections, fib=[ALL]),
        _model("cocontract", "finset", weq=[ALL], cof=[ALL], fib=bijections),
    ]
    return FcatDocument([cat], models)


def finset3():
    """FinSet on {0, 1, 2}: small enough to enumerate, with non-trivial homotopies."""
    doc = finset_fragment((0, 1, 2))
    doc.categories[0].name = "finset3"
    pos = ["m01_e", "m02_e", "m12_0", "m12_1", "m21_00", "m22_00", "m22_10", "m22_11"]
    doc.models = [
        _model("trivial", "finset3", weq=["m22_10"], cof=[ALL], fib=[ALL]),
        _model("E1", "finset3", weq=[ALL], cof=[ALL], fib=["m22_10"]),
        _model("E2", "finset3", weq=[ALL], cof=pos[2:], fib=["m01_e", "m02_e", "m22_10"]),
        _model("E3", "finset3", weq=[ALL], cof=["m21_00", "m22_10"], fib=pos[:4] + ["m22_10"]),
        _model("E4", "finset3", weq=[ALL], cof=["m22_10"], fib=[ALL]),
        _model("E5", "finset3", weq=pos[2:], cof=[ALL], fib=["m01_e", "m02_e", "m22_10"]),
    ]
    return doc


CORPUS = {
    "terminal.fcat": terminal,
    "two.fcat": two,
    "chain3.fcat": chain3,
    "diamond.fcat": diamond,
    "finset.fcat": finset_fragment,
    "finset3.fcat": finset3,
}


def write_corpus(directory):
    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    for filename, build in CORPUS.items():
        (directory / filename).write_text(dumps(build()), encoding="utf-8")


if __name__ == "__main__":
    write_corpus(sys.argv[1] if len(sys.argv) > 1 else "corpus")
