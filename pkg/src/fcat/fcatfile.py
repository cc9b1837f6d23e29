"""Reader and writer for the ``.fcat`` text format.

A file holds category blocks and model blocks::

    # poset with one arrow
    category two
    object 0, 1
    arrow f : 0 -> 1

    model M1 on two
    weq
    cof f
    fib f

Identities are implicit and never declared; ``id(x)`` refers to the
identity of ``x`` where one is needed (e.g. ``compose s . s = id(2)``).
Every non-identity composable pair needs exactly one ``compose`` line.
In model blocks ``*`` stands for every arrow of the category, and
identities are always members of all three classes.
"""

import re
from dataclasses import dataclass, field

from .errors import (
    DuplicateName,
    FcatSyntaxError,
    MissingCompositeError,
    UnknownName,
)

NAME = r"[A-Za-z0-9_'~^+*]+"
_TOKEN = re.compile(rf"\s*(?:(->)|id\(({NAME})\)|([:.,=])|({NAME}))")
CLASS_KEYS = ("weq", "cof", "fib")
ALL = "*"


def identity_name(obj):
    return f"id({obj})"


def split_identity(token):
    m = re.fullmatch(rf"id\(({NAME})\)", token)
    return m.group(1) if m else None


@dataclass
class CategoryBlock:
    name: str
    objects: list = field(default_factory=list)
    arrows: list = field(default_factory=list)  # (name, dom, cod)
    composes: list = field(default_factory=list)  # (g, f, g∘f)
    line: int = field(default=0, compare=False, repr=False)


@dataclass
class ModelBlock:
    name: str
    category: str
    classes: dict = field(default_factory=lambda: {k: [] for k in CLASS_KEYS})
    line: int = field(default=0, compare=False, repr=False)


@dataclass
class FcatDocument:
    categories: list = field(default_factory=list)
    models: list = field(default_factory=list)

    def category(self, name=None):
        if name is None:
            if not self.categories:
                raise UnknownName("document has no category")
            return self.categories[0]
        for block in self.categories:
            if block.name == name:
                return block
        raise UnknownName(f"no category named {name!r}")

    def model(self, name):
        for block in self.models:
            if block.name == name:
                return block
        raise UnknownName(f"no model named {name!r}")


class _Token(str):
    col: int
    kind: str


def _tokenize(text, lineno):
    tokens = []
    pos = 0
    while pos < len(text):
        if text[pos:].strip() == "":
            break
        m = _TOKEN.match(text, pos)
        if m is None:
            col = pos + 1 + (len(text[pos:]) - len(text[pos:].lstrip()))
            raise FcatSyntaxError(f"unexpected character {text[col - 1]!r}", lineno, col)
        arrow, ident, punct, name = m.groups()
        if arrow:
            value, kind = arrow, "punct"
        elif ident:
            value, kind = identity_name(ident), "id"
        elif punct:
            value, kind = punct, "punct"
        else:
            value, kind = name, "name"
        tok = _Token(value)
        tok.col = m.start(m.lastindex) + 1
        tok.kind = kind
        tokens.append(tok)
        pos = m.end()
    return tokens


def _names(tokens, lineno, allow_ids=False):
    """Comma- or space-separated list of names."""
    out = []
    for tok in tokens:
        if tok == ",":
            continue
        if tok.kind == "name" or (allow_ids and tok.kind == "id"):
            out.append(tok)
        else:
            raise FcatSyntaxError(f"expected a name, got {tok!r}", lineno, tok.col)
    return out


def _expect(tokens, pattern, lineno, line_len):
    """Match tokens against a pattern of literals and ``NAME``/``REF`` slots."""
    got = []
    for i, want in enumerate(pattern):
        if i >= len(tokens):
            raise FcatSyntaxError(f"expected {want!r}", lineno, line_len + 1)
        tok = tokens[i]
        if want == "NAME":
            ok = tok.kind == "name"
        elif want == "REF":
            ok = tok.kind in ("name", "id")
        else:
            ok = tok == want
        if not ok:
            raise FcatSyntaxError(f"expected {want!r}, got {tok!r}", lineno, tok.col)
        if want in ("NAME", "REF"):
            got.append(tok)
    if len(tokens) > len(pattern):
        tok = tokens[len(pattern)]
        raise FcatSyntaxError(f"unexpected {tok!r}", lineno, tok.col)
    return got


class _BlockState:
    def __init__(self, block):
        self.block = block
        self.objects = {}
        self.arrows = {}  # name -> (dom, cod)
        self.composes = {}

    def check_ref(self, tok, lineno):
        if tok.kind == "id":
            obj = split_identity(tok)
            if obj not in self.objects:
                raise UnknownName(f"unknown object {obj!r}", lineno, tok.col)
            return obj, obj
        if tok not in self.arrows:
            raise UnknownName(f"unknown arrow {tok!r}", lineno, tok.col)
        return self.arrows[tok]


def _finish_category(state):
    """Every non-identity composable pair must have a compose line."""
    by_dom = {}
    for name, (dom, _) in state.arrows.items():
        by_dom.setdefault(dom, []).append(name)
    for f, (_, cod) in state.arrows.items():
        for g in by_dom.get(cod, ()):
            if (g, f) not in state.composes:
                raise MissingCompositeError(
                    f"category {state.block.name!r}: missing compose line for {g} . {f}",
                    state.block.line,
                    1,
                )


def parse(text):
    """Parse ``.fcat`` text; raises on the first error with its location."""
    doc = FcatDocument()
    states = {}
    current = None  # _BlockState or ModelBlock
    model_names = set()

    def close():
        if isinstance(current, _BlockState):
            _finish_category(current)

    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0]
        tokens = _tokenize(line, lineno)
        if not tokens:
            continue
        head = tokens[0]
        n = len(line.rstrip())
        if head == "category":
            close()
            (name,) = _expect(tokens, ["category", "NAME"], lineno, n)
            if name in states:
                raise DuplicateName(f"duplicate category {name!r}", lineno, name.col)
            block = CategoryBlock(str(name), line=lineno)
            doc.categories.append(block)
            current = states[str(name)] = _BlockState(block)
        elif head == "model":
            close()
            name, cat = _expect(tokens, ["model", "NAME", "on", "NAME"], lineno, n)
            if name in model_names:
                raise DuplicateName(f"duplicate model {name!r}", lineno, name.col)
            if cat not in states:
                raise UnknownName(f"unknown category {cat!r}", lineno, cat.col)
            model_names.add(str(name))
            current = ModelBlock(str(name), str(cat), line=lineno)
            doc.models.append(current)
        elif head in ("object", "arrow", "compose"):
            if not isinstance(current, _BlockState):
                raise FcatSyntaxError(f"{head!r} outside a category block", lineno, head.col)
            block = current.block
            if head == "object":
                names = _names(tokens[1:], lineno)
                if not names:
                    raise FcatSyntaxError("expected object names", lineno, n + 1)
                for tok in names:
                    if tok in current.objects:
                        raise DuplicateName(f"duplicate object {tok!r}", lineno, tok.col)
                    current.objects[str(tok)] = len(block.objects)
                    block.objects.append(str(tok))
            elif head == "arrow":
                name, dom, cod = _expect(
                    tokens, ["arrow", "NAME", ":", "NAME", "->", "NAME"], lineno, n
                )
                if name in current.arrows or name == ALL:
                    raise DuplicateName(f"duplicate arrow {name!r}", lineno, name.col)
                for tok in (dom, cod):
                    if tok not in current.objects:
                        raise UnknownName(f"unknown object {tok!r}", lineno, tok.col)
                current.arrows[str(name)] = (str(dom), str(cod))
                block.arrows.append((str(name), str(dom), str(cod)))
            else:
                g, f, h = _expect(
                    tokens, ["compose", "REF", ".", "REF", "=", "REF"], lineno, n
                )
                for tok in (g, f, h):
                    current.check_ref(tok, lineno)
                key = (str(g), str(f))
                if key in current.composes:
                    raise DuplicateName(f"duplicate compose line for {g} . {f}", lineno, g.col)
                current.composes[key] = str(h)
                block.composes.append((str(g), str(f), str(h)))
        elif head in CLASS_KEYS:
            if not isinstance(current, ModelBlock):
                raise FcatSyntaxError(f"{head!r} outside a model block", lineno, head.col)
            state = states[current.category]
            members = []
            for tok in _names(tokens[1:], lineno, allow_ids=True):
                if tok == ALL:
                    members.append(ALL)
                    continue
                state.check_ref(tok, lineno)
                if tok.kind == "id":
                    continue
                members.append(str(tok))
            current.classes[str(head)].extend(members)
        else:
            raise FcatSyntaxError(f"unknown directive {head!r}", lineno, head.col)
    close()
    return doc


def _arrow_order(block):
    index = {name: i for i, (name, _, _) in enumerate(block.arrows)}
    objs = {name: i for i, name in enumerate(block.objects)}

    def key(name):
        obj = split_identity(name)
        if obj is not None:
            return (0, objs.get(obj, -1))
        return (1, index.get(name, -1))

    return key


def dumps(doc):
    """Canonical text of ``doc``.

    Objects and arrows keep declaration order: object and morphism ids are
    positional, so reordering them would change every canonical choice.
    """
    chunks = []
    blocks = {b.name: b for b in doc.categories}
    for block in doc.categories:
        key = _arrow_order(block)
        lines = [f"category {block.name}"]
        lines += [f"object {o}" for o in block.objects]
        lines += [f"arrow {a} : {d} -> {c}" for a, d, c in block.arrows]
        for g, f, h in sorted(block.composes, key=lambda e: (key(e[0]), key(e[1]))):
            lines.append(f"compose {g} . {f} = {h}")
        chunks.append("\n".join(lines))
    for model in doc.models:
        key = _arrow_order(blocks[model.category])
        lines = [f"model {model.name} on {model.category}"]
        for k in CLASS_KEYS:
            members = model.classes.get(k, [])
            if ALL in members:
                body = ALL
            else:
                body = ", ".join(sorted(dict.fromkeys(members), key=key))
            lines.append(f"{k} {body}".rstrip())
        chunks.append("\n".join(lines))
    return "\n\n".join(chunks) + "\n"


def load(path):
    with open(path, encoding="utf-8") as fh:
        return parse(fh.read())


def save(doc, path):
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(dumps(doc))
