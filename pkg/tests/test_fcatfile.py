import pytest
from conftest import ALL_FILES, CORPUS

from fcat.errors import (
    DuplicateName,
    FcatSyntaxError,
    MissingCompositeError,
    UnknownName,
)
from fcat.fcatfile import ALL, dumps, load, parse

SWAP = """\
# one object with an involution
category Z2
object x
arrow s : x -> x
compose s . s = id(x)

model iso on Z2
weq s
cof *
fib *
"""


def test_parse_swap():
    doc = parse(SWAP)
    block = doc.category("Z2")
    assert block.objects == ["x"]
    assert block.arrows == [("s", "x", "x")]
    assert block.composes == [("s", "s", "id(x)")]
    m = doc.model("iso")
    assert m.classes == {"weq": ["s"], "cof": [ALL], "fib": [ALL]}


def test_identity_refs_dropped_from_classes():
    doc = parse(SWAP.replace("weq s", "weq s, id(x)"))
    assert doc.model("iso").classes["weq"] == ["s"]


def test_dumps_is_canonical():
    text = dumps(parse(SWAP))
    assert text == dumps(parse(text))
    assert "#" not in text


@pytest.mark.parametrize("filename", ALL_FILES)
def test_corpus_round_trip(filename):
    text = (CORPUS / filename).read_text()
    once = dumps(parse(text))
    assert once == text
    assert dumps(parse(once)) == once


def _error(text):
    with pytest.raises(Exception) as info:
        parse(text)
    return info.value


@pytest.mark.parametrize("text, kind, line, col", [
    ("category A\nobject a, a\n", DuplicateName, 2, 11),
    ("category A\nobject a\narrow f : a -> b\n", UnknownName, 3, 16),
    ("category A\nobject a\narrow f : a => a\n", FcatSyntaxError, 3, 14),
    ("category A\nobject a\narrow f a -> a\n", FcatSyntaxError, 3, 9),
    ("object a\n", FcatSyntaxError, 1, 1),
    ("category A\nobject a\nmodel M on B\n", UnknownName, 3, 12),
    ("category A\nobject a\nwibble\n", FcatSyntaxError, 3, 1),
    ("category A\nobject a\narrow f : a -> a\n", MissingCompositeError, 1, 1),
    ("category A\nobject a\narrow f : a -> a\ncompose f . f = g\n", UnknownName, 4, 17),
    ("category A\nobject a\narrow f : a -> a\ncompose f . f = f\ncompose f . f = f\n",
     DuplicateName, 5, 9),
    ("category A\nobject a\nmodel M on A\nweq nope\n", UnknownName, 4, 5),
])
def test_parse_errors_carry_location(text, kind, line, col):
    err = _error(text)
    assert type(err) is kind
    assert (err.line, err.col) == (line, col)
    assert str(err).startswith(f"{line}:{col}: ")


def test_comments_and_blank_lines_ignored():
    doc = parse("\n# x\ncategory A   # trailing\n\nobject a,b\n")
    assert doc.category().objects == ["a", "b"]


def test_load(tmp_path):
    p = tmp_path / "z.fcat"
    p.write_text(SWAP)
    assert load(p).category().name == "Z2"
