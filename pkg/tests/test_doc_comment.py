import random

import pytest

from adl_module.errors import AnnotationError, ModelLookupError
from adl_module.frontend.annotate import inject_annotation
from adl_module.frontend.doc_comment import (
    extract_annotations,
    parse_doc_comment,
    render_tag,
    update_doc_comment,
)
from adl_module.frontend.parser import parse_header
from adl_module.model.element import (
    ADLENABLED,
    ADLFOLDER,
    ADLINTERFACE,
    ADLPERSISTENT,
    ADLREADONLY,
    ShapeType,
)

ADL_KEYS = (ADLENABLED, ADLFOLDER, ADLINTERFACE, ADLPERSISTENT, ADLREADONLY)

HEADER = """#ifndef A_H
#define A_H

class A {
public:
  double x;
  long count() const;
};

#endif
"""


def _annotations(text, class_name="A", member=None):
    (package,) = parse_header(text, "Pkg/A.h")
    node = next(e for e in package.walk() if e.shape == ShapeType.CLASS and e.name == class_name)
    if member is not None:
        node = next(c for c in node.children if c.name == member)
    return {k: v for k, v in node.properties.items() if k in ADL_KEYS}


def test_extract():
    doc = parse_doc_comment(
        "/**\n * Text with an address a@b.org.\n * @author me\n"
        " * @adl.interface DataObject @adl.persistent\n */"
    )
    assert extract_annotations(doc) == [(ADLINTERFACE, "DataObject"), (ADLPERSISTENT, "")]


@pytest.mark.parametrize(
    "raw",
    [
        "/** @adl.interface */",
        "/** @adl.interface Data Object */",
        "/** @adl.readonly yes */",
        "/** @adl.unknown */",
    ],
)
def test_extract_errors(raw):
    with pytest.raises(AnnotationError):
        extract_annotations(parse_doc_comment(raw))


def test_render_tag():
    assert render_tag(ADLINTERFACE, "DataObject") == "@adl.interface DataObject"
    assert render_tag(ADLREADONLY, "") == "@adl.readonly"
    with pytest.raises(AnnotationError):
        render_tag(ADLFOLDER, "two words")
    with pytest.raises(AnnotationError):
        render_tag("MODEL_PART", "x")


def test_update_replaces_in_place():
    raw = "/**\n * Hit.\n * @adl.interface DataObject\n * @see Other\n */"
    assert update_doc_comment(raw, ADLINTERFACE, "ContainedObject") == (
        "/**\n * Hit.\n * @adl.interface ContainedObject\n * @see Other\n */"
    )


def test_update_inserts_before_closing_line():
    raw = "/**\n   * Hit.\n   */"
    assert update_doc_comment(raw, ADLPERSISTENT, "", indent="  ") == (
        "/**\n   * Hit.\n   * @adl.persistent\n   */"
    )


def test_update_unfolds_one_liner():
    assert update_doc_comment("/** Hit. */", ADLREADONLY, "", indent="  ") == (
        "/**\n   * Hit.\n   * @adl.readonly\n   */"
    )


def test_update_removes_tag_and_duplicates():
    raw = "/**\n * @adl.persistent\n * Hit. @adl.persistent\n */"
    assert update_doc_comment(raw, ADLPERSISTENT, None) == "/**\n * Hit.\n */"


def test_update_noop():
    raw = "/**\n * @adl.folder LArTBEvent_ADL\n */"
    assert update_doc_comment(raw, ADLFOLDER, "LArTBEvent_ADL") is raw
    assert update_doc_comment(raw, ADLREADONLY, None) is raw


def test_update_keeps_crlf():
    raw = "/**\r\n * Hit.\r\n */"
    updated = update_doc_comment(raw, ADLPERSISTENT, "", crlf=True)
    assert updated == "/**\r\n * Hit.\r\n * @adl.persistent\r\n */"


def test_inject_creates_comment():
    text = inject_annotation(HEADER, "A", ADLINTERFACE, "DataObject")
    assert "/**\n * @adl.interface DataObject\n */\nclass A {" in text
    assert _annotations(text) == {ADLINTERFACE: "DataObject"}
    # everything outside the comment is untouched
    assert text.replace("/**\n * @adl.interface DataObject\n */\n", "") == HEADER


def test_inject_member():
    text = inject_annotation(HEADER, "A", ADLPERSISTENT, "", member="x")
    assert "  /**\n   * @adl.persistent\n   */\n  double x;" in text
    assert _annotations(text, member="x") == {ADLPERSISTENT: ""}
    assert _annotations(text) == {}


def test_inject_shared_line():
    text = inject_annotation("class A { public: double x; };", "A", ADLREADONLY, "", member="x")
    assert text == "class A { public: /** @adl.readonly */ double x; };"


def test_inject_idempotent():
    once = inject_annotation(HEADER, "A", ADLPERSISTENT, "")
    assert inject_annotation(once, "A", ADLPERSISTENT, "") == once


def test_inject_remove():
    text = inject_annotation(HEADER, "A", ADLENABLED, "ADLEXT")
    text = inject_annotation(text, "A", ADLENABLED, None)
    assert _annotations(text) == {}
    assert inject_annotation(HEADER, "A", ADLENABLED, None) == HEADER


def test_inject_crlf():
    crlf = HEADER.replace("\n", "\r\n")
    text = inject_annotation(crlf, "A", ADLREADONLY, "")
    assert "\r\n/**\r\n * @adl.readonly\r\n */\r\nclass A {" in text
    assert "\n" not in text.replace("\r\n", "")


def test_inject_unknown_targets():
    with pytest.raises(ModelLookupError):
        inject_annotation(HEADER, "B", ADLREADONLY, "")
    with pytest.raises(ModelLookupError):
        inject_annotation(HEADER, "A", ADLREADONLY, "", member="y")


_VALUES = {
    ADLENABLED: ["EXTERNAL", "ADLEXT", "ADL"],
    ADLINTERFACE: ["interface", "DataObject", "ContainedObject"],
    ADLFOLDER: ["LArTBEvent_ADL", "out", "a/b"],
    ADLPERSISTENT: [""],
    ADLREADONLY: [""],
}

_DOCS = [
    "",
    "/** Hit. */\n",
    "/**\n * Hit.\n */\n",
    "/**\n * Hit.\n *\n * @adl.interface DataObject\n */\n",
    "/** @adl.persistent */\n",
]


def _random_header(rng):
    indent = rng.choice(["", "  "])
    doc = rng.choice(_DOCS)
    body = "".join(indent + line + "\n" for line in doc.splitlines())
    body += f"{indent}class A {{\n{indent}public:\n{indent}  double x;\n{indent}}};\n"
    if indent:
        return f"namespace ns {{\n{body}}}\n"
    return body


def test_inject_extract_round_trip():
    rng = random.Random(0)
    for _ in range(1000):
        text = _random_header(rng)
        expected = _annotations(text)
        for _ in range(rng.randint(1, 4)):
            key = rng.choice(ADL_KEYS)
            value = None if rng.random() < 0.25 else rng.choice(_VALUES[key])
            text = inject_annotation(text, "A", key, value)
            if value is None:
                expected.pop(key, None)
            else:
                expected[key] = value
            assert _annotations(text) == expected, text
            assert inject_annotation(text, "A", key, value) == text


def test_inject_refuses_shared_declaration():
    text = "class A {\npublic:\n  double a, b;\n  double c;\n};\n"
    with pytest.raises(AnnotationError, match="A::b shares its declaration"):
        inject_annotation(text, "A", ADLREADONLY, "", member="b")
    annotated = inject_annotation(text, "A", ADLREADONLY, "", member="c")
    assert _annotations(annotated, member="c") == {ADLREADONLY: ""}
    assert _annotations(annotated, member="a") == {}
    assert _annotations(annotated, member="b") == {}
