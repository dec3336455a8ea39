import pytest

from adl_module.errors import AnnotationError, HeaderParseError
from adl_module.frontend.lexer import tokenize
from adl_module.frontend.parser import package_name, parse_header, parse_source
from adl_module.model.element import (
    ADLPERSISTENT,
    ADLREADONLY,
    EXTENDS,
    INTERFACE,
    MODEL_PART,
    RETURN_TYPE,
    TYPE,
    VISIBILITY,
    ShapeType,
)

from conftest import HVD_HEADER


def _only_class(text, path="Pkg/X.h"):
    (package,) = parse_header(text, path)
    return next(e for e in package.walk() if e.shape == ShapeType.CLASS)


def _member(node, name):
    return next(c for c in node.children if c.name == name)


def test_tokens_carry_doc_comments():
    tokens = tokenize("/** @adl.persistent */\nclass A;\n// line\n/* plain */ int x;")
    assert [t.value for t in tokens] == ["class", "A", ";", "int", "x", ";"]
    assert tokens[0].doc.text == "/** @adl.persistent */"
    assert tokens[0].lineno == 2 and tokens[0].column == 1
    assert all(t.doc is None for t in tokens[1:])


def test_lexer_error_location():
    with pytest.raises(HeaderParseError) as info:
        tokenize("class A {\n  int `x;\n};", "a.h")
    assert (info.value.line, info.value.column) == (2, 7)
    assert str(info.value).startswith("a.h:2:7: ")


def test_fixture():
    (package,) = parse_header(HVD_HEADER.read_text(), str(HVD_HEADER))
    assert package.name == "LArTBEvent"
    (node,) = package.children
    assert node.name == "LArTBHVDData"
    assert node.get("ADLINTERFACE") == "ContainedObject"
    attributes = [c for c in node.children if c.shape == ShapeType.ATTRIBUTE]
    assert [(a.name, a.get(TYPE), a.get(VISIBILITY)) for a in attributes] == [
        ("moduleNumber", "int", "private"),
        ("detectorType", "short", "private"),
        ("unit", "short", "private"),
        ("NHVch", "int", "private"),
        ("HVdata", "std::vector<double>", "private"),
    ]
    operations = [c for c in node.children if c.shape == ShapeType.OPERATION]
    assert [o.name for o in operations] == ["LArTBHVDData", "LArTBHVDData", "~LArTBHVDData"]
    assert not any(o.has(RETURN_TYPE) for o in operations)
    assert [p.name for p in operations[1].children] == ["module", "type"]
    assert all(e.get(MODEL_PART) == "Model" for e in package.walk())


def test_model_part_for_imports():
    (package,) = parse_header("class A { public: double x; };", "lib/A.h", "Imported")
    assert {e.get(MODEL_PART) for e in package.walk()} == {"Imported"}


def test_struct_defaults_to_public():
    node = _only_class("struct Point { double x, y = 0.5; };")
    assert [(c.name, c.get(VISIBILITY)) for c in node.children] == [
        ("x", "public"),
        ("y", "public"),
    ]


def test_methods():
    node = _only_class(
        """
        class Calo : public Detector, private virtual Base {
        public:
          explicit Calo(int n) : m_n(n) { }
          virtual ~Calo() = default;
          inline unsigned int cells(int, const std::string& name = "x") const noexcept { return 0; }
          static long count();
        protected:
          const double energy() const;
        private:
          int m_n{0};
        };
        """
    )
    assert node.get(EXTENDS) == "Detector, Base"
    assert not node.has(INTERFACE)
    cells = _member(node, "cells")
    assert cells.get(RETURN_TYPE) == "unsigned int"
    assert [(p.name, p.get(TYPE)) for p in cells.children] == [
        ("arg0", "int"),
        ("name", "const std::string&"),
    ]
    assert _member(node, "energy").get(VISIBILITY) == "protected"
    assert _member(node, "m_n").get(TYPE) == "int"


def test_pure_interface():
    node = _only_class(
        "class IRun { public: virtual ~IRun(); virtual long run() const = 0; virtual void stop() = 0; };"
    )
    assert node.has(INTERFACE)


def test_member_annotations():
    node = _only_class(
        """
        /** @adl.persistent */
        class Hit {
        public:
          /**
           * Deposited energy.
           * @adl.readonly
           */
          double energy;
          /** @adl.persistent */ long cell;
        };
        """
    )
    assert node.get(ADLPERSISTENT) == ""
    assert _member(node, "energy").get(ADLREADONLY) == ""
    assert _member(node, "cell").get(ADLPERSISTENT) == ""
    assert not _member(node, "energy").has(ADLPERSISTENT)


def test_unknown_annotation():
    with pytest.raises(AnnotationError, match="adl.bogus"):
        parse_header("/** @adl.bogus */ class A { };", "P/A.h")


def test_namespaces_and_forward_declarations():
    (package,) = parse_header(
        """
        #include "Other.h"
        class Forward;
        namespace outer { namespace inner {
          class A { public: double x; };
        } }
        namespace outer { class B { }; }
        """,
        "Pkg/A.h",
    )
    (outer,) = package.children
    assert [c.name for c in outer.children] == ["inner", "B"]
    unit = parse_source("namespace n { class A { }; }", "Pkg/A.h")
    assert unit.find_class("Pkg::n::A").name == "A"


@pytest.mark.parametrize(
    "text,message",
    [
        ("class A { static double s; };", "static data"),
        ("class A { double d[3]; };", "array"),
        ("class A { bool operator==(const A&) const; };", "operator"),
        ("typedef int Int;", "unsupported declaration"),
        ("class A { double x;", "missing '}'"),
    ],
)
def test_unsupported(text, message):
    with pytest.raises(HeaderParseError, match=message):
        parse_header(text, "Pkg/A.h")


def test_error_location():
    with pytest.raises(HeaderParseError) as info:
        parse_header("class A {\n  static double s;\n};", "Pkg/A.h")
    assert (info.value.path, info.value.line, info.value.column) == ("Pkg/A.h", 2, 3)
    assert info.value.token == "static"


def test_no_classes():
    assert parse_header("#pragma once\n// nothing here\n", "Pkg/A.h") == []


def test_package_name():
    assert package_name("src/LArTBEvent/LArTBHVDData.h") == "LArTBEvent"
    assert package_name("Top.h") == "Top"


SPANS = """#ifndef S_H
#define S_H

/** First. */
class A {
public:
  double x, y;
  long count() const;
};

namespace ns {
class B { public: double z; };
}
struct C { int w; };
#endif
"""


def test_spans_slice_declarations():
    unit = parse_source(SPANS, "Pkg/S.h")
    assert [s.qualified_name for s in unit.classes] == ["Pkg::A", "Pkg::ns::B", "Pkg::C"]
    expected = [
        SPANS[SPANS.index("class A") : SPANS.index("};") + 2],
        "class B { public: double z; };",
        "struct C { int w; };",
    ]
    assert [unit.declaration(s) for s in unit.classes] == expected
    for before, after in zip(unit.classes, unit.classes[1:]):
        assert before.end <= after.start

    a = unit.find_class("A")
    assert [unit.declaration(m) for m in a.members] == [
        "double x, y;",
        "double x, y;",
        "long count() const;",
    ]
    assert [m.declarators for m in a.members] == [2, 2, 1]
    assert a.start <= a.members[0].start and a.members[-1].end <= a.end
    assert a.members[1].end <= a.members[2].start
