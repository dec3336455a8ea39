import random
import string

import pytest

from adl_module.adl.reader import Severity, check_unit, parse_adl
from adl_module.adl.unit import (
    AdlUnit,
    AttributeDecl,
    OperationDecl,
    ParamDecl,
    render_unit,
)
from adl_module.errors import AdlParseError
from adl_module.inspector.schema import HeaderFields

from conftest import GOLDEN

KINDS = ("interface", "DataObject", "ContainedObject")


def test_parse_golden():
    unit = parse_adl(GOLDEN.read_text())
    assert unit.guard == "LArTBHVDData_ADL"
    assert unit.kind == "ContainedObject"
    assert unit.class_name == "LArTBHVDData"
    assert unit.header == HeaderFields("Module ADL generator for Together", "Massimo_Marino@lbl.gov", "0.9.6")
    assert len(unit.attributes) == 5
    assert unit.attributes[-1] == AttributeDecl("private", "std::vector <double>", "HVdata")
    assert render_unit(unit) == GOLDEN.read_text()
    assert check_unit(unit, [], KINDS) == []


def test_minimal_round_trip():
    unit = AdlUnit("X")
    assert parse_adl(render_unit(unit)) == unit


def test_header_whitespace_round_trip():
    unit = AdlUnit("X", header=HeaderFields(" lead", "trail ", "  v  "))
    assert parse_adl(render_unit(unit)).header == unit.header
    # hand-written headers may drop the label spacing
    text = render_unit(AdlUnit("X")).replace(" * @Title:  ", " * @Title:T")
    assert parse_adl(text).header.title == "T"


def test_extern_round_trip():
    unit = AdlUnit("X", "DataObject", HeaderFields("t", "a", "1"), extern_only=True)
    assert parse_adl(render_unit(unit)) == unit


def test_blank_lines_and_missing_header():
    text = "\n#ifndef X_ADL\n#define X_ADL\n\n\ninterface X\n\n{\npublic attribute double x;\n\n\n};\n#endif\n\n"
    unit = parse_adl(text)
    assert unit.header == HeaderFields()
    assert unit.attributes == [AttributeDecl("public", "double", "x")]
    assert unit.lines["attribute:0"] == 9


@pytest.mark.parametrize(
    "text,line",
    [
        ("", 1),
        ("#ifndef X_ADL\n#define Y_ADL\n", 2),
        ("#ifndef X_ADL\n#define X_ADL\n/**\n * @Title: t\n", 3),
        ("#ifndef X_ADL\n#define X_ADL\nattribute x;\ninterface X\n{\n};\n#endif\n", 3),
        ("#ifndef X_ADL\n#define X_ADL\ninterface X\n{\nbogus;\n};\n#endif\n", 5),
        ("#ifndef X_ADL\n#define X_ADL\ninterface X\n{\n};\n#endif\ntrailing\n", 7),
        ("#ifndef X_ADL\n#define X_ADL\ninterface X\n{\n};\n", 5),
        ('#ifndef X_ADL\n#define X_ADL\n#include "A.adl"\nextern interface X;\n#endif\n', 4),
        ("#ifndef X_ADL\n#define X_ADL\ninterface X\n{\npublic void f(double x);\n};\n#endif\n", 5),
    ],
)
def test_parse_errors(text, line):
    with pytest.raises(AdlParseError) as info:
        parse_adl(text)
    assert info.value.line == line


def test_parse_never_crashes_on_noise():
    rng = random.Random(1)
    golden = GOLDEN.read_text()
    alphabet = string.printable + "{};<>\"@*"
    for _ in range(1000):
        chars = list(golden)
        for _ in range(rng.randint(1, 8)):
            chars[rng.randrange(len(chars))] = rng.choice(alphabet)
        text = "".join(chars) if rng.random() < 0.8 else "".join(rng.choice(alphabet) for _ in range(80))
        try:
            parse_adl(text)
        except AdlParseError as e:
            assert 1 <= e.line <= max(1, text.count("\n") + 1)


def _ident(rng, prefix=""):
    return prefix + rng.choice(string.ascii_letters) + "".join(
        rng.choice(string.ascii_letters + string.digits + "_") for _ in range(rng.randint(0, 8))
    )


def _type(rng, depth=0):
    choice = rng.randrange(5 if depth < 2 else 3)
    if choice == 0:
        return rng.choice(["long", "short", "double", "unsigned long", "bool", "float"])
    if choice in (1, 2):
        return "::".join(_ident(rng) for _ in range(rng.randint(1, 3)))
    args = ", ".join(_type(rng, depth + 1) for _ in range(rng.randint(1, 2)))
    return f"{_ident(rng)} <{args}>"


def _header_field(rng):
    values = ["", " ", "Module ADL generator", " lead", "trail  ", "a@b.org"]
    return rng.choice(values + ["0.9." + str(rng.randint(0, 9))])


def _random_unit(rng):
    visibility = ["public", "protected", "private"]
    unit = AdlUnit(
        _ident(rng),
        rng.choice(KINDS),
        HeaderFields(_header_field(rng), _header_field(rng), _header_field(rng)),
        extern_only=rng.random() < 0.1,
    )
    if unit.extern_only:
        return unit
    unit.includes = [_ident(rng) + ".adl" for _ in range(rng.randint(0, 3))]
    for _ in range(rng.randint(0, 5)):
        unit.attributes.append(
            AttributeDecl(
                rng.choice(visibility),
                _type(rng),
                _ident(rng, "m"),
                persistent=rng.random() < 0.5,
                readonly=rng.random() < 0.5,
            )
        )
    for _ in range(rng.randint(0, 4)):
        params = tuple(ParamDecl(_type(rng), _ident(rng)) for _ in range(rng.randint(0, 3)))
        unit.operations.append(
            OperationDecl(rng.choice(visibility), rng.choice(["void", _type(rng)]), _ident(rng, "f"), params)
        )
    return unit


def test_random_round_trip():
    rng = random.Random(0)
    for _ in range(1000):
        unit = _random_unit(rng)
        assert parse_adl(render_unit(unit)) == unit, render_unit(unit)


def test_check_guard_mismatch():
    unit = parse_adl(render_unit(AdlUnit("X", guard="WRONG_ADL")))
    (diagnostic,) = check_unit(unit)
    assert diagnostic.severity == Severity.ERROR
    assert diagnostic.line == 1
    assert diagnostic.render("X.adl").startswith("X.adl:1: ERROR: guard WRONG_ADL")


def test_check_duplicates_and_includes():
    unit = AdlUnit(
        "X",
        includes=["Present.adl", "Missing.adl"],
        attributes=[AttributeDecl("public", "double", "x")],
        operations=[OperationDecl("public", "double", "x")],
    )
    unit = parse_adl(render_unit(unit))
    diagnostics = check_unit(unit, ["Present.adl", "X.adl"], KINDS)
    assert [(d.severity, d.line) for d in diagnostics] == [(Severity.WARNING, 9), (Severity.ERROR, 15)]
    assert "Missing.adl" in diagnostics[0].message
    assert "duplicate member x" in diagnostics[1].message


def test_check_unknown_kind():
    (diagnostic,) = check_unit(AdlUnit("X", kind="Widget"), [], KINDS)
    assert diagnostic.severity == Severity.WARNING
    assert "Widget" in diagnostic.message
