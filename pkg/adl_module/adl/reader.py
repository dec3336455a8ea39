"""Reader for generated ``.adl`` files and a well-formedness checker.

Only the generator's dialect is accepted: guard, optional header comment,
includes, then either an ``extern`` declaration or a braced body of
attribute and operation lines. Runs of blank lines are insignificant.
"""
import re
from dataclasses import dataclass
from enum import Enum
from typing import Collection, Iterable, List, Optional, Tuple

from adl_module.adl.unit import AdlUnit, AttributeDecl, OperationDecl, ParamDecl, guard_for
from adl_module.errors import AdlParseError
from adl_module.inspector.schema import HeaderFields

_VIS = r"(?P<vis>public|protected|private)"
_IDENT = r"[A-Za-z_]\w*"

_GUARD_RE = re.compile(rf"#ifndef (?P<guard>{_IDENT})")
_DEFINE_RE = re.compile(rf"#define (?P<guard>{_IDENT})")
_HEADER_FIELD_RE = re.compile(r"\*\s*@(?P<field>Title|Author|Version):(?P<value>.*)")
_INCLUDE_RE = re.compile(r'#include "(?P<file>[^"]+)"')
_EXTERN_RE = re.compile(rf"extern (?P<kind>{_IDENT}) (?P<name>{_IDENT});")
_HEAD_RE = re.compile(rf"(?P<kind>{_IDENT}) (?P<name>{_IDENT})")
_ATTRIBUTE_RE = re.compile(
    rf"(?P<persistent>persistent )?(?P<readonly>readonly )?{_VIS} attribute "
    rf"(?P<type>\S.*?) (?P<name>{_IDENT});"
)
_OPERATION_RE = re.compile(rf"{_VIS} (?P<ret>\S.*?) (?P<name>{_IDENT})\((?P<params>.*)\);")
_PARAM_RE = re.compile(rf"(?P<dir>in|out|inout) (?P<type>\S.*?) (?P<name>{_IDENT})")


class Severity(str, Enum):
    ERROR = "ERROR"
    WARNING = "WARNING"

    def __str__(self):
        return self.value


@dataclass(frozen=True)
class Diagnostic:
    severity: Severity
    line: int
    message: str

    def render(self, filename: str) -> str:
        return f"{filename}:{self.line}: {self.severity}: {self.message}"


class _Lines:
    """Cursor over non-blank lines, keeping 1-based line numbers."""

    def __init__(self, text: str):
        raw = text.split("\n")
        if raw and raw[-1] == "":
            raw.pop()
        self.items = [(i, line.rstrip("\r")) for i, line in enumerate(raw, start=1)]
        self.pos = 0
        self.last_line = len(raw) or 1

    def skip_blank(self):
        while self.pos < len(self.items) and not self.items[self.pos][1].strip():
            self.pos += 1

    def peek(self) -> Optional[Tuple[int, str]]:
        self.skip_blank()
        return self.items[self.pos] if self.pos < len(self.items) else None

    def next(self, what: str) -> Tuple[int, str]:
        item = self.peek()
        if item is None:
            raise AdlParseError(f"unexpected end of file, expected {what}", self.last_line)
        self.pos += 1
        return item


def _split_params(text: str) -> List[str]:
    parts, depth, current = [], 0, []
    for char in text:
        if char == "<":
            depth += 1
        elif char == ">":
            depth -= 1
        if char == "," and depth == 0:
            parts.append("".join(current).strip())
            current = []
        else:
            current.append(char)
    parts.append("".join(current).strip())
    return parts


def _parse_operation(match, lineno: int) -> OperationDecl:
    params = []
    if match["params"].strip():
        for part in _split_params(match["params"]):
            param = _PARAM_RE.fullmatch(part)
            if param is None:
                raise AdlParseError(f"malformed parameter {part!r}", lineno)
            params.append(ParamDecl(param["type"], param["name"], param["dir"]))
    return OperationDecl(match["vis"], match["ret"], match["name"], tuple(params))


# spacing render_unit puts between each header label and its value
_HEADER_SEPARATORS = {"title": "  ", "author": " ", "version": " "}


def _drop_separator(value: str, separator: str) -> str:
    while separator and not value.startswith(separator):
        separator = separator[:-1]
    return value[len(separator) :]


def _parse_header(lines: _Lines) -> HeaderFields:
    start, _ = lines.next("/**")
    fields = {}
    while True:
        if lines.pos >= len(lines.items):
            raise AdlParseError("unterminated comment", start)
        _, line = lines.items[lines.pos]
        lines.pos += 1
        stripped = line.strip()
        if stripped.endswith("*/"):
            return HeaderFields(**fields)
        match = _HEADER_FIELD_RE.match(line.lstrip())
        if match is not None:
            field = match["field"].lower()
            fields[field] = _drop_separator(match["value"], _HEADER_SEPARATORS[field])


def parse_adl(text: str) -> AdlUnit:
    lines = _Lines(text)

    lineno, line = lines.next("#ifndef")
    match = _GUARD_RE.fullmatch(line.strip())
    if match is None:
        raise AdlParseError("expected '#ifndef <guard>'", lineno)
    guard = match["guard"]
    positions = {"guard": lineno}
    lineno, line = lines.next("#define")
    match = _DEFINE_RE.fullmatch(line.strip())
    if match is None:
        raise AdlParseError("expected '#define <guard>'", lineno)
    if match["guard"] != guard:
        raise AdlParseError(f"#define {match['guard']} does not match #ifndef {guard}", lineno)

    header = HeaderFields()
    item = lines.peek()
    if item is not None and item[1].strip() == "/**":
        header = _parse_header(lines)

    includes = []
    while True:
        item = lines.peek()
        if item is None:
            break
        match = _INCLUDE_RE.fullmatch(item[1].strip())
        if match is None:
            break
        lines.pos += 1
        includes.append(match["file"])
        positions.setdefault(f"include:{match['file']}", item[0])

    lineno, line = lines.next("class declaration")
    positions["kind"] = lineno
    extern = _EXTERN_RE.fullmatch(line.strip())
    if extern is not None:
        if includes:
            raise AdlParseError("extern declarations carry no includes", lineno)
        unit = AdlUnit(extern["name"], extern["kind"], header, extern_only=True, guard=guard)
    else:
        match = _HEAD_RE.fullmatch(line.strip())
        if match is None:
            raise AdlParseError("expected '<kind> <ClassName>'", lineno)
        unit = AdlUnit(match["name"], match["kind"], header, includes=includes, guard=guard)
        lineno, line = lines.next("'{'")
        if line.strip() != "{":
            raise AdlParseError("expected '{'", lineno)
        while True:
            lineno, line = lines.next("'};'")
            stripped = line.strip()
            if stripped == "};":
                break
            attribute = _ATTRIBUTE_RE.fullmatch(stripped)
            if attribute is not None:
                positions[f"attribute:{len(unit.attributes)}"] = lineno
                unit.attributes.append(
                    AttributeDecl(
                        attribute["vis"],
                        attribute["type"],
                        attribute["name"],
                        persistent=attribute["persistent"] is not None,
                        readonly=attribute["readonly"] is not None,
                    )
                )
                continue
            operation = _OPERATION_RE.fullmatch(stripped)
            if operation is None:
                raise AdlParseError(f"unrecognized member declaration {stripped!r}", lineno)
            positions[f"operation:{len(unit.operations)}"] = lineno
            unit.operations.append(_parse_operation(operation, lineno))

    lineno, line = lines.next("#endif")
    if line.strip() != "#endif":
        raise AdlParseError("expected '#endif'", lineno)
    trailing = lines.peek()
    if trailing is not None:
        raise AdlParseError("content after #endif", trailing[0])
    unit.lines = positions
    return unit


def check_unit(
    unit: AdlUnit,
    sibling_files: Iterable[str] = (),
    allowed_kinds: Optional[Collection[str]] = None,
) -> List[Diagnostic]:
    """Structural checks on one unit; ``sibling_files`` are file names."""
    diagnostics = []
    if unit.guard != guard_for(unit.class_name):
        diagnostics.append(
            Diagnostic(
                Severity.ERROR,
                unit.line_of("guard"),
                f"guard {unit.guard} does not match class {unit.class_name} "
                f"(expected {guard_for(unit.class_name)})",
            )
        )

    seen = set()
    members = [("attribute", i, a.name) for i, a in enumerate(unit.attributes)]
    members += [("operation", i, o.name) for i, o in enumerate(unit.operations)]
    for what, index, name in members:
        if name in seen:
            diagnostics.append(
                Diagnostic(Severity.ERROR, unit.line_of(f"{what}:{index}"), f"duplicate member {name}")
            )
        seen.add(name)

    siblings = set(sibling_files)
    for include in unit.includes:
        if include not in siblings:
            diagnostics.append(
                Diagnostic(
                    Severity.WARNING,
                    unit.line_of(f"include:{include}"),
                    f"included file {include} not found",
                )
            )

    if allowed_kinds is not None and unit.kind not in allowed_kinds:
        diagnostics.append(
            Diagnostic(
                Severity.WARNING,
                unit.line_of("kind"),
                f"unknown interface kind {unit.kind} (expected one of {', '.join(allowed_kinds)})",
            )
        )
    return sorted(diagnostics, key=lambda d: d.line)
