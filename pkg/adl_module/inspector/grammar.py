"""Line grammar of the Property Inspector configuration files.

::

    inspector.node.element.*.Class.item.ADL.item.ADLENABLED =
    \\ ( {
    \\ values := {"EXTERNAL","ADLEXT","ADL"},
    \\ names := {"Explicit extern","Extern in .adl","Full ADL"}
    \\ }
    \\ )

A physical line starting with ``\\`` continues the previous logical line.
Blank lines and ``#`` comments are skipped.
"""
import json
from dataclasses import dataclass
from typing import List, Optional, Tuple, Union

from pyparsing import (
    Keyword,
    ParseException,
    QuotedString,
    Suppress,
    DelimitedList,
    Group,
    Optional as Opt,
)

from adl_module.errors import ConfigError


@dataclass(frozen=True)
class Scalar:
    text: str


@dataclass(frozen=True)
class Enumeration:
    values: Tuple[str, ...]
    names: Tuple[str, ...]

    def __post_init__(self):
        if len(self.values) != len(self.names):
            raise ValueError(
                f"values/names length mismatch ({len(self.values)} != {len(self.names)})"
            )


Payload = Union[Scalar, Enumeration]


@dataclass(frozen=True)
class ConfigEntry:
    key_path: str
    payload: Payload
    line: int = 0

    def __eq__(self, other):
        if not isinstance(other, ConfigEntry):
            return NotImplemented
        return (self.key_path, self.payload) == (other.key_path, other.payload)

    def __hash__(self):
        return hash((self.key_path, self.payload))

    @property
    def segments(self) -> List[str]:
        return self.key_path.split(".")


def _build_enum_grammar():
    string = QuotedString('"', esc_char="\\")
    string_list = Suppress("{") + Opt(DelimitedList(string)) + Suppress("}")
    field = Group((Keyword("values") | Keyword("names")) + Suppress(":=") + Group(string_list))
    return (
        Suppress("(")
        + Suppress("{")
        + DelimitedList(field)
        + Opt(Suppress(","))
        + Suppress("}")
        + Suppress(")")
    )


_ENUM_GRAMMAR = _build_enum_grammar()


def logical_lines(text: str) -> List[Tuple[int, str]]:
    """Join continuation lines; returns (first physical line number, text)."""
    logical = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        stripped = raw.strip()
        if stripped.startswith("\\"):
            if not logical:
                raise ConfigError("continuation line without a preceding entry", line=lineno)
            start, current = logical[-1]
            continuation = stripped[1:].strip()
            logical[-1] = (start, f"{current} {continuation}".strip() if current else continuation)
            continue
        if not stripped or stripped.startswith("#"):
            continue
        logical.append((lineno, stripped))
    return logical


def parse_payload(value: str, line: Optional[int] = None) -> Payload:
    if not value.startswith("("):
        return Scalar(value)
    try:
        fields = _ENUM_GRAMMAR.parse_string(value, parse_all=True)
    except ParseException as e:
        raise ConfigError(f"malformed enumeration: {e.msg}", line=line) from None
    found = {}
    for name, items in fields:
        if name in found:
            raise ConfigError(f"duplicate {name!r} list", line=line)
        found[name] = tuple(items)
    values = found.get("values", ())
    names = found.get("names", values)
    if len(values) != len(names):
        raise ConfigError(
            f"values/names length mismatch ({len(values)} values, {len(names)} names)",
            line=line,
        )
    return Enumeration(values, names)


def parse_config(text: str, filename: Optional[str] = None) -> List[ConfigEntry]:
    try:
        lines = logical_lines(text)
    except ConfigError as e:
        raise ConfigError(e.message, filename, e.line) from None
    entries = []
    for lineno, line in lines:
        key_path, sep, value = line.partition("=")
        key_path = key_path.strip()
        if not sep or not key_path:
            raise ConfigError(f"expected 'keyPath = value', got {line!r}", filename, lineno)
        if any(not s for s in key_path.split(".")) or any(c.isspace() for c in key_path):
            raise ConfigError(f"malformed key path {key_path!r}", filename, lineno)
        try:
            payload = parse_payload(value.strip(), lineno)
        except ConfigError as e:
            raise ConfigError(e.message, filename, lineno) from None
        entries.append(ConfigEntry(key_path, payload, lineno))
    return entries


def _quote_list(items) -> str:
    return "{" + ",".join(json.dumps(item, ensure_ascii=False) for item in items) + "}"


def render_entry(entry: ConfigEntry) -> str:
    payload = entry.payload
    if isinstance(payload, Enumeration):
        return (
            f"{entry.key_path} = ( {{ values := {_quote_list(payload.values)}, "
            f"names := {_quote_list(payload.names)} }} )"
        )
    return f"{entry.key_path} = {payload.text}".rstrip()


def render_config(entries) -> str:
    return "".join(render_entry(e) + "\n" for e in entries)
