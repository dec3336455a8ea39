import logging
import re
from dataclasses import dataclass, field
from pathlib import Path
from typing import Dict, FrozenSet, Iterable, List, Optional, Tuple

from adl_module.errors import ConfigError
from adl_module.inspector.grammar import ConfigEntry, Enumeration, Scalar, parse_config
from adl_module.model.element import (
    ADLENABLED,
    ADLFOLDER,
    ADLINTERFACE,
    ShapeType,
)
from adl_module.utils.typing import PathLike

log = logging.getLogger(__name__)

_KEY_SEGMENT = re.compile(r"[A-Z][A-Z0-9_]*\Z")

SHAPE_SEGMENTS = {
    "Package": (ShapeType.PACKAGE,),
    "Class": (ShapeType.CLASS,),
    "Operation": (ShapeType.OPERATION,),
    "Attribute": (ShapeType.ATTRIBUTE,),
    "Member": (ShapeType.OPERATION, ShapeType.ATTRIBUTE),
    "Parameter": (ShapeType.PARAMETER,),
}

HEADER_PREFIX = "adl.header."
CLASS_ITEM = "inspector.node.element.*.Class.item.ADL.item."

BUILTIN_ENTRIES = (
    ConfigEntry(
        CLASS_ITEM + ADLENABLED,
        Enumeration(("EXTERNAL", "ADLEXT", "ADL"), ("Explicit extern", "Extern in .adl", "Full ADL")),
    ),
    ConfigEntry(CLASS_ITEM + ADLENABLED + ".default", Scalar("ADL")),
    ConfigEntry(CLASS_ITEM + ADLENABLED + ".name", Scalar("ADL Enabled")),
    ConfigEntry(CLASS_ITEM + ADLFOLDER, Scalar("")),
    ConfigEntry(CLASS_ITEM + ADLFOLDER + ".name", Scalar("ADL Folder")),
    ConfigEntry(
        CLASS_ITEM + ADLINTERFACE,
        Enumeration(("interface", "DataObject", "ContainedObject"), ("interface", "DataObject", "ContainedObject")),
    ),
    ConfigEntry(CLASS_ITEM + ADLINTERFACE + ".name", Scalar("ADL Interface")),
    ConfigEntry(HEADER_PREFIX + "title", Scalar("Module ADL generator for Together")),
    ConfigEntry(HEADER_PREFIX + "author", Scalar("Massimo_Marino@lbl.gov")),
    ConfigEntry(HEADER_PREFIX + "version", Scalar("0.9.6")),
)


@dataclass(frozen=True)
class Violation:
    key: str
    value: str
    allowed: Tuple[str, ...]


@dataclass
class PropertySchema:
    key: str
    applies_to: FrozenSet[ShapeType] = frozenset(ShapeType)
    allowed: Optional[Tuple[str, ...]] = None
    display_names: Optional[Tuple[str, ...]] = None
    default: Optional[str] = None
    label: Optional[str] = None

    def accepts(self, value: str) -> bool:
        return self.allowed is None or value in self.allowed


class SchemaSet:
    def __init__(self, schemas: Iterable[PropertySchema] = ()):
        self._schemas: Dict[str, PropertySchema] = {s.key: s for s in schemas}

    def __iter__(self):
        return iter(self._schemas.values())

    def __contains__(self, key):
        return key in self._schemas

    def __getitem__(self, key) -> PropertySchema:
        return self._schemas[key]

    def get(self, shape: ShapeType, key: str) -> Optional[PropertySchema]:
        schema = self._schemas.get(key)
        if schema is None or ShapeType(shape) not in schema.applies_to:
            return None
        return schema

    def default(self, key: str) -> Optional[str]:
        schema = self._schemas.get(key)
        return schema.default if schema is not None else None

    def validate_value(self, shape: ShapeType, key: str, value: str) -> Optional[Violation]:
        """None when no schema governs (shape, key) or the value is allowed."""
        schema = self.get(shape, key)
        if schema is None or schema.accepts(value):
            return None
        return Violation(key, value, schema.allowed)


def validate_value(schemas: SchemaSet, shape: ShapeType, key: str, value: str) -> Optional[Violation]:
    return schemas.validate_value(shape, key, value)


@dataclass(frozen=True)
class HeaderFields:
    title: str = ""
    author: str = ""
    version: str = ""


@dataclass
class GeneratorDefaults:
    header: HeaderFields = field(default_factory=HeaderFields)


@dataclass
class InspectorConfig:
    schemas: SchemaSet
    defaults: GeneratorDefaults
    entries: List[ConfigEntry]


def merge_entries(*entry_lists: Iterable[ConfigEntry]) -> List[ConfigEntry]:
    """Key-by-key merge; later lists win, first-seen order is kept."""
    merged: Dict[str, ConfigEntry] = {}
    for entries in entry_lists:
        for entry in entries:
            merged[entry.key_path] = entry
    return list(merged.values())


def _split_key(segments: List[str]):
    for i in range(len(segments) - 1, -1, -1):
        if _KEY_SEGMENT.match(segments[i]):
            return i
    return None


def build_config(entries: Iterable[ConfigEntry]) -> InspectorConfig:
    entries = list(entries)
    schemas: Dict[str, PropertySchema] = {}
    shapes: Dict[str, set] = {}
    header = {}

    for entry in entries:
        if entry.key_path.startswith(HEADER_PREFIX):
            name = entry.key_path[len(HEADER_PREFIX) :]
            if name not in ("title", "author", "version") or not isinstance(entry.payload, Scalar):
                raise ConfigError(f"unknown header field {entry.key_path}", line=entry.line)
            header[name] = entry.payload.text
            continue

        segments = entry.segments
        index = _split_key(segments)
        if index is None:
            log.debug(f"Ignoring config entry {entry.key_path}")
            continue
        key, suffix = segments[index], segments[index + 1 :]
        schema = schemas.setdefault(key, PropertySchema(key))
        for segment in segments[:index]:
            shapes.setdefault(key, set()).update(SHAPE_SEGMENTS.get(segment, ()))

        payload = entry.payload
        if not suffix:
            if isinstance(payload, Enumeration):
                schema.allowed = payload.values
                schema.display_names = payload.names
            else:
                schema.default = payload.text
        elif suffix == ["name"] and isinstance(payload, Scalar):
            schema.label = payload.text
        elif suffix == ["default"] and isinstance(payload, Scalar):
            schema.default = payload.text
        else:
            log.warning(f"Ignoring unsupported config entry {entry.key_path}")

    for key, schema in schemas.items():
        if shapes.get(key):
            schema.applies_to = frozenset(shapes[key])
        if schema.allowed is not None:
            if schema.default is None or schema.default == "" and "" not in schema.allowed:
                schema.default = schema.allowed[0] if schema.allowed else None
            elif schema.default not in schema.allowed:
                raise ConfigError(
                    f"default {schema.default!r} for {key} is not one of {{{', '.join(schema.allowed)}}}"
                )

    defaults = GeneratorDefaults(header=HeaderFields(**header))
    return InspectorConfig(SchemaSet(schemas.values()), defaults, entries)


def read_config_dir(path: PathLike) -> List[ConfigEntry]:
    path = Path(path)
    if not path.is_dir():
        raise ConfigError(f"unreadable config directory {path}")
    entry_lists = []
    for file in sorted(p for p in path.iterdir() if p.is_file()):
        try:
            text = file.read_text(encoding="utf-8")
        except (OSError, UnicodeDecodeError) as e:
            raise ConfigError(f"cannot read config file: {e}", str(file)) from None
        entry_lists.append(parse_config(text, str(file)))
        log.debug(f"Loaded config file {file}")
    return merge_entries(*entry_lists)


def load_config_dir(path: Optional[PathLike]) -> InspectorConfig:
    """Built-in entries, overridden file by file in sorted filename order."""
    entries = read_config_dir(path) if path is not None else []
    return build_config(merge_entries(BUILTIN_ENTRIES, entries))


def default_config() -> InspectorConfig:
    return build_config(BUILTIN_ENTRIES)
