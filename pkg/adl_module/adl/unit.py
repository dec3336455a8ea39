"""In-memory form of one ``.adl`` file and its byte-exact rendering."""
from dataclasses import dataclass, field
from enum import Enum
from typing import Dict, List, Tuple

from adl_module.inspector.schema import HeaderFields


class AdlMode(str, Enum):
    EXTERNAL = "EXTERNAL"  # described elsewhere: generate nothing
    ADLEXT = "ADLEXT"  # guard-wrapped extern declaration only
    ADL = "ADL"  # full description

    def __str__(self):
        return self.value


@dataclass(frozen=True)
class AttributeDecl:
    visibility: str
    type_spelling: str
    name: str
    persistent: bool = False
    readonly: bool = False

    def render(self) -> str:
        decl = f"{self.visibility} attribute {self.type_spelling} {self.name};"
        if self.readonly:
            decl = "readonly " + decl
        if self.persistent:
            decl = "persistent " + decl
        return decl


@dataclass(frozen=True)
class ParamDecl:
    type_spelling: str
    name: str
    direction: str = "in"

    def render(self) -> str:
        return f"{self.direction} {self.type_spelling} {self.name}"


@dataclass(frozen=True)
class OperationDecl:
    visibility: str
    return_type: str
    name: str
    params: Tuple[ParamDecl, ...] = ()

    def __post_init__(self):
        if not self.return_type:
            raise ValueError(f"operation {self.name} has no return type")

    def render(self) -> str:
        params = ", ".join(p.render() for p in self.params)
        return f"{self.visibility} {self.return_type} {self.name}({params});"


@dataclass
class AdlUnit:
    class_name: str
    kind: str = "interface"
    header: HeaderFields = field(default_factory=HeaderFields)
    includes: List[str] = field(default_factory=list)
    attributes: List[AttributeDecl] = field(default_factory=list)
    operations: List[OperationDecl] = field(default_factory=list)
    extern_only: bool = False
    guard: str = ""
    # filled by the reader: what -> 1-based line, for diagnostics
    lines: Dict[str, int] = field(default_factory=dict, compare=False, repr=False)

    def __post_init__(self):
        if not self.guard:
            self.guard = guard_for(self.class_name)

    @property
    def members(self):
        return list(self.attributes) + list(self.operations)

    def line_of(self, what: str) -> int:
        return self.lines.get(what, 1)


def guard_for(class_name: str) -> str:
    return f"{class_name}_ADL"


def render_unit(unit: AdlUnit) -> str:
    """Render in the exact layout of a generated description file."""
    out = [
        f"#ifndef {unit.guard}",
        f"#define {unit.guard}",
        "/**",
        f" * @Title:  {unit.header.title}",
        f" * @Author: {unit.header.author}",
        f" * @Version: {unit.header.version}",
        " */",
    ]
    if unit.extern_only:
        out += ["", f"extern {unit.kind} {unit.class_name};", ""]
    else:
        out += [f'#include "{include}"' for include in unit.includes]
        out += ["", f"{unit.kind} {unit.class_name}", "{", ""]
        out += [a.render() for a in unit.attributes]
        out += [o.render() for o in unit.operations]
        out += ["", "};"]
    out.append("#endif")
    return "\n".join(out) + "\n"
