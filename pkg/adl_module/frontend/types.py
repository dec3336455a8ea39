"""C++ type expressions and their ADL spelling."""
from dataclasses import dataclass, field
from enum import Enum
from typing import Dict, Iterator, Optional, Tuple

from pyparsing import (
    Forward,
    Group,
    Keyword,
    MatchFirst,
    OneOrMore,
    Optional as Opt,
    ParseException,
    Suppress,
    Word,
    ZeroOrMore,
    alphanums,
    alphas,
    DelimitedList,
)

from adl_module.errors import ConfigError, UnsupportedTypeError
from adl_module.frontend.parser import PRIMITIVE_WORDS
from adl_module.utils.files import read_text
from adl_module.utils.typing import PathLike, TypeMap

DEFAULT_TYPE_MAP = {"int": "long", "unsigned int": "unsigned long"}


class TypeForm(str, Enum):
    PRIMITIVE = "PRIMITIVE"
    NAMED = "NAMED"
    TEMPLATE = "TEMPLATE"


@dataclass(frozen=True)
class TypeRef:
    spelling: str
    form: TypeForm
    # primitive spelling or qualified name; the template head for TEMPLATE
    name: str
    args: Tuple["TypeRef", ...] = ()
    adl_spelling: str = field(default="", compare=False)

    def render(self) -> str:
        """Canonical C++ spelling (whitespace normalized, const dropped)."""
        if self.form == TypeForm.TEMPLATE:
            return f"{self.name}<{', '.join(a.render() for a in self.args)}>"
        return self.name

    def walk(self) -> Iterator["TypeRef"]:
        yield self
        for arg in self.args:
            yield from arg.walk()

    @property
    def unqualified_name(self) -> str:
        return self.name.split("::")[-1]


def _build_grammar():
    const = Suppress(Keyword("const") | Keyword("volatile"))
    reserved = MatchFirst([Keyword(w) for w in sorted(PRIMITIVE_WORDS) + ["const", "volatile"]])
    identifier = ~reserved + Word(alphas + "_", alphanums + "_")
    primitive = OneOrMore(MatchFirst([Keyword(w) for w in sorted(PRIMITIVE_WORDS)]))
    primitive.set_parse_action(lambda t: " ".join(t))
    # DelimitedList drops the "::" separators; put them back
    qualified = Opt("::") + DelimitedList(identifier, "::")
    qualified.set_parse_action(
        lambda t: "::" + "::".join(t[1:]) if t[0] == "::" else "::".join(t)
    )

    type_expr = Forward()
    template_args = Suppress("<") + DelimitedList(Group(type_expr)) + Suppress(">")
    named = qualified("name") + Opt(Group(template_args)("args"))
    declarator = Word("*&", exact=1)
    type_expr <<= (
        ZeroOrMore(const)
        + (primitive("primitive") | named)
        + ZeroOrMore(const)
        + ZeroOrMore(declarator)("declarators")
        + ZeroOrMore(const)
    )
    return type_expr


_TYPE_GRAMMAR = _build_grammar()


def _to_typeref(spelling: str, result, type_map: TypeMap) -> TypeRef:
    if result.get("declarators"):
        raise UnsupportedTypeError(spelling, "pointer and reference types carry no value")
    if "primitive" in result:
        name = result["primitive"]
        adl = type_map.get(name, name)
        return TypeRef(spelling, TypeForm.PRIMITIVE, name, adl_spelling=adl)
    name = result["name"]
    if "args" in result:
        args = tuple(_to_typeref(spelling, a, type_map) for a in result["args"])
        adl = f"{type_map.get(name, name)} <{', '.join(a.adl_spelling for a in args)}>"
        return TypeRef(spelling, TypeForm.TEMPLATE, name, args, adl_spelling=adl)
    return TypeRef(spelling, TypeForm.NAMED, name, adl_spelling=type_map.get(name, name))


def normalize_type(spelling: str, type_map: Optional[TypeMap] = None) -> TypeRef:
    """Parse a type spelling and compute its ADL spelling.

    The map applies to primitive spellings (``int`` -> ``long`` by default)
    and to any qualified name it lists explicitly. Template applications
    render as ``head <arg, ...>``, with one space before ``<``.
    """
    type_map = DEFAULT_TYPE_MAP if type_map is None else type_map
    try:
        result = _TYPE_GRAMMAR.parse_string(spelling, parse_all=True)
    except ParseException as e:
        raise UnsupportedTypeError(spelling, f"not a supported type expression ({e.msg})") from None
    return _to_typeref(spelling, result, type_map)


def load_type_map(path: PathLike, base: Optional[TypeMap] = None) -> Dict[str, str]:
    """Read ``cppType = adlType`` lines on top of ``base``."""
    type_map = dict(DEFAULT_TYPE_MAP if base is None else base)
    for lineno, line in enumerate(read_text(path).splitlines(), start=1):
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        cpp, sep, adl = line.partition("=")
        cpp, adl = " ".join(cpp.split()), " ".join(adl.split())
        if not sep or not cpp or not adl:
            raise ConfigError("expected 'cppType = adlType'", str(path), lineno)
        type_map[cpp] = adl
    return type_map
