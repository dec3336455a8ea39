"""Reverse engineering of the supported C++ header subset into model elements.

Supported: include guards and other preprocessor lines (skipped),
``namespace`` blocks, ``class``/``struct`` declarations with base lists,
access specifiers, data members and method declarations (constructors and
destructors included). Inline bodies are skipped by brace matching.
Everything else is reported as a :class:`HeaderParseError`.
"""
import logging
from dataclasses import dataclass, field
from pathlib import Path
from typing import List, Optional

from adl_module.errors import AnnotationError, HeaderParseError, NameCollisionError
from adl_module.frontend.doc_comment import extract_annotations, parse_doc_comment
from adl_module.frontend.lexer import DocToken, Token, tokenize
from adl_module.model.element import (
    EXTENDS,
    INTERFACE,
    MODEL_PART,
    PROJECT_PART,
    RETURN_TYPE,
    TYPE,
    VISIBILITY,
    Element,
    ShapeType,
)

log = logging.getLogger(__name__)

PRIMITIVE_WORDS = frozenset(
    [
        "void",
        "bool",
        "char",
        "wchar_t",
        "char16_t",
        "char32_t",
        "short",
        "int",
        "long",
        "float",
        "double",
        "signed",
        "unsigned",
    ]
)
ACCESS_SPECIFIERS = ("public", "protected", "private")
METHOD_SPECIFIERS = ("virtual", "inline", "explicit", "static", "constexpr")
UNSUPPORTED = ("typedef", "using", "enum", "union", "friend", "template", "operator", "extern")
CV = ("const", "volatile")


@dataclass
class MemberSpan:
    name: str
    start: int
    end: int
    line: int
    doc: Optional[DocToken] = None
    # names declared by the same statement, e.g. `double a, b;`
    declarators: int = 1


@dataclass
class ClassSpan:
    name: str
    qualified_name: str
    start: int
    end: int
    line: int
    doc: Optional[DocToken] = None
    members: List[MemberSpan] = field(default_factory=list)

    def member(self, name: str) -> MemberSpan:
        for span in self.members:
            if span.name == name:
                return span
        raise KeyError(name)


@dataclass
class SourceUnit:
    path: str
    text: str
    classes: List[ClassSpan] = field(default_factory=list)
    packages: List[Element] = field(default_factory=list)

    def declaration(self, span) -> str:
        return self.text[span.start : span.end]

    def find_class(self, name: str) -> ClassSpan:
        for span in self.classes:
            if name in (span.name, span.qualified_name):
                return span
        raise KeyError(name)


def package_name(path: str) -> str:
    path = Path(path)
    return path.parent.name or path.stem or "default"


class HeaderParser:
    def __init__(self, text: str, path: str = "", model_part: str = PROJECT_PART):
        self.text = text
        self.path = str(path)
        self.model_part = model_part
        self.tokens = tokenize(text, self.path)
        self.pos = 0
        self.unit = SourceUnit(path=self.path, text=text)

    ## Token helpers

    def peek(self, offset: int = 0) -> Optional[Token]:
        index = self.pos + offset
        return self.tokens[index] if index < len(self.tokens) else None

    def at(self, value: str, offset: int = 0) -> bool:
        tok = self.peek(offset)
        return tok is not None and tok.value == value and tok.type != "STRING"

    def next(self) -> Token:
        tok = self.peek()
        if tok is None:
            raise self.error("unexpected end of input")
        self.pos += 1
        return tok

    def expect(self, value: str) -> Token:
        tok = self.peek()
        if tok is None or tok.value != value:
            raise self.error(f"expected {value!r}", tok)
        self.pos += 1
        return tok

    def expect_id(self, what: str = "identifier") -> Token:
        tok = self.peek()
        if tok is None or tok.type != "ID":
            raise self.error(f"expected {what}", tok)
        self.pos += 1
        return tok

    def error(self, message: str, tok: Optional[Token] = None) -> HeaderParseError:
        tok = tok if tok is not None else self.peek()
        if tok is None:
            lines = self.text.split("\n")
            return HeaderParseError(
                message, self.path, line=len(lines), column=len(lines[-1]) + 1, token="<EOF>"
            )
        return HeaderParseError(message, self.path, tok.lineno, tok.column, tok.value)

    def element(self, shape: ShapeType, name: str, **properties) -> Element:
        return Element.create(shape, name, MODEL_PART=self.model_part, **properties)

    def annotations(self, doc: Optional[DocToken]) -> dict:
        if doc is None:
            return {}
        try:
            return dict(extract_annotations(parse_doc_comment(doc.text)))
        except AnnotationError as e:
            raise AnnotationError(e.tag, f"{self.path}:{doc.lineno}: {e.args[0]}") from None

    ## Grammar

    def parse(self) -> SourceUnit:
        package = self.element(ShapeType.PACKAGE, package_name(self.path))
        self.declarations(package, [package.name], nested=False)
        if any(e.shape == ShapeType.CLASS for e in package.walk()):
            self.unit.packages.append(package)
        return self.unit

    def declarations(self, container: Element, scope: List[str], nested: bool) -> None:
        while True:
            tok = self.peek()
            if tok is None:
                if nested:
                    raise self.error("missing '}' at end of namespace")
                return
            if tok.type == "PREPROC" or tok.value == ";":
                self.pos += 1
            elif tok.value == "}" and nested:
                self.pos += 1
                return
            elif tok.type == "ID" and tok.value == "namespace":
                self.namespace(container, scope)
            elif tok.type == "ID" and tok.value in ("class", "struct"):
                self.class_declaration(container, scope)
            else:
                raise self.error("unsupported declaration", tok)

    def namespace(self, container: Element, scope: List[str]) -> None:
        self.expect("namespace")
        name = self.expect_id("namespace name").value
        self.expect("{")
        package = next(
            (
                c
                for c in container.children
                if c.shape == ShapeType.PACKAGE and c.name == name
            ),
            None,
        )
        if package is None:
            package = container.add(self.element(ShapeType.PACKAGE, name))
        self.declarations(package, scope + [name], nested=True)

    def class_declaration(self, container: Element, scope: List[str]) -> None:
        start = self.next()
        default_visibility = "private" if start.value == "class" else "public"
        name_tok = self.expect_id("class name")
        name = name_tok.value
        if self.at("final"):
            self.pos += 1
        if self.at(";"):
            # forward declaration
            self.pos += 1
            return

        bases = []
        if self.at(":"):
            self.pos += 1
            bases = self.base_list()
        self.expect("{")

        qualified_name = "::".join(scope + [name])
        if any(c.qualified_name == qualified_name for c in self.unit.classes):
            raise NameCollisionError(qualified_name)

        properties = self.annotations(start.doc)
        if bases:
            properties[EXTENDS] = ", ".join(bases)
        node = self.element(ShapeType.CLASS, name, **properties)
        span = ClassSpan(
            name=name,
            qualified_name=qualified_name,
            start=start.lexpos,
            end=start.lexpos,
            line=start.lineno,
            doc=start.doc,
        )

        visibility = default_visibility
        pure = []
        while not self.at("}"):
            tok = self.peek()
            if tok is None:
                raise self.error(f"missing '}}' at end of class {name}")
            if tok.value in ACCESS_SPECIFIERS and self.at(":", 1):
                visibility = tok.value
                self.pos += 2
            elif tok.type == "PREPROC" or tok.value == ";":
                self.pos += 1
            elif tok.value in UNSUPPORTED or tok.value in ("class", "struct"):
                raise self.error("unsupported member declaration", tok)
            else:
                pure.extend(self.member(node, span, visibility))
        self.expect("}")
        end = self.expect(";")
        span.end = end.end

        attributes = [c for c in node.children if c.shape == ShapeType.ATTRIBUTE]
        if pure and all(pure) and not attributes:
            node.properties[INTERFACE] = ""
        container.add(node)
        self.unit.classes.append(span)
        log.debug(f"Parsed class {qualified_name} ({len(node.children)} members)")

    def base_list(self) -> List[str]:
        bases = []
        while True:
            while self.peek() is not None and self.peek().value in ACCESS_SPECIFIERS + ("virtual",):
                self.pos += 1
            start, end = self.type_span()
            bases.append(self.spelling(start, end))
            if self.at(","):
                self.pos += 1
                continue
            return bases

    def member(self, node: Element, span: ClassSpan, visibility: str) -> List[bool]:
        """Parse one member declaration; returns a purity flag per ordinary method."""
        first = self.peek()
        is_static = False
        while self.peek() is not None and self.peek().value in METHOD_SPECIFIERS:
            is_static = is_static or self.peek().value == "static"
            self.pos += 1

        class_name = node.name
        if self.at("~"):
            self.pos += 1
            tok = self.expect_id("destructor name")
            if tok.value != class_name:
                raise self.error("destructor name does not match class", tok)
            return self.operation(node, span, first, "~" + class_name, visibility, None)
        if self.at(class_name) and self.at("(", 1):
            self.pos += 1
            return self.operation(node, span, first, class_name, visibility, None)

        type_start, type_end = self.type_span()
        type_spelling = self.spelling(type_start, type_end)
        name_tok = self.peek()
        if name_tok is not None and name_tok.value == "operator":
            raise self.error("operator overloading is outside the supported subset", name_tok)
        name_tok = self.expect_id("member name")
        if self.at("("):
            return self.operation(node, span, first, name_tok.value, visibility, type_spelling)
        if is_static:
            raise self.error("static data members are outside the supported subset", first)
        self.attributes(node, span, first, name_tok, visibility, type_spelling)
        return []

    def operation(self, node, span, first, name, visibility, return_type) -> List[bool]:
        properties = self.annotations(first.doc)
        properties[VISIBILITY] = visibility
        if return_type is not None:
            properties[RETURN_TYPE] = return_type
        op = self.element(ShapeType.OPERATION, name, **properties)
        for param in self.parameters():
            op.add(param)

        is_pure = False
        while True:
            if self.peek() is not None and self.peek().value in ("const", "override", "final", "volatile"):
                self.pos += 1
            elif self.at("noexcept"):
                self.pos += 1
                if self.at("("):
                    self.skip_balanced("(", ")")
            elif self.at("="):
                self.pos += 1
                tok = self.next()
                if tok.value == "0":
                    is_pure = True
                elif tok.value not in ("default", "delete"):
                    raise self.error("unsupported method initializer", tok)
            else:
                break

        if self.at(":"):
            # constructor initializer list
            while not self.at("{"):
                if self.peek() is None:
                    raise self.error("missing constructor body")
                self.pos += 1
        if self.at("{"):
            end = self.skip_balanced("{", "}")
            if self.at(";"):
                end = self.next()
        else:
            end = self.expect(";")

        node.add(op)
        span.members.append(MemberSpan(name, first.lexpos, end.end, first.lineno, first.doc))
        return [is_pure] if return_type is not None else []

    def parameters(self) -> List[Element]:
        self.expect("(")
        params = []
        if self.at("void") and self.at(")", 1):
            self.pos += 1
        while not self.at(")"):
            if params:
                self.expect(",")
            start, end = self.type_span()
            name = f"arg{len(params)}"
            if self.peek() is not None and self.peek().type == "ID":
                name = self.next().value
            if self.at("["):
                raise self.error("array parameters are outside the supported subset")
            if self.at("="):
                self.skip_initializer(stop=(",", ")"))
            params.append(
                self.element(ShapeType.PARAMETER, name, **{TYPE: self.spelling(start, end)})
            )
        self.expect(")")
        return params

    def attributes(self, node, span, first, name_tok, visibility, type_spelling) -> None:
        properties = self.annotations(first.doc)
        names = [name_tok]
        while True:
            if self.at("["):
                raise self.error("array members are outside the supported subset")
            if self.at("=") or self.at("{"):
                self.skip_initializer(stop=(",", ";"))
            if self.at(","):
                self.pos += 1
                names.append(self.expect_id("member name"))
                continue
            end = self.expect(";")
            break
        for tok in names:
            attribute = self.element(
                ShapeType.ATTRIBUTE,
                tok.value,
                **{**properties, TYPE: type_spelling, VISIBILITY: visibility},
            )
            node.add(attribute)
            span.members.append(
                MemberSpan(tok.value, first.lexpos, end.end, first.lineno, first.doc, len(names))
            )

    ## Pieces

    def type_span(self):
        """Consume a type expression; returns its first and last tokens."""
        start = self.peek()
        if start is None:
            raise self.error("expected a type")
        while self.peek() is not None and self.peek().value in CV + ("typename",):
            self.pos += 1
        tok = self.peek()
        if tok is not None and tok.value in PRIMITIVE_WORDS:
            while self.peek() is not None and self.peek().value in PRIMITIVE_WORDS:
                last = self.next()
        else:
            if self.at("::"):
                self.pos += 1
            last = self.expect_id("type name")
            while self.at("::"):
                self.pos += 1
                last = self.expect_id("type name")
            if self.at("<"):
                last = self.skip_balanced("<", ">")
        while self.peek() is not None and self.peek().value in CV + ("*", "&"):
            last = self.next()
        return start, last

    def spelling(self, start: Token, end: Token) -> str:
        return " ".join(self.text[start.lexpos : end.end].split())

    def skip_balanced(self, opening: str, closing: str) -> Token:
        self.expect(opening)
        depth = 1
        while True:
            tok = self.next()
            if tok.value == opening and tok.type != "STRING":
                depth += 1
            elif tok.value == closing and tok.type != "STRING":
                depth -= 1
                if depth == 0:
                    return tok

    def skip_initializer(self, stop) -> None:
        depth = 0
        while True:
            tok = self.peek()
            if tok is None:
                raise self.error("unterminated initializer")
            if depth == 0 and tok.value in stop:
                return
            if tok.value in "({[" and tok.type not in ("STRING", "CHAR"):
                depth += 1
            elif tok.value in ")}]" and tok.type not in ("STRING", "CHAR"):
                depth -= 1
            self.pos += 1


def parse_source(text: str, path: str = "", model_part: str = PROJECT_PART) -> SourceUnit:
    return HeaderParser(text, path, model_part).parse()


def parse_header(text: str, path: str = "", model_part: str = PROJECT_PART) -> List[Element]:
    """Packages (one per header) holding the parsed classes; empty when none."""
    return parse_source(text, path, model_part).packages
