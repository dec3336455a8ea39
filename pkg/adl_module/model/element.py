"""Read-write class model: packages, class nodes and members.

Every element carries an open-ended, string-keyed property map. Built-in keys
(``NAME``, ``SHAPE_TYPE``, ...) and the ADL extension keys share one flat
namespace.
"""
import json
import re
from dataclasses import dataclass, field
from enum import Enum
from typing import Dict, Iterator, List, Optional, Sequence

from adl_module.errors import (
    ImmutablePropertyError,
    ModelLookupError,
    NameCollisionError,
    PropertyValidationError,
    ShapeError,
)

_KEY_RE = re.compile(r"[A-Z][A-Z0-9_]*\Z")

NAME = "NAME"
TYPE = "TYPE"
SHAPE_TYPE = "SHAPE_TYPE"
MODEL_PART = "MODEL_PART"
RETURN_TYPE = "RETURN_TYPE"
VISIBILITY = "VISIBILITY"
INTERFACE = "INTERFACE"
EXTENDS = "EXTENDS"
ADLENABLED = "ADLENABLED"
ADLFOLDER = "ADLFOLDER"
ADLINTERFACE = "ADLINTERFACE"
ADLPERSISTENT = "ADLPERSISTENT"
ADLREADONLY = "ADLREADONLY"

FLAG_KEYS = frozenset([ADLPERSISTENT, ADLREADONLY])
IMMUTABLE_KEYS = frozenset([NAME, SHAPE_TYPE])

PROJECT_PART = "Model"
IMPORTED_PART = "Imported"


def check_key(key: str) -> str:
    if not isinstance(key, str) or not _KEY_RE.match(key):
        raise ValueError(f"Invalid property key {key!r}")
    return key


class ShapeType(str, Enum):
    PACKAGE = "PACKAGE"
    DIAGRAM = "DIAGRAM"
    CLASS = "CLASS"
    OPERATION = "OPERATION"
    ATTRIBUTE = "ATTRIBUTE"
    PARAMETER = "PARAMETER"

    def __str__(self):
        return self.value


MEMBER_SHAPES = frozenset([ShapeType.OPERATION, ShapeType.ATTRIBUTE])

_LEGAL_CHILDREN = {
    ShapeType.PACKAGE: frozenset([ShapeType.PACKAGE, ShapeType.DIAGRAM, ShapeType.CLASS]),
    ShapeType.CLASS: MEMBER_SHAPES,
    ShapeType.OPERATION: frozenset([ShapeType.PARAMETER]),
    ShapeType.DIAGRAM: frozenset(),
    ShapeType.ATTRIBUTE: frozenset(),
    ShapeType.PARAMETER: frozenset(),
}

_REQUIRED = {
    ShapeType.CLASS: (NAME,),
    ShapeType.OPERATION: (NAME,),
    ShapeType.ATTRIBUTE: (NAME, TYPE),
    ShapeType.PARAMETER: (NAME, TYPE),
}


@dataclass(eq=False)
class Element:
    """One model node.

    ``id`` and ``parent`` are assigned when the element is added to a
    :class:`Model`; a freshly built element tree carries neither.
    """

    properties: Dict[str, str]
    children: List["Element"] = field(default_factory=list)
    # DIAGRAM only: ids of the referenced classes, not owned
    references: List[str] = field(default_factory=list)
    id: Optional[str] = None
    parent: Optional["Element"] = field(default=None, repr=False)

    @classmethod
    def create(cls, shape: ShapeType, name: Optional[str] = None, **properties) -> "Element":
        props = {SHAPE_TYPE: ShapeType(shape).value}
        if name is not None:
            props[NAME] = name
        for key, value in properties.items():
            props[check_key(key)] = value
        return cls(properties=props)

    @property
    def shape(self) -> ShapeType:
        return ShapeType(self.properties[SHAPE_TYPE])

    @property
    def name(self) -> Optional[str]:
        return self.properties.get(NAME)

    def has(self, key: str) -> bool:
        return key in self.properties

    def get(self, key: str) -> Optional[str]:
        return self.properties.get(key)

    def add(self, child: "Element") -> "Element":
        if child.shape not in _LEGAL_CHILDREN[self.shape]:
            raise ShapeError(f"{self.shape} cannot contain {child.shape}")
        self.children.append(child)
        child.parent = self
        return child

    def walk(self) -> Iterator["Element"]:
        yield self
        for child in self.children:
            yield from child.walk()

    def validate(self) -> None:
        for key in _REQUIRED.get(self.shape, ()):
            if key not in self.properties:
                raise ShapeError(f"{self.shape} element is missing property {key}")


class Model:
    """Ordered package roots plus a qualified-name index.

    Construction is single-writer; once built the model is only read.
    """

    def __init__(self, schemas=None):
        self.roots: List[Element] = []
        self.index: Dict[str, str] = {}
        self.schemas = schemas
        self._elements: Dict[str, Element] = {}
        self._counter = 0

    def __len__(self):
        return len(self._elements)

    def __contains__(self, element_id):
        return element_id in self._elements

    def __iter__(self) -> Iterator[Element]:
        for root in self.roots:
            yield from root.walk()

    ## Construction

    def add_package(self, package: Element, parent: Optional[Element] = None) -> Element:
        """Attach a package tree; packages with an existing qualified name merge."""
        if package.shape != ShapeType.PACKAGE:
            raise ShapeError(f"Expected a PACKAGE, got {package.shape}")
        siblings = parent.children if parent is not None else self.roots
        existing = next(
            (
                e
                for e in siblings
                if e.shape == ShapeType.PACKAGE and e.name == package.name
            ),
            None,
        )
        if existing is None:
            children, package.children = package.children, []
            if parent is None:
                self.roots.append(package)
                package.parent = None
            else:
                parent.add(package)
            self._register(package)
            target = package
        else:
            children = package.children
            for key, value in package.properties.items():
                existing.properties.setdefault(key, value)
            target = existing
        for child in children:
            if child.shape == ShapeType.PACKAGE:
                self.add_package(child, target)
            else:
                self._attach(target, child)
        return target

    def add_element(self, parent_id: str, element: Element) -> Element:
        parent = self.element(parent_id)
        return self._attach(parent, element)

    def _attach(self, parent: Element, element: Element) -> Element:
        qualified_name = None
        if element.shape == ShapeType.CLASS:
            qualified_name = self._qualify(parent, element.name)
            if qualified_name in self.index:
                raise NameCollisionError(qualified_name)
        for node in element.walk():
            node.validate()
        parent.add(element)
        for node in element.walk():
            self._register(node)
        if qualified_name is not None:
            self.index[qualified_name] = element.id
        return element

    def _register(self, element: Element) -> None:
        self._counter += 1
        element.id = f"e{self._counter}"
        self._elements[element.id] = element
        if element.shape == ShapeType.PACKAGE:
            self.index.setdefault(self.qualified_name(element.id), element.id)
        for child in element.children:
            child.parent = element

    def _qualify(self, parent: Optional[Element], name: str) -> str:
        segments = [name]
        while parent is not None:
            if parent.shape in (ShapeType.PACKAGE, ShapeType.CLASS):
                segments.append(parent.name)
            parent = parent.parent
        return "::".join(reversed(segments))

    ## Queries

    def element(self, element_id: str) -> Element:
        try:
            return self._elements[element_id]
        except KeyError:
            raise ModelLookupError(element_id) from None

    def find(self, qualified_name: str) -> Element:
        try:
            return self._elements[self.index[qualified_name]]
        except KeyError:
            raise ModelLookupError(qualified_name) from None

    def qualified_name(self, element_id: str) -> str:
        element = self.element(element_id)
        return self._qualify(element.parent, element.name)

    def classes(self) -> List[Element]:
        return [e for e in self if e.shape == ShapeType.CLASS]

    def get_property(self, element_id: str, key: str) -> Optional[str]:
        return self.element(element_id).properties.get(key)

    def has_property(self, element_id: str, key: str) -> bool:
        return key in self.element(element_id).properties

    def put_property(self, element_id: str, key: str, value: Optional[str]) -> "Model":
        """Set ``key`` to ``value``, or remove it when ``value`` is None.

        Flag keys store the empty string; only their presence is meaningful.
        """
        element = self.element(element_id)
        check_key(key)
        if key in IMMUTABLE_KEYS:
            raise ImmutablePropertyError(f"Property {key} cannot change after construction")
        if value is None:
            element.properties.pop(key, None)
            return self
        if key in FLAG_KEYS:
            value = ""
        elif self.schemas is not None:
            violation = self.schemas.validate_value(element.shape, key, value)
            if violation is not None:
                raise PropertyValidationError(key, value, violation.allowed)
        element.properties[key] = value
        return self

    def members(self, class_id: str) -> List[Element]:
        element = self.element(class_id)
        if element.shape != ShapeType.CLASS:
            raise ShapeError(f"members() expects a CLASS, got {element.shape}")
        return [c for c in element.children if c.shape in MEMBER_SHAPES]

    def parameters(self, operation_id: str) -> List[Element]:
        element = self.element(operation_id)
        if element.shape != ShapeType.OPERATION:
            raise ShapeError(f"parameters() expects an OPERATION, got {element.shape}")
        return list(element.children)

    def is_project_element(self, element_id: str) -> bool:
        return self.element(element_id).properties.get(MODEL_PART) == PROJECT_PART

    def containing_package(self, element_id: str) -> Optional[Element]:
        parent = self.element(element_id).parent
        while parent is not None and parent.shape != ShapeType.PACKAGE:
            parent = parent.parent
        return parent

    ## Dump / serialization

    def dump(self, elements: Optional[Sequence[Element]] = None) -> str:
        """One line per element: indent, shape, name, sorted properties."""
        lines = []
        roots = self.roots if elements is None else elements

        def _dump(element, depth):
            props = " ".join(
                f"{key}={_quote(value)}"
                for key, value in sorted(element.properties.items())
                if key not in (NAME, SHAPE_TYPE)
            )
            line = f"{'  ' * depth}{element.shape} {element.name or ''}".rstrip()
            lines.append(f"{line} {props}".rstrip())
            for child in element.children:
                _dump(child, depth + 1)

        for root in roots:
            _dump(root, 0)
        return "\n".join(lines) + ("\n" if lines else "")

    def to_dict(self) -> dict:
        def _to_dict(element):
            out = {"properties": dict(element.properties)}
            if element.children:
                out["children"] = [_to_dict(c) for c in element.children]
            if element.references:
                out["references"] = [self.qualified_name(r) for r in element.references]
            return out

        return {"roots": [_to_dict(root) for root in self.roots]}

    @classmethod
    def from_dict(cls, data: dict, schemas=None) -> "Model":
        def _from_dict(item):
            element = Element(properties=dict(item["properties"]))
            element.children = [_from_dict(c)[0] for c in item.get("children", [])]
            return element, item.get("references", [])

        model = cls(schemas=schemas)
        pending = []
        for root_data in data.get("roots", []):
            root, _ = _from_dict(root_data)
            model.add_package(root)

        # second pass: re-resolve diagram references by qualified name
        def _collect(element, item):
            if item.get("references"):
                pending.append((element, item["references"]))
            for child, child_item in zip(element.children, item.get("children", [])):
                _collect(child, child_item)

        for root, root_data in zip(model.roots, data.get("roots", [])):
            _collect(root, root_data)
        for element, names in pending:
            element.references = [model.index[n] for n in names]
        return model


def _quote(value: str) -> str:
    if value and not re.search(r"[\s\"=]", value):
        return value
    return json.dumps(value)
