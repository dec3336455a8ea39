"""Lowering of project classes to ADL units and writing of ``.adl`` files."""
import logging
import os
import re
import tempfile
from dataclasses import dataclass, field
from pathlib import Path, PurePosixPath, PureWindowsPath
from typing import Iterable, List, Optional, Sequence, Tuple

from tqdm import tqdm

from adl_module.adl.unit import (
    AdlMode,
    AdlUnit,
    AttributeDecl,
    OperationDecl,
    ParamDecl,
    render_unit,
)
from adl_module.errors import (
    AdlWriteError,
    GenerationError,
    PropertyValidationError,
    SelectionError,
    ShapeError,
    UnsupportedTypeError,
)
from adl_module.frontend.types import DEFAULT_TYPE_MAP, TypeForm, normalize_type
from adl_module.inspector.schema import (
    GeneratorDefaults,
    HeaderFields,
    InspectorConfig,
    SchemaSet,
)
from adl_module.model.element import (
    ADLENABLED,
    ADLFOLDER,
    ADLINTERFACE,
    ADLPERSISTENT,
    ADLREADONLY,
    RETURN_TYPE,
    TYPE,
    VISIBILITY,
    Element,
    Model,
    ShapeType,
)
from adl_module.model.visitor import ProjectVisitor
from adl_module.utils.files import read_text
from adl_module.utils.typing import PathLike, TypeMap

log = logging.getLogger(__name__)

NO_OPEN_PROJECT = "No open project"
NO_SELECTION = "No selection was made."
NO_OPEN_DIAGRAM = "No open diagram"
RELATIVE_FOLDER = "a relative path below the output directory"

LIBRARY_NAMESPACES = ("std",)

# used when neither the element nor the inspector config says otherwise
_BUILTIN_DEFAULTS = {ADLENABLED: AdlMode.ADL.value, ADLINTERFACE: "interface", ADLFOLDER: ""}


@dataclass(frozen=True)
class GenOptions:
    mode: AdlMode = AdlMode.ADL
    kind: str = "interface"
    folder: str = ""
    header: HeaderFields = field(default_factory=HeaderFields)


## Selection


def _glob_to_regex(pattern: str) -> str:
    out = []
    i = 0
    while i < len(pattern):
        if pattern.startswith("**", i):
            out.append(".*")
            i += 2
        elif pattern[i] == "*":
            out.append("(?:(?!::).)*")
            i += 1
        elif pattern[i] == "?":
            out.append("[^:]")
            i += 1
        else:
            out.append(re.escape(pattern[i]))
            i += 1
    return "".join(out)


def selector_matches(pattern: str, qualified_name: str) -> bool:
    """``*`` stays inside one ``::`` segment, ``**`` crosses segments.

    A pattern without ``::`` is matched against the unqualified name.
    """
    target = qualified_name if "::" in pattern else qualified_name.split("::")[-1]
    return re.fullmatch(_glob_to_regex(pattern), target) is not None


def select_classes(
    model: Model, selectors: Sequence[str], diagram: Optional[Element] = None
) -> List[Element]:
    if not model.roots:
        raise SelectionError(NO_OPEN_PROJECT)
    candidates = model.classes()
    if diagram is not None:
        referenced = set(diagram.references)
        candidates = [c for c in candidates if c.id in referenced]
    selected = [
        c
        for c in candidates
        if model.is_project_element(c.id)
        and any(selector_matches(s, model.qualified_name(c.id)) for s in selectors)
    ]
    if not selected:
        raise SelectionError(NO_SELECTION)
    return selected


def load_diagram(model: Model, path: PathLike) -> Element:
    """Attach a diagram listing one qualified class name (or glob) per line."""
    path = Path(path)
    if not path.is_file():
        raise SelectionError(NO_OPEN_DIAGRAM)
    if not model.roots:
        raise SelectionError(NO_OPEN_PROJECT)

    references = []
    for line in read_text(path).splitlines():
        pattern = line.split("#", 1)[0].strip()
        if not pattern:
            continue
        matched = [
            c.id
            for c in model.classes()
            if selector_matches(pattern, model.qualified_name(c.id))
        ]
        if not matched:
            log.warning(f"Diagram {path.name}: no class matches {pattern!r}")
        references.extend(m for m in matched if m not in references)

    owner = model.containing_package(references[0]) if references else model.roots[0]
    diagram = model.add_element(owner.id, Element.create(ShapeType.DIAGRAM, path.stem))
    diagram.references = references
    log.debug(f"Loaded diagram {path.stem} with {len(references)} classes")
    return diagram


## Lowering


def resolve_options(
    element: Element, schemas: SchemaSet, defaults: Optional[GeneratorDefaults] = None
) -> GenOptions:
    """Element properties, then inspector defaults, then built-in defaults."""
    if element.shape != ShapeType.CLASS:
        raise ShapeError(f"resolve_options expects a CLASS, got {element.shape}")
    values = {}
    for key, builtin in _BUILTIN_DEFAULTS.items():
        value = element.get(key)
        if value is None:
            value = schemas.default(key)
        if value is None:
            value = builtin
        violation = schemas.validate_value(ShapeType.CLASS, key, value)
        if violation is not None:
            raise PropertyValidationError(key, value, violation.allowed)
        values[key] = value

    try:
        mode = AdlMode(values[ADLENABLED])
    except ValueError:
        raise PropertyValidationError(
            ADLENABLED, values[ADLENABLED], [m.value for m in AdlMode]
        ) from None
    if not is_relative_folder(values[ADLFOLDER]):
        raise PropertyValidationError(
            ADLFOLDER, values[ADLFOLDER], expected=RELATIVE_FOLDER
        )
    header = defaults.header if defaults is not None else HeaderFields()
    return GenOptions(mode, values[ADLINTERFACE], values[ADLFOLDER], header)


def is_relative_folder(folder: str) -> bool:
    """True when ``folder`` stays below the directory it is joined to."""
    if PureWindowsPath(folder).drive:
        return False
    path = PurePosixPath(folder.replace("\\", "/"))
    return not path.is_absolute() and ".." not in path.parts


def _adl_type(spelling: str, member: Element, type_map: TypeMap) -> str:
    try:
        return normalize_type(spelling, type_map).adl_spelling
    except UnsupportedTypeError as e:
        raise e.for_member(member.name) from None


def lower_attribute(
    member: Element, type_map: Optional[TypeMap] = None, inherited: Iterable[str] = ()
) -> AttributeDecl:
    """``inherited`` holds flag keys set on the owning class."""
    if member.shape != ShapeType.ATTRIBUTE:
        raise ShapeError(f"lower_attribute expects an ATTRIBUTE, got {member.shape}")
    type_map = DEFAULT_TYPE_MAP if type_map is None else type_map
    inherited = set(inherited)
    return AttributeDecl(
        visibility=member.get(VISIBILITY) or "public",
        type_spelling=_adl_type(member.get(TYPE), member, type_map),
        name=member.name,
        persistent=member.has(ADLPERSISTENT) or ADLPERSISTENT in inherited,
        readonly=member.has(ADLREADONLY) or ADLREADONLY in inherited,
    )


def lower_operation(member: Element, type_map: Optional[TypeMap] = None) -> Optional[OperationDecl]:
    if member.shape != ShapeType.OPERATION:
        raise ShapeError(f"lower_operation expects an OPERATION, got {member.shape}")
    if not member.has(RETURN_TYPE):
        # constructors and destructors
        return None
    type_map = DEFAULT_TYPE_MAP if type_map is None else type_map
    params = tuple(
        ParamDecl(_adl_type(p.get(TYPE), member, type_map), p.name) for p in member.children
    )
    return OperationDecl(
        visibility=member.get(VISIBILITY) or "public",
        return_type=_adl_type(member.get(RETURN_TYPE), member, type_map),
        name=member.name,
        params=params,
    )


def _member_types(member: Element) -> List[str]:
    if member.shape == ShapeType.ATTRIBUTE:
        return [member.get(TYPE)]
    if not member.has(RETURN_TYPE):
        return []
    return [member.get(RETURN_TYPE)] + [p.get(TYPE) for p in member.children]


def collect_includes(
    element: Element,
    type_map: Optional[TypeMap] = None,
    library_namespaces: Sequence[str] = LIBRARY_NAMESPACES,
) -> List[str]:
    """``<Name>.adl`` for every class-like type the members refer to."""
    type_map = DEFAULT_TYPE_MAP if type_map is None else type_map
    includes = []
    for member in element.children:
        for spelling in _member_types(member):
            try:
                ref = normalize_type(spelling, type_map)
            except UnsupportedTypeError:
                # reported by lowering
                continue
            for t in ref.walk():
                if t.form != TypeForm.NAMED or t.name in type_map:
                    continue
                if t.name.lstrip(":").split("::")[0] in library_namespaces:
                    continue
                if t.unqualified_name == element.name:
                    continue
                include = f"{t.unqualified_name}.adl"
                if include not in includes:
                    includes.append(include)
    return includes


def generate_unit(
    element: Element,
    options: GenOptions,
    model: Model,
    type_map: Optional[TypeMap] = None,
    library_namespaces: Sequence[str] = LIBRARY_NAMESPACES,
) -> Optional[AdlUnit]:
    """The unit for one project class, or None when nothing is to be written."""
    if element.shape != ShapeType.CLASS:
        raise ShapeError(f"generate_unit expects a CLASS, got {element.shape}")
    if not model.is_project_element(element.id):
        log.debug(f"Skipping imported class {element.name}")
        return None
    if options.mode == AdlMode.EXTERNAL:
        log.debug(f"Skipping class {element.name}: described externally")
        return None
    if options.mode == AdlMode.ADLEXT:
        return AdlUnit(element.name, options.kind, options.header, extern_only=True)

    inherited = [k for k in (ADLPERSISTENT, ADLREADONLY) if element.has(k)]
    attributes, operations, failures = [], [], []
    for member in model.members(element.id):
        try:
            if member.shape == ShapeType.ATTRIBUTE:
                attributes.append(lower_attribute(member, type_map, inherited))
            else:
                operation = lower_operation(member, type_map)
                if operation is not None:
                    operations.append(operation)
        except UnsupportedTypeError as e:
            failures.append((member.name, e))
    if failures:
        raise GenerationError(element.name, failures)

    return AdlUnit(
        class_name=element.name,
        kind=options.kind,
        header=options.header,
        includes=collect_includes(element, type_map, library_namespaces),
        attributes=attributes,
        operations=operations,
    )


## Writing


def write_unit(unit: AdlUnit, out_root: PathLike, folder: str = "") -> Path:
    """Write ``<out_root>/<folder>/<ClassName>.adl``, replacing any old file."""
    log.info(f"ADL generation for class {unit.class_name}")
    if not is_relative_folder(folder):
        raise AdlWriteError(unit.class_name, ValueError(f"folder {folder!r} leaves {out_root}"))
    directory = Path(out_root) / folder if folder else Path(out_root)
    target = directory / f"{unit.class_name}.adl"
    tmp = None
    try:
        directory.mkdir(parents=True, exist_ok=True)
        fd, tmp = tempfile.mkstemp(prefix=f".{unit.class_name}.", suffix=".tmp", dir=directory)
        with os.fdopen(fd, "w", encoding="utf-8", newline="") as f:
            f.write(render_unit(unit))
        os.replace(tmp, target)
    except OSError as e:
        if tmp is not None and os.path.exists(tmp):
            os.unlink(tmp)
        raise AdlWriteError(unit.class_name, e) from e
    return target


class ADLOutVisitor(ProjectVisitor):
    """Generates one unit per visited project class.

    Results accumulate in ``units`` as (class element, options, unit) and
    per-class failures in ``failures``; visiting never raises for a single
    bad class.
    """

    def __init__(
        self,
        model: Model,
        config: InspectorConfig,
        type_map: Optional[TypeMap] = None,
        library_namespaces: Sequence[str] = LIBRARY_NAMESPACES,
    ):
        super().__init__(model)
        self.config = config
        self.type_map = DEFAULT_TYPE_MAP if type_map is None else type_map
        self.library_namespaces = tuple(library_namespaces)
        self.units: List[Tuple[Element, GenOptions, AdlUnit]] = []
        self.failures: List[Tuple[Element, Exception]] = []

    def visit_node(self, node: Element):
        if not self.model.is_project_element(node.id):
            return None
        try:
            options = resolve_options(node, self.config.schemas, self.config.defaults)
            unit = generate_unit(node, options, self.model, self.type_map, self.library_namespaces)
        except (GenerationError, PropertyValidationError) as e:
            log.error(f"{self.model.qualified_name(node.id)}: {e}")
            self.failures.append((node, e))
            return None
        if unit is not None:
            self.units.append((node, options, unit))
        return unit

    def write(self, out_root: PathLike, progress: bool = False) -> List[Path]:
        """Write every collected unit; write errors go to ``failures``."""
        units = self.units
        if progress:
            units = tqdm(units, desc="ADL", unit="class")
        written = []
        for node, options, unit in units:
            try:
                written.append(write_unit(unit, out_root, options.folder))
            except AdlWriteError as e:
                log.error(str(e))
                self.failures.append((node, e))
        return written
