"""Batch subcommands.

Each command takes the hydra config, the inspector config loaded at startup
and the effective type map, and returns the process status: 0 on success,
1 when some classes or files failed, 2 when there was nothing to do.
"""
import json
import logging
from pathlib import Path
from typing import List, Optional, Sequence, Tuple

from hydra.utils import to_absolute_path
from joblib import Parallel, delayed
from omegaconf import OmegaConf

from adl_module.adl.generator import (
    ADLOutVisitor,
    NO_OPEN_PROJECT,
    NO_SELECTION,
    RELATIVE_FOLDER,
    is_relative_folder,
    load_diagram,
    resolve_options,
    select_classes,
)
from adl_module.adl.reader import Severity, check_unit, parse_adl
from adl_module.errors import (
    AdlModuleError,
    AdlParseError,
    AnnotationError,
    HeaderParseError,
    ModelLookupError,
    NameCollisionError,
    PropertyValidationError,
    SelectionError,
)
from adl_module.frontend.annotate import inject_annotation
from adl_module.frontend.doc_comment import TAG_FOR_KEY
from adl_module.frontend.parser import parse_header, parse_source
from adl_module.inspector.schema import InspectorConfig
from adl_module.model.element import (
    ADLFOLDER,
    ADLINTERFACE,
    FLAG_KEYS,
    IMPORTED_PART,
    INTERFACE,
    PROJECT_PART,
    Model,
    ShapeType,
)
from adl_module.utils.files import ADL_SUFFIXES, HEADER_SUFFIXES, find_files, read_text, write_text
from adl_module.utils.registry import register_command
from adl_module.utils.typing import TypeMap

log = logging.getLogger(__name__)

SUCCESS, FAILURE, NOTHING_TO_DO = 0, 1, 2


def _paths(entries) -> List[str]:
    return [to_absolute_path(str(p)) for p in (entries or [])]


def _parse_file(path: Path, model_part: str):
    try:
        return parse_header(read_text(path), str(path), model_part), None
    except (HeaderParseError, AnnotationError, NameCollisionError, UnicodeDecodeError) as e:
        return None, e


def build_model(
    inputs: Sequence[str],
    imports: Sequence[str] = (),
    config: Optional[InspectorConfig] = None,
    n_jobs: int = 1,
) -> Tuple[Model, List[Tuple[Path, Exception]]]:
    """Parse project and imported headers into one model.

    Raises ``SelectionError("No open project")`` when ``inputs`` holds no
    header at all. Files that fail to parse are returned with their error.
    """
    project = find_files(inputs, HEADER_SUFFIXES)
    if not project:
        raise SelectionError(NO_OPEN_PROJECT)
    jobs = [(p, IMPORTED_PART) for p in find_files(imports, HEADER_SUFFIXES)]
    jobs += [(p, PROJECT_PART) for p in project]

    # results come back in submission order, so the model is deterministic
    results = Parallel(n_jobs=n_jobs)(delayed(_parse_file)(path, part) for path, part in jobs)

    model = Model(schemas=config.schemas if config is not None else None)
    failures = []
    for (path, _), (packages, error) in zip(jobs, results):
        if error is None:
            try:
                for package in packages:
                    model.add_package(package)
            except NameCollisionError as e:
                error = e
        if error is not None:
            log.error(f"{path}: {error}")
            failures.append((path, error))
    log.info(f"Parsed {len(jobs) - len(failures)}/{len(jobs)} headers, {len(model.classes())} classes")
    return model, failures


def _load_diagram(cfg, model: Model):
    return load_diagram(model, to_absolute_path(cfg.diagram)) if cfg.get("diagram") else None


@register_command
def generate(cfg, config: InspectorConfig, type_map: TypeMap) -> int:
    try:
        model, failures = build_model(_paths(cfg.inputs), _paths(cfg.imports), config, cfg.n_jobs)
        diagram = _load_diagram(cfg, model)
        selected = select_classes(model, list(cfg.select), diagram)
    except SelectionError as e:
        log.error(str(e))
        return NOTHING_TO_DO

    log.info(f"Stage : Generate ({len(selected)} classes)")
    visitor = ADLOutVisitor(model, config, type_map, cfg.library_namespaces)
    for node in selected:
        visitor.visit(node)
    visitor.write(to_absolute_path(cfg.out), progress=cfg.progress)
    return FAILURE if failures or visitor.failures else SUCCESS


@register_command
def check(cfg, config: InspectorConfig, type_map: TypeMap) -> int:
    files = find_files(_paths(cfg.inputs), ADL_SUFFIXES)
    if not files:
        log.error(NO_OPEN_PROJECT)
        return NOTHING_TO_DO

    allowed_kinds = None
    if ADLINTERFACE in config.schemas:
        allowed_kinds = config.schemas[ADLINTERFACE].allowed
    errors = 0
    for path in files:
        try:
            unit = parse_adl(read_text(path))
        except (AdlParseError, UnicodeDecodeError) as e:
            line = getattr(e, "line", 1)
            log.error(f"{path}:{line}: {Severity.ERROR}: {getattr(e, 'message', e)}")
            errors += 1
            continue
        siblings = [p.name for p in path.parent.iterdir() if p.suffix in ADL_SUFFIXES]
        for diagnostic in check_unit(unit, siblings, allowed_kinds):
            if diagnostic.severity == Severity.ERROR:
                errors += 1
                log.error(diagnostic.render(str(path)))
            else:
                log.warning(diagnostic.render(str(path)))
    log.info(f"Checked {len(files)} files, {errors} errors")
    return FAILURE if errors else SUCCESS


def _requested_changes(cfg) -> List[Tuple[str, Optional[str]]]:
    changes = []
    for key, value in OmegaConf.to_container(cfg.annotate.set or {}).items():
        changes.append((key, "" if value is None or key in FLAG_KEYS else str(value)))
    for key in cfg.annotate.unset or []:
        changes.append((key, None))
    return changes


@register_command
def annotate(cfg, config: InspectorConfig, type_map: TypeMap) -> int:
    class_name = cfg.annotate.class_name
    headers = find_files(_paths(cfg.inputs), HEADER_SUFFIXES)
    if not headers:
        log.error(NO_OPEN_PROJECT)
        return NOTHING_TO_DO
    changes = _requested_changes(cfg)
    if not class_name or not changes:
        log.error(NO_SELECTION)
        return NOTHING_TO_DO

    member = cfg.annotate.get("member")
    backup = cfg.annotate.get("backup", False)
    shape = ShapeType.CLASS if member is None else ShapeType.ATTRIBUTE
    for key, value in changes:
        if key not in TAG_FOR_KEY:
            log.error(f"{key} cannot be set through an annotation")
            return FAILURE
        violation = None if value is None else config.schemas.validate_value(shape, key, value)
        if violation is not None:
            log.error(str(PropertyValidationError(key, value, violation.allowed)))
            return FAILURE
        if key == ADLFOLDER and value is not None and not is_relative_folder(value):
            log.error(str(PropertyValidationError(key, value, expected=RELATIVE_FOLDER)))
            return FAILURE

    touched = 0
    for path in headers:
        text = read_text(path)
        try:
            classes = parse_source(text, str(path)).classes
            if not any(class_name in (c.name, c.qualified_name) for c in classes):
                continue
            updated = text
            for key, value in changes:
                updated = inject_annotation(updated, class_name, key, value, member=member, path=str(path))
        except (HeaderParseError, AnnotationError, ModelLookupError) as e:
            log.error(f"{path}: {e}")
            return FAILURE
        touched += 1
        if updated != text:
            if backup:
                write_text(path.with_name(path.name + ".bak"), text)
            write_text(path, updated)
            log.info(f"Annotated class {class_name} in {path}")
        else:
            log.info(f"{path} already up to date")
    if not touched:
        log.error(NO_SELECTION)
        return NOTHING_TO_DO
    return SUCCESS


def _options_dict(options) -> dict:
    return {"mode": str(options.mode), "kind": options.kind, "folder": options.folder}


@register_command
def inspect(cfg, config: InspectorConfig, type_map: TypeMap) -> int:
    try:
        model, failures = build_model(_paths(cfg.inputs), _paths(cfg.imports), config, cfg.n_jobs)
        diagram = _load_diagram(cfg, model)
        selected = select_classes(model, list(cfg.select), diagram)
    except SelectionError as e:
        log.error(str(e))
        return NOTHING_TO_DO

    resolved = {}
    for node in selected:
        try:
            options = resolve_options(node, config.schemas, config.defaults)
            resolved[model.qualified_name(node.id)] = (node, options)
        except AdlModuleError as e:
            log.error(f"{model.qualified_name(node.id)}: {e}")
            failures.append((node, e))

    if cfg.inspect.format == "json":
        payload = {
            "model": model.to_dict(),
            "classes": {
                name: {"kind": "interface" if node.has(INTERFACE) else "class", **_options_dict(options)}
                for name, (node, options) in resolved.items()
            },
        }
        print(json.dumps(payload, indent=2))
    else:
        print(model.dump(selected if diagram is not None else None), end="")
        for name, (node, options) in resolved.items():
            kind = "interface" if node.has(INTERFACE) else "class"
            print(f"{name} ({kind}): " + " ".join(f"{k}={v}" for k, v in _options_dict(options).items()))
    return FAILURE if failures else SUCCESS
