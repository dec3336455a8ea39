"""Exceptions raised across the ADL module.

Library code raises these; only the command layer turns them into log lines
and exit statuses.
"""
from typing import Iterable, Optional, Sequence, Tuple


class AdlModuleError(Exception):
    """Base class of every error raised by ``adl_module``."""


class ModelLookupError(AdlModuleError, KeyError):
    def __init__(self, element_id: str):
        self.element_id = element_id
        super().__init__(f"Unknown element {element_id!r}")

    def __str__(self):
        return self.args[0]


class ShapeError(AdlModuleError):
    pass


class DispatchError(AdlModuleError):
    pass


class PropertyValidationError(AdlModuleError):
    def __init__(
        self,
        key: str,
        value: Optional[str],
        allowed: Sequence[str] = (),
        expected: Optional[str] = None,
    ):
        self.key = key
        self.value = value
        self.allowed = tuple(allowed)
        if expected is None:
            expected = "one of {" + ", ".join(self.allowed) + "}"
        super().__init__(f"Invalid value {value!r} for property {key}: expected {expected}")


class ImmutablePropertyError(AdlModuleError):
    pass


class NameCollisionError(AdlModuleError):
    def __init__(self, qualified_name: str):
        self.qualified_name = qualified_name
        super().__init__(f"Duplicate class name {qualified_name}")


class HeaderParseError(AdlModuleError):
    def __init__(self, message: str, path: str = "", line: int = 0, column: int = 0, token: str = ""):
        self.message = message
        self.path = path
        self.line = line
        self.column = column
        self.token = token
        super().__init__(f"{path}:{line}:{column}: {message} (at {token!r})")


class AnnotationError(AdlModuleError):
    def __init__(self, tag: str, message: str):
        self.tag = tag
        super().__init__(f"@{tag}: {message}")


class UnsupportedTypeError(AdlModuleError):
    def __init__(self, spelling: str, reason: str, member: Optional[str] = None):
        self.spelling = spelling
        self.reason = reason
        self.member = member
        where = f" of member {member}" if member else ""
        super().__init__(f"Unsupported type {spelling!r}{where}: {reason}")

    def for_member(self, member: str) -> "UnsupportedTypeError":
        return UnsupportedTypeError(self.spelling, self.reason, member=member)


class ConfigError(AdlModuleError):
    def __init__(self, message: str, filename: Optional[str] = None, line: Optional[int] = None):
        self.message = message
        self.filename = filename
        self.line = line
        location = ""
        if filename is not None:
            location = f"{filename}:{line}: " if line is not None else f"{filename}: "
        elif line is not None:
            location = f"line {line}: "
        super().__init__(f"{location}{message}")


class SelectionError(AdlModuleError):
    """Nothing to do: carries one of the exact user-facing messages."""


class GenerationError(AdlModuleError):
    def __init__(self, class_name: str, failures: Iterable[Tuple[str, Exception]]):
        self.class_name = class_name
        self.failures = list(failures)
        lines = [f"  {member}: {error}" for member, error in self.failures]
        super().__init__("\n".join([f"ADL generation failed for class {class_name}"] + lines))


class AdlWriteError(AdlModuleError):
    def __init__(self, class_name: str, cause: Exception):
        self.class_name = class_name
        self.cause = cause
        super().__init__(f"*** ERROR(Text): can't handle adl file for class {class_name} {cause}")


class AdlParseError(AdlModuleError):
    def __init__(self, message: str, line: int):
        self.message = message
        self.line = line
        super().__init__(f"line {line}: {message}")
