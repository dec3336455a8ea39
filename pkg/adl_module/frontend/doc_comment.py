"""Javadoc-style ``/** ... */`` blocks and the ``@adl.*`` tag vocabulary."""
import re
from dataclasses import dataclass, field
from typing import List, Optional, Tuple

from adl_module.errors import AnnotationError
from adl_module.model.element import (
    ADLENABLED,
    ADLFOLDER,
    ADLINTERFACE,
    ADLPERSISTENT,
    ADLREADONLY,
)

ADL_TAG_PREFIX = "adl."

_TAG_RE = re.compile(r"(?<![^\s*])@([A-Za-z_][\w.\-]*)((?:(?!\s@)[^\n])*)")


@dataclass(frozen=True)
class AnnotationTag:
    tag: str
    key: str
    takes_argument: bool


ANNOTATION_TAGS = {
    t.tag: t
    for t in (
        AnnotationTag("adl.enabled", ADLENABLED, True),
        AnnotationTag("adl.interface", ADLINTERFACE, True),
        AnnotationTag("adl.folder", ADLFOLDER, True),
        AnnotationTag("adl.persistent", ADLPERSISTENT, False),
        AnnotationTag("adl.readonly", ADLREADONLY, False),
    )
}

TAG_FOR_KEY = {t.key: t for t in ANNOTATION_TAGS.values()}


@dataclass
class DocComment:
    raw: str
    tags: List[Tuple[str, Optional[str]]] = field(default_factory=list)


def comment_body(raw: str) -> str:
    """Comment text without the delimiters and leading ``*`` gutters."""
    inner = raw[3:-2] if raw.endswith("*/") else raw[3:]
    lines = []
    for line in inner.split("\n"):
        line = line.strip()
        if line.startswith("*"):
            line = line[1:].strip()
        lines.append(line)
    return "\n".join(lines)


def parse_doc_comment(raw: str) -> DocComment:
    tags = []
    for match in _TAG_RE.finditer(comment_body(raw)):
        argument = match.group(2).strip() or None
        tags.append((match.group(1), argument))
    return DocComment(raw=raw, tags=tags)


def extract_annotations(doc: DocComment) -> List[Tuple[str, str]]:
    """Map ``@adl.*`` tags to (property key, value) pairs, in order.

    Non-ADL tags are ignored; flags map to the empty string.
    """
    annotations = []
    for tag, argument in doc.tags:
        if not tag.startswith(ADL_TAG_PREFIX):
            continue
        known = ANNOTATION_TAGS.get(tag)
        if known is None:
            raise AnnotationError(tag, "unknown ADL annotation")
        if known.takes_argument:
            if argument is None:
                raise AnnotationError(tag, "missing required argument")
            if len(argument.split()) != 1:
                raise AnnotationError(tag, f"expected a single argument, got {argument!r}")
            annotations.append((known.key, argument))
        else:
            if argument is not None:
                raise AnnotationError(tag, f"takes no argument, got {argument!r}")
            annotations.append((known.key, ""))
    return annotations


def render_tag(key: str, value: str) -> str:
    known = TAG_FOR_KEY.get(key)
    if known is None:
        raise AnnotationError(key, "no annotation tag for this property")
    if not known.takes_argument:
        return f"@{known.tag}"
    if not value or len(value.split()) != 1:
        raise AnnotationError(known.tag, f"expected a single argument, got {value!r}")
    return f"@{known.tag} {value}"


def _tag_pattern(known: AnnotationTag) -> str:
    pattern = r"@" + re.escape(known.tag) + r"(?![\w.\-])"
    if known.takes_argument:
        pattern += r"(?:[ \t]+(?!@)[^\s*]\S*)?"
    return pattern


def _content(line: str) -> str:
    line = line.strip()
    if line.startswith("/**"):
        line = line[3:]
    if line.endswith("*/"):
        line = line[:-2]
    return line.strip().lstrip("*").strip()


def update_doc_comment(raw: str, key: str, value: Optional[str], indent: str = "", crlf: bool = False) -> str:
    """Return ``raw`` with the tag for ``key`` set to ``value`` (None removes it).

    Lines not carrying the tag are kept byte for byte. A one-line comment is
    unfolded into a block first. Already-correct comments come back unchanged.
    """
    known = TAG_FOR_KEY.get(key)
    if known is None:
        raise AnnotationError(key, "no annotation tag for this property")
    new_tag = None if value is None else render_tag(key, value)

    current = [v for k, v in extract_annotations(parse_doc_comment(raw)) if k == key]
    if value is None and not current:
        return raw
    if value is not None and current == [("" if not known.takes_argument else value)]:
        return raw

    eol = "\r" if crlf else ""
    if "\n" not in raw:
        content = _content(raw)
        lines = ["/**"] + ([f"{indent} * {content}{eol}"] if content else []) + [f"{indent} */"]
        lines[0] += eol
    else:
        lines = raw.split("\n")

    tag_re = re.compile(_tag_pattern(known))
    strip_re = re.compile(r"[ \t]*" + _tag_pattern(known))
    inserted = False
    out = []
    for i, line in enumerate(lines):
        if not tag_re.search(line):
            out.append(line)
            continue
        had_content = bool(_content(line))
        if new_tag is not None and not inserted:
            match = tag_re.search(line)
            line = line[: match.start()] + new_tag + strip_re.sub("", line[match.end() :])
            inserted = True
        else:
            line = strip_re.sub("", line)
        is_edge = i == 0 or i == len(lines) - 1
        if had_content and not _content(line) and not is_edge:
            continue
        out.append(line)

    if new_tag is not None and not inserted:
        prefix = f"{indent} * "
        for line in out[1:-1]:
            gutter = re.match(r"[ \t]*\*[ \t]?", line)
            if gutter:
                prefix = gutter.group(0) if gutter.group(0).endswith(" ") else gutter.group(0) + " "
                break
        out.insert(len(out) - 1, f"{prefix}{new_tag}{eol}")
    return "\n".join(out)

