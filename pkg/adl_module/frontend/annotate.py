from typing import Optional

from adl_module.errors import AnnotationError, ModelLookupError
from adl_module.frontend.doc_comment import TAG_FOR_KEY, render_tag, update_doc_comment
from adl_module.frontend.parser import parse_source


def inject_annotation(
    source_text: str,
    class_name: str,
    key: str,
    value: Optional[str],
    member: Optional[str] = None,
    path: str = "",
) -> str:
    """Set (or, with ``value=None``, remove) an ``@adl.*`` tag in source text.

    The tag goes into the doc comment right above the class, or above
    ``member`` when given; a comment block is created when there is none.
    Only the comment changes; injecting the same pair twice is a no-op.
    """
    unit = parse_source(source_text, path)
    try:
        span = unit.find_class(class_name)
        if member is not None:
            span = span.member(member)
    except KeyError:
        target = class_name if member is None else f"{class_name}::{member}"
        raise ModelLookupError(target) from None
    if member is not None and span.declarators > 1:
        known = TAG_FOR_KEY.get(key)
        raise AnnotationError(
            known.tag if known is not None else key,
            f"{class_name}::{member} shares its declaration with other members; "
            "declare it separately to annotate it",
        )

    crlf = "\r\n" in source_text
    line_start = source_text.rfind("\n", 0, span.start) + 1
    prefix = source_text[line_start : span.start]
    indent = prefix if not prefix.strip() else ""

    if span.doc is not None:
        doc = span.doc
        doc_line_start = source_text.rfind("\n", 0, doc.lexpos) + 1
        doc_prefix = source_text[doc_line_start : doc.lexpos]
        doc_indent = doc_prefix if not doc_prefix.strip() else ""
        updated = update_doc_comment(doc.text, key, value, indent=doc_indent, crlf=crlf)
        return source_text[: doc.lexpos] + updated + source_text[doc.end :]

    if value is None:
        return source_text
    tag = render_tag(key, value)
    if prefix.strip():
        # declaration shares its line with other code
        return source_text[: span.start] + f"/** {tag} */ " + source_text[span.start :]
    nl = "\r\n" if crlf else "\n"
    block = f"{indent}/**{nl}{indent} * {tag}{nl}{indent} */{nl}"
    return source_text[:line_start] + block + source_text[line_start:]
