import os
from pathlib import Path
from typing import Iterable, List

from adl_module.utils.typing import PathLike

HEADER_SUFFIXES = (".h", ".hpp", ".hh")
ADL_SUFFIXES = (".adl",)


def find_files(inputs: Iterable[PathLike], suffixes: Iterable[str]) -> List[Path]:
    """Expand files and directories into a sorted, de-duplicated file list.

    Directories are walked recursively; explicit files are kept even when
    their suffix does not match.
    """
    suffixes = tuple(suffixes)
    found = []
    for entry in inputs:
        path = Path(entry)
        if path.is_dir():
            for root, _, names in os.walk(path):
                found.extend(
                    Path(root) / name for name in names if name.endswith(suffixes)
                )
        elif path.is_file():
            found.append(path)
    return sorted(set(found))


def read_text(path: PathLike) -> str:
    # newline="" keeps CRLF line endings intact for in-place rewrites
    with open(path, "r", encoding="utf-8", newline="") as f:
        return f.read()


def write_text(path: PathLike, text: str) -> None:
    with open(path, "w", encoding="utf-8", newline="") as f:
        f.write(text)
