import os
from typing import Mapping, Union

PathLike = Union[str, os.PathLike]

# C++ spelling -> ADL spelling
TypeMap = Mapping[str, str]
