from .lexer import *
from .doc_comment import *
from .parser import *
from .types import *
from .annotate import *
