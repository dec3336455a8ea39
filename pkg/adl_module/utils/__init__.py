from .registry import *
from .typing import *
from .files import *
