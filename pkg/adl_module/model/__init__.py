from .element import *
from .visitor import *
