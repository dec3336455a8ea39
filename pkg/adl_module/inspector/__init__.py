from .grammar import *
from .schema import *
