from .unit import *
from .generator import *
from .reader import *
