r"""
Different families of dependence functions are located in separate files here.
"""
from .base import BaseDependence, FunctionDependence, KINDS
from .frechet import LowerFrechet, UpperFrechet
from .independence import Independence
from .checkerboard import Checkerboard
from .transforms import Reflected, Survival, Margin
