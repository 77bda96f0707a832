"""Exact tools for piecewise linear cut-generating functions of one variable."""

from .exactnum import QNum, parse, qnum
from .pwl import PwlFunction, read_function

__version__ = "0.1.0"

__all__ = ["QNum", "PwlFunction", "parse", "qnum", "read_function", "__version__"]
