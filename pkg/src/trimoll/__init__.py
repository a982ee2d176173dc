"""trimoll: degree-3 L-function coefficient algebra, approximate functional
equations, short mollifiers, and desk-scale mean-value experiments."""

__version__ = "0.1.0"
