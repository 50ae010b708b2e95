"""Composite maritime event recognition over AIS streams.

Interval algebra, a windowed Event Calculus engine, spatial preprocessing,
critical-point compression, the maritime activity patterns and the
run/compare/bench tooling around them.
"""

__version__ = "0.1.0"
