"""Exact computations with graded valuations on split graded fields."""

__version__ = "0.1.0"
