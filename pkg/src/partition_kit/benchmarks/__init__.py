from . import polyominoes, scaling

__all__ = [
    "polyominoes",
    "scaling",
]
