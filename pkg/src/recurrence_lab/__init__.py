"""Desk-scale constructions and brute-force checks around relative intersectivity."""

__version__ = "0.1.0"

from .generators import SetFamily, parse_family  # noqa: E402
from .windows import Window  # noqa: E402

__all__ = ["SetFamily", "Window", "parse_family", "__version__"]
