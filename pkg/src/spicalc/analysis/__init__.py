"""Determinacy and confluence checks over explored transition systems."""
from .checks import *  # noqa: F401,F403
from .checks import __all__ as _checks_all
from .diagrams import PAIRS, check_squares, closes  # noqa: F401

__all__ = [*_checks_all, "check_squares", "closes", "PAIRS"]
