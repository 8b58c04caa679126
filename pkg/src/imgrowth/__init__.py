"""Iterated monodromy groups of Thurston maps.

Wreath-recursion arithmetic, Schreier graphs and growth certificates,
two-tile subdivision complexes, and the exponential-growth criterion.
"""

from .perm import Perm
from .selfsim import (
    BudgetExceeded,
    GroupElement,
    InfiniteOrderCertificate,
    LevelAction,
    Limits,
    PresentationError,
    WreathPresentation,
    act,
    check_certificate,
    equal,
    infinite_order_certificate,
    is_trivial,
    level_action,
    multiply,
    order,
    root_perm,
    section,
    section_at,
)
from .syntax import ParseError, parse_element, parse_presentation

__version__ = "0.1.0"
