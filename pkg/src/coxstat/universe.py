"""Uniform access to the finite sets statistics live on.

A universe is a classical ``GroupDescriptor`` or any object exposing
``elements()``, ``bottom_element()``, ``top_element()`` and ``__len__``
(graded posets and enumerated generic Coxeter groups).  Elements are always
listed in a fixed index order.
"""

from __future__ import annotations

from functools import lru_cache

from .enumeration import elements as _group_elements, group_order, rank
from .groups import GroupDescriptor

# materializing larger classical groups as Python objects is a bug, not a feature
MATERIALIZE_CAP = 400_000


@lru_cache(maxsize=32)
def _cached_elements(descriptor: GroupDescriptor) -> tuple:
    order = group_order(descriptor)
    if order > MATERIALIZE_CAP:
        raise ValueError(f"{descriptor} has {order} elements; use the compiled sweeps")
    return tuple(_group_elements(descriptor))


def elements(universe):
    if isinstance(universe, GroupDescriptor):
        return _cached_elements(universe)
    return universe.elements()


def size(universe) -> int:
    if isinstance(universe, GroupDescriptor):
        return group_order(universe)
    return len(universe)


def bottom(universe):
    if isinstance(universe, GroupDescriptor):
        return universe.identity()
    return universe.bottom_element()


def top(universe):
    if isinstance(universe, GroupDescriptor):
        return universe.longest()
    return universe.top_element()


def index_of(universe, x) -> int:
    if isinstance(universe, GroupDescriptor):
        return rank(x)
    return universe.index(x)


def values(f) -> list[int]:
    """Values of a statistic over its universe, in index order."""
    return [f(x) for x in elements(f.universe)]
