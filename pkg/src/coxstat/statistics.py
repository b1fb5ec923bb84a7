"""Named integer statistics on Coxeter groups and the parabolic induction operator."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Optional

from . import groups
from .enumeration import KERNEL_STATS
from .groups import (
    GroupDescriptor, SignedPermutation, format_generator_set, inverse,
    neg_set, parabolic_decompose, parabolic_model, parse_generator_set,
)

__all__ = [
    "Statistic", "InducedStatistic", "maj", "nmaj", "fmaj", "dmaj", "Dmaj",
    "star", "induce", "base_statistic", "get_statistic", "BASE_NAMES",
]


@dataclass(frozen=True, eq=False)
class Statistic:
    name: str
    func: Callable
    universe: object
    # name of the compiled sweep kernel, when one computes the same values
    kernel: Optional[str] = None
    starred_from: Optional["Statistic"] = field(default=None, repr=False)

    def __call__(self, x) -> int:
        return self.func(x)

    def _combine(self, other: "Statistic", sign: int, symbol: str) -> "Statistic":
        if other.universe != self.universe:
            raise ValueError("statistics live on different universes")
        f, g = self.func, other.func
        return Statistic(f"{self.name}{symbol}{other.name}",
                         lambda x: f(x) + sign * g(x), self.universe)

    def __add__(self, other):
        return self._combine(other, 1, "+")

    def __sub__(self, other):
        return self._combine(other, -1, "-")


@dataclass(frozen=True, eq=False)
class InducedStatistic(Statistic):
    base: Optional[Statistic] = None
    subset_J: frozenset = frozenset()
    side: str = "right"


def maj(w) -> int:
    seq = tuple(w)
    return sum(i for i in range(1, len(seq)) if seq[i - 1] > seq[i])


def _require(w: SignedPermutation, family: str):
    if w.descriptor.family != family:
        raise ValueError(f"statistic defined on type {family}, got {w.descriptor}")


def nmaj(w: SignedPermutation) -> int:
    _require(w, "B")
    return maj(w) - sum(a for a in w.window if a < 0)


def fmaj(w: SignedPermutation) -> int:
    _require(w, "B")
    return 2 * maj(w) + len(neg_set(w))


def dmaj(w: SignedPermutation) -> int:
    _require(w, "D")
    negs = [a for a in w.window if a < 0]
    return maj(w) - sum(negs) - len(negs)


def Dmaj(w: SignedPermutation) -> int:  # noqa: N802 - established name
    _require(w, "D")
    seq = w.window[:-1] + (abs(w.window[-1]),)
    return 2 * maj(seq) + sum(1 for a in seq if a < 0)


def _inverse_in(universe):
    if isinstance(universe, GroupDescriptor):
        return inverse
    inv = getattr(universe, "inverse", None)
    if inv is None:
        raise TypeError("star needs a group universe")
    return inv


def star(f: Statistic) -> Statistic:
    """``f*(w) = f(w^{-1})``."""
    if f.starred_from is not None:
        return f.starred_from
    inv = _inverse_in(f.universe)
    func = f.func
    kernel = None
    if f.kernel is not None and f.kernel + "star" in KERNEL_STATS:
        kernel = f.kernel + "star"
    return Statistic(f.name + "star", lambda w: func(inv(w)), f.universe, kernel, f)


_BASES: dict[str, tuple[Callable, Optional[str]]] = {
    "len": (groups.length, None),
    "inv": (groups.inv_count, None),
    "maj": (maj, None),
    "nmaj": (nmaj, "B"),
    "fmaj": (fmaj, "B"),
    "dmaj": (dmaj, "D"),
    "Dmaj": (Dmaj, "D"),
}
BASE_NAMES = tuple(_BASES) + ("majstar", "nmajstar")


def base_statistic(name: str, descriptor: GroupDescriptor) -> Statistic:
    if name.endswith("star") and name[:-4] in _BASES:
        return star(base_statistic(name[:-4], descriptor))
    try:
        func, family = _BASES[name]
    except KeyError:
        raise ValueError(f"unknown statistic {name!r}") from None
    if family is not None and descriptor.family != family:
        raise ValueError(f"{name} is defined on type {family}, not {descriptor}")
    return Statistic(name, func, descriptor, name if name in KERNEL_STATS else None)


def _check_class_on(elems, g: Statistic, what: str):
    from collections import Counter

    lengths = [groups.length(x) for x in elems]
    vals = [g(x) for x in elems]
    top = max(range(len(elems)), key=lengths.__getitem__)
    bottom = lengths.index(0)
    if (Counter(vals) != Counter(lengths) or vals[bottom] != 0
            or vals[top] != lengths[top]):
        raise ValueError(f"{g.name} is not in the class of the length on {what}")


def induce(g: Statistic, J, group: GroupDescriptor, side: str = "right",
           validate: bool = True) -> InducedStatistic:
    """Statistic ``w -> len(w^J) + g(w_J)`` on ``group`` (or its left mirror).

    ``g`` lives either on the classical model of ``W_J`` (prefix J) or on
    ``group`` itself, in which case it is evaluated on the full window of
    ``w_J``.  ``validate=False`` skips the class check on ``W_J``.
    """
    J = parse_generator_set(J, group)
    name = f"induced:{g.name}:{format_generator_set(J)}:{side}"
    if side == "left":
        inner = induce(star(g), J, group, "right", validate)
        func = inner.func
        return InducedStatistic(name, lambda w: func(inverse(w)), group,
                                base=g, subset_J=J, side="left")
    if side != "right":
        raise ValueError(f"side must be 'right' or 'left', not {side!r}")

    model = parabolic_model(group, J)
    restricted = model is not None and g.universe == model
    if not restricted and g.universe != group:
        raise ValueError(f"{g.name} lives on {g.universe}, which is not W_J for J={sorted(J)}")
    if validate:
        if restricted:
            from .posets import in_same_class
            if not in_same_class(g, base_statistic("len", model)):
                raise ValueError(f"{g.name} is not in the class of the length on {model}")
        else:
            _check_class_on(groups.subgroup_elements(group, J), g, f"W_J, J={sorted(J)}")

    gfunc = g.func

    def evaluate(w):
        fac = parabolic_decompose(w, J)
        part = fac.restricted() if restricted else fac.w_parabolic
        return groups.length(fac.w_quotient) + gfunc(part)

    return InducedStatistic(name, evaluate, group, base=g, subset_J=J, side="right")


def get_statistic(name: str, universe, validate: bool = True) -> Statistic:
    """Look up a statistic by registry name.

    Names: ``len``, ``inv``, ``maj``, ``majstar``, ``nmaj``, ``nmajstar``,
    ``fmaj``, ``dmaj``, ``Dmaj`` and ``induced:<base>:<J>:<side>``.
    """
    if not isinstance(universe, GroupDescriptor):
        from .bigcox import CoxeterGroup, generic_statistic
        if isinstance(universe, CoxeterGroup):
            return generic_statistic(name, universe, validate=validate)
        raise ValueError(f"no statistic registry for {universe!r}")
    if name.startswith("induced:"):
        parts = name.split(":")
        if len(parts) not in (3, 4):
            raise ValueError(f"expected induced:<base>:<J>[:<side>], got {name!r}")
        base, J = parts[1], parts[2]
        side = parts[3] if len(parts) == 4 else "right"
        J = parse_generator_set(J, universe)
        model = parabolic_model(universe, J)
        g = base_statistic(base, model if model is not None else universe)
        return induce(g, J, universe, side, validate)
    return base_statistic(name, universe)
