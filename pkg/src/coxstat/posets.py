"""Finite graded posets, good decompositions and the rank-shift operator.

Only ranks are stored, never the order relation: every construction here
depends on the grading, the extremal elements and the decomposition bijection.
Elements are the dense indices ``0 .. |X|-1``; optional labels carry the
group element behind each index.
"""

from __future__ import annotations

import json
from collections import Counter
from dataclasses import dataclass, field
from typing import Optional, Sequence

from . import universe as U
from .groups import GroupDescriptor, parabolic_decompose, parabolic_model, parse_generator_set
from .statistics import Statistic, base_statistic

__all__ = [
    "FiniteGradedPoset", "GoodDecomposition", "poset_function", "vector_on",
    "coxeter_good_decomposition", "product_decomposition", "r_operator",
    "is_induced", "in_same_class", "chain_poset", "load_poset", "load_function",
]


@dataclass(frozen=True, eq=False)
class FiniteGradedPoset:
    ranks: tuple[int, ...]
    bottom: int
    top: int
    labels: Optional[tuple] = field(default=None, repr=False)

    def __post_init__(self):
        ranks = self.ranks
        if not ranks:
            raise ValueError("empty poset")
        if ranks[self.bottom] != 0:
            raise ValueError("bottom element must have rank 0")
        height = ranks[self.top]
        if max(ranks) != height or min(ranks) < 0:
            raise ValueError("ranks must lie between 0 and the rank of the top element")
        if set(ranks) != set(range(height + 1)):
            raise ValueError("every rank between 0 and the top rank must be occupied")
        counts = Counter(ranks)
        if counts[0] != 1 or counts[height] != 1:
            raise ValueError("minimum and maximum must be the only elements of extremal rank")
        if self.labels is not None:
            if len(self.labels) != len(ranks):
                raise ValueError("one label per element required")
            object.__setattr__(self, "_label_index", {x: i for i, x in enumerate(self.labels)})

    def __len__(self):
        return len(self.ranks)

    def elements(self):
        return range(len(self.ranks))

    def bottom_element(self):
        return self.bottom

    def top_element(self):
        return self.top

    def index(self, x) -> int:
        return x

    def label_index(self, label) -> int:
        return self._label_index[label]

    @property
    def height(self) -> int:
        return self.ranks[self.top]

    def rank_function(self) -> Statistic:
        return poset_function(self, self.ranks, "rank")


def poset_function(poset: FiniteGradedPoset, vals: Sequence[int], name: str = "f") -> Statistic:
    vals = tuple(int(v) for v in vals)
    if len(vals) != len(poset):
        raise ValueError("function vector must have one value per element")
    return Statistic(name, vals.__getitem__, poset)


def vector_on(f: Statistic, poset: FiniteGradedPoset) -> list[int]:
    """Values of ``f`` on the elements of ``poset`` (through labels for group statistics)."""
    if f.universe is poset:
        return [f(i) for i in poset.elements()]
    if poset.labels is None:
        raise ValueError(f"{f.name} does not live on this poset")
    return [f(x) for x in poset.labels]


def chain_poset(m: int) -> FiniteGradedPoset:
    if m < 2:
        raise ValueError("a chain needs at least 2 elements")
    return FiniteGradedPoset(tuple(range(m)), 0, m - 1)


@dataclass(frozen=True, eq=False)
class GoodDecomposition:
    poset: FiniteGradedPoset
    factor_a: FiniteGradedPoset
    factor_b: FiniteGradedPoset
    pairs: tuple[tuple[int, int], ...]

    def __post_init__(self):
        X, A, B = self.poset, self.factor_a, self.factor_b
        if len(self.pairs) != len(X) or len(X) != len(A) * len(B):
            raise ValueError("decomposition is not a bijection X -> A x B")
        index = {}
        for x, (a, b) in enumerate(self.pairs):
            if X.ranks[x] != A.ranks[a] + B.ranks[b]:
                raise ValueError(f"rank is not additive at element {x}")
            index[a, b] = x
        if len(index) != len(X):
            raise ValueError("decomposition is not injective")
        if self.pairs[X.bottom] != (A.bottom, B.bottom) or self.pairs[X.top] != (A.top, B.top):
            raise ValueError("extremal elements must map to extremal pairs")
        object.__setattr__(self, "_index", index)

    def pi_a(self, x: int) -> int:
        return self.pairs[x][0]

    def pi_b(self, x: int) -> int:
        return self.pairs[x][1]

    def element(self, a: int, b: int) -> int:
        return self._index[a, b]

    def slice_a(self, f: Statistic) -> list[int]:
        """``f_A(a) = f(a, 0_B)``."""
        vals = vector_on(f, self.poset)
        return [vals[self.element(a, self.factor_b.bottom)] for a in self.factor_a.elements()]

    def slice_b(self, f: Statistic) -> list[int]:
        """``f_B(b) = f(0_A, b)``."""
        vals = vector_on(f, self.poset)
        return [vals[self.element(self.factor_a.bottom, b)] for b in self.factor_b.elements()]


def _poset_from(elems, lens) -> FiniteGradedPoset:
    top = max(range(len(elems)), key=lens.__getitem__)
    return FiniteGradedPoset(tuple(lens), lens.index(0), top, tuple(elems))


def coxeter_good_decomposition(group, J) -> GoodDecomposition:
    """``W = W^J x W_J`` via ``w -> (w^J, w_J)``.

    Elements of ``W`` and ``W^J`` keep the enumeration order of ``W``; when
    ``W_J`` has a classical model its factor is labelled by model elements in
    the model's own enumeration order.
    """
    if not isinstance(group, GroupDescriptor):
        from .bigcox import generic_good_decomposition
        return generic_good_decomposition(group, J)
    from .enumeration import rank
    from .groups import length

    J = parse_generator_set(J, group)
    model = parabolic_model(group, J)
    X = U.elements(group)
    facs = [parabolic_decompose(w, J) for w in X]
    quotients = {f.w_quotient for f in facs}
    a_elems = [w for w in X if w in quotients]
    if model is not None:
        b_elems = list(U.elements(model))
        b_key = [f.restricted() for f in facs]
        b_len = [length(v) for v in b_elems]
    else:
        parts = {f.w_parabolic for f in facs}
        b_elems = sorted(parts, key=rank)
        b_key = [f.w_parabolic for f in facs]
        b_len = [length(v) for v in b_elems]
    a_idx = {w: i for i, w in enumerate(a_elems)}
    b_idx = {w: i for i, w in enumerate(b_elems)}
    pairs = tuple((a_idx[f.w_quotient], b_idx[k]) for f, k in zip(facs, b_key))
    return GoodDecomposition(
        _poset_from(X, [length(w) for w in X]),
        _poset_from(a_elems, [length(w) for w in a_elems]),
        _poset_from(b_elems, b_len),
        pairs,
    )


def product_decomposition(P: FiniteGradedPoset, Q: FiniteGradedPoset) -> GoodDecomposition:
    """The cartesian product ``P x Q`` with its obvious good decomposition."""
    pairs = tuple((a, b) for a in P.elements() for b in Q.elements())
    ranks = tuple(P.ranks[a] + Q.ranks[b] for a, b in pairs)
    X = FiniteGradedPoset(ranks, pairs.index((P.bottom, Q.bottom)),
                          pairs.index((P.top, Q.top)), pairs)
    return GoodDecomposition(X, P, Q, pairs)


def r_operator(f: Statistic, k: int, d: GoodDecomposition) -> Statistic:
    """``f - k * rank_A o pi_A`` on the decomposed poset."""
    vals = vector_on(f, d.poset)
    ra = d.factor_a.ranks
    shifted = [v - k * ra[d.pi_a(x)] for x, v in enumerate(vals)]
    name = f.name if k == 0 else f"R^{k}({f.name})"
    return poset_function(d.poset, shifted, name)


def is_induced(f: Statistic, g: Statistic, d: GoodDecomposition) -> bool:
    gvals = vector_on(g, d.factor_b)
    if not in_same_class(poset_function(d.factor_b, gvals, g.name), d.factor_b.rank_function()):
        return False
    rf = vector_on(r_operator(f, 1, d), d.poset)
    return all(rf[x] == gvals[d.pi_b(x)] for x in d.poset.elements())


def in_same_class(f: Statistic, g: Statistic) -> bool:
    """Equidistributed and equal at the minimum and the maximum."""
    if f.universe != g.universe:
        raise ValueError("statistics live on different universes")
    uni = f.universe
    lo, hi = U.bottom(uni), U.top(uni)
    if f(lo) != g(lo) or f(hi) != g(hi):
        return False
    from .analysis import distribution
    return distribution(f) == distribution(g)


def load_poset(path) -> FiniteGradedPoset:
    with open(path) as fh:
        data = json.load(fh)
    return FiniteGradedPoset(tuple(int(r) for r in data["ranks"]), int(data["bottom"]), int(data["top"]))


def dump_poset(poset: FiniteGradedPoset) -> str:
    return json.dumps({"ranks": list(poset.ranks), "bottom": poset.bottom, "top": poset.top})


def load_function(path, poset: FiniteGradedPoset, name: Optional[str] = None) -> Statistic:
    with open(path) as fh:
        vals = json.load(fh)
    return poset_function(poset, vals, name or str(path))
