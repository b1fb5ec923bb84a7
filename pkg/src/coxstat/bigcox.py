"""Finite Coxeter groups from their Coxeter matrix, with exact arithmetic.

Elements act on the weight coordinates of a Cartan-type realization:
``A[i][i] = 2`` and ``A[i][j] * A[j][i] = 4 cos^2(pi / m_ij)``, over ``Q(sqrt 5)``.
That covers every bond order in ``{2, 3, 4, 5, 6, 10}``, hence I2(5), H3, F4
and the E series.  Enumeration walks the orbit of ``rho = (1, ..., 1)``:
the vector ``w^{-1}(rho)`` identifies ``w`` and ``s`` is a right descent of
``w`` exactly when coordinate ``s`` of that vector is negative.

Dihedral groups with other bond orders are enumerated through their action
on the vertices of the regular polygon instead.
"""

from __future__ import annotations

import json
from collections import deque
from dataclasses import dataclass, field
from functools import cached_property
from itertools import permutations
from math import gcd
from typing import Optional

from .analysis import LaurentPoly
from .groups import GroupDescriptor, coxeter_matrix as classical_coxeter_matrix, parse_generator_set
from .statistics import Statistic, base_statistic

__all__ = [
    "QSqrt5", "CoxeterMatrix", "preset", "GenericElement", "CoxeterGroup",
    "enumerate_group", "generic_parabolic_decompose", "table_parabolic_decompose",
    "generic_induce", "find_relabeling", "generic_statistic",
    "generic_good_decomposition", "DEFAULT_CAP",
]

DEFAULT_CAP = 100_000


class QSqrt5:
    """Exact element ``(a + b*sqrt(5)) / d`` of ``Q(sqrt 5)``."""

    __slots__ = ("a", "b", "d")

    def __init__(self, a: int, b: int = 0, d: int = 1):
        if d == 0:
            raise ZeroDivisionError("zero denominator")
        if d < 0:
            a, b, d = -a, -b, -d
        g = gcd(gcd(a, b), d)
        self.a, self.b, self.d = a // g, b // g, d // g

    @staticmethod
    def coerce(x) -> "QSqrt5":
        return x if isinstance(x, QSqrt5) else QSqrt5(int(x))

    def __add__(self, other):
        o = QSqrt5.coerce(other)
        return QSqrt5(self.a * o.d + o.a * self.d, self.b * o.d + o.b * self.d, self.d * o.d)

    __radd__ = __add__

    def __neg__(self):
        return QSqrt5(-self.a, -self.b, self.d)

    def __sub__(self, other):
        return self + (-QSqrt5.coerce(other))

    def __rsub__(self, other):
        return QSqrt5.coerce(other) - self

    def __mul__(self, other):
        o = QSqrt5.coerce(other)
        return QSqrt5(self.a * o.a + 5 * self.b * o.b, self.a * o.b + self.b * o.a, self.d * o.d)

    __rmul__ = __mul__

    def __eq__(self, other):
        if isinstance(other, int):
            other = QSqrt5(other)
        if not isinstance(other, QSqrt5):
            return NotImplemented
        return (self.a, self.b, self.d) == (other.a, other.b, other.d)

    def __hash__(self):
        if self.b == 0 and self.d == 1:
            return hash(self.a)
        return hash((self.a, self.b, self.d))

    def sign(self) -> int:
        a, b = self.a, self.b
        sa, sb = (a > 0) - (a < 0), (b > 0) - (b < 0)
        if sb == 0 or sa == sb:
            return sa or sb
        if sa == 0:
            return sb
        # opposite signs: compare a^2 with 5 b^2
        return sa if a * a > 5 * b * b else sb

    def __lt__(self, other):
        return (self - other).sign() < 0

    def __repr__(self):
        if self.b == 0 and self.d == 1:
            return str(self.a)
        return f"({self.a}{self.b:+}*sqrt5)/{self.d}"


def _sign(x) -> int:
    return x.sign() if isinstance(x, QSqrt5) else (x > 0) - (x < 0)


PHI = QSqrt5(1, 1, 2)
# bond order -> (A[i][j], A[j][i]) for i < j
_CARTAN_BONDS = {
    2: (0, 0),
    3: (-1, -1),
    4: (-1, -2),
    5: (-PHI, -PHI),
    6: (-1, -3),
    10: (-1, QSqrt5(-5, -1, 2)),
}


@dataclass(frozen=True)
class CoxeterMatrix:
    m: tuple[tuple[int, ...], ...]
    name: str = ""

    def __post_init__(self):
        m = tuple(tuple(int(v) for v in row) for row in self.m)
        object.__setattr__(self, "m", m)
        k = len(m)
        for i in range(k):
            if len(m[i]) != k or m[i][i] != 1:
                raise ValueError("Coxeter matrix must be square with 1 on the diagonal")
            for j in range(k):
                if i != j and (m[i][j] != m[j][i] or m[i][j] < 2):
                    raise ValueError("off-diagonal entries must be symmetric and >= 2")

    @property
    def size(self) -> int:
        return len(self.m)

    @property
    def generators(self) -> tuple[int, ...]:
        """Generator labels ``1 .. size``."""
        return tuple(range(1, self.size + 1))

    def entry(self, s: int, t: int) -> int:
        return self.m[s - 1][t - 1]

    def to_json(self) -> str:
        return json.dumps({"size": self.size, "m": [list(r) for r in self.m]})

    @classmethod
    def from_json(cls, data, name: str = "") -> "CoxeterMatrix":
        if isinstance(data, str):
            data = json.loads(data)
        m = data["m"]
        if int(data.get("size", len(m))) != len(m):
            raise ValueError("size does not match the matrix")
        return cls(tuple(tuple(r) for r in m), name)

    @classmethod
    def load(cls, path) -> "CoxeterMatrix":
        with open(path) as fh:
            return cls.from_json(json.load(fh), str(path))

    @classmethod
    def from_edges(cls, k: int, edges: dict, name: str = "") -> "CoxeterMatrix":
        m = [[1 if i == j else 2 for j in range(k)] for i in range(k)]
        for (s, t), v in edges.items():
            m[s - 1][t - 1] = m[t - 1][s - 1] = v
        return cls(tuple(tuple(r) for r in m), name)

    def cartan(self):
        k = self.size
        A = [[2 if i == j else 0 for j in range(k)] for i in range(k)]
        for i in range(k):
            for j in range(i + 1, k):
                bond = self.m[i][j]
                if bond not in _CARTAN_BONDS:
                    raise ValueError(f"bond order {bond} has no realization over Q(sqrt 5)")
                A[i][j], A[j][i] = _CARTAN_BONDS[bond]
        return A


def preset(name: str) -> CoxeterMatrix:
    """Named matrices: ``I2:<m>``, ``H3``, ``F4``, ``E6``, ``E7``, ``E8``.

    Labels: H3 is ``s1 -3- s2 -5- s3``; F4 is ``s1 -3- s2 -4- s3 -3- s4``;
    E_k uses the chain ``1-3-4-5-6-...`` with ``s2`` attached to ``s4``.
    """
    key = name.strip().upper()
    if key.startswith("I2:"):
        m = int(key[3:])
        return CoxeterMatrix(((1, m), (m, 1)), f"I2({m})")
    if key == "H3":
        return CoxeterMatrix.from_edges(3, {(1, 2): 3, (2, 3): 5}, "H3")
    if key == "F4":
        return CoxeterMatrix.from_edges(4, {(1, 2): 3, (2, 3): 4, (3, 4): 3}, "F4")
    if key in ("E6", "E7", "E8"):
        k = int(key[1])
        edges = {(1, 3): 3, (2, 4): 3}
        edges.update({(i, i + 1): 3 for i in range(3, k)})
        return CoxeterMatrix.from_edges(k, edges, key)
    raise ValueError(f"unknown Coxeter preset {name!r}")


def _matmul(X, Y):
    k = len(X)
    cols = list(zip(*Y))
    return tuple(tuple(sum((X[i][t] * cols[j][t] for t in range(k)), 0) for j in range(k))
                 for i in range(k))


class GenericElement:
    """A group element as its matrix on weight coordinates, kept with its inverse."""

    __slots__ = ("matrix", "mat", "inv")

    def __init__(self, matrix: CoxeterMatrix, mat, inv):
        self.matrix, self.mat, self.inv = matrix, mat, inv

    @classmethod
    def identity(cls, matrix: CoxeterMatrix) -> "GenericElement":
        k = matrix.size
        eye = tuple(tuple(1 if i == j else 0 for j in range(k)) for i in range(k))
        return cls(matrix, eye, eye)

    @classmethod
    def generator(cls, matrix: CoxeterMatrix, s: int) -> "GenericElement":
        A = matrix.cartan()
        k, i = matrix.size, s - 1
        M = tuple(tuple((1 if j == c else 0) - (A[i][j] if c == i else 0) for c in range(k))
                  for j in range(k))
        return cls(matrix, M, M)

    @classmethod
    def from_word(cls, matrix: CoxeterMatrix, word) -> "GenericElement":
        w = cls.identity(matrix)
        for s in word:
            w = w * cls.generator(matrix, s)
        return w

    def __mul__(self, other: "GenericElement") -> "GenericElement":
        return GenericElement(self.matrix, _matmul(self.mat, other.mat), _matmul(other.inv, self.inv))

    def inverse(self) -> "GenericElement":
        return GenericElement(self.matrix, self.inv, self.mat)

    def __eq__(self, other):
        return isinstance(other, GenericElement) and self.mat == other.mat

    def __hash__(self):
        return hash(self.mat)

    def is_identity(self) -> bool:
        return self == GenericElement.identity(self.matrix)

    def right_descents(self) -> frozenset:
        # coordinates of w^{-1}(rho), rho = (1, ..., 1)
        return frozenset(s for s, row in zip(self.matrix.generators, self.inv)
                         if _sign(sum(row, 0)) < 0)

    def left_descents(self) -> frozenset:
        return frozenset(s for s, row in zip(self.matrix.generators, self.mat)
                         if _sign(sum(row, 0)) < 0)

    def length(self) -> int:
        return len(self.reduced_word())

    def reduced_word(self) -> list[int]:
        word, w = [], self
        while True:
            desc = w.right_descents()
            if not desc:
                return word[::-1]
            s = min(desc)
            w = w * GenericElement.generator(self.matrix, s)
            word.append(s)


def generic_parabolic_decompose(w: GenericElement, J):
    """``(w^J, w_J)`` by stripping right descents in J."""
    J = _check_J(w.matrix, J)
    stripped, v = [], w
    while True:
        hits = sorted(J & v.right_descents())
        if not hits:
            break
        v = v * GenericElement.generator(w.matrix, hits[0])
        stripped.append(hits[0])
    return v, GenericElement.from_word(w.matrix, reversed(stripped))


def _check_J(matrix: CoxeterMatrix, J) -> frozenset:
    J = parse_generator_set(J)
    if not J <= set(matrix.generators):
        raise ValueError(f"{sorted(J)} is not a set of generators s1..s{matrix.size}")
    return J


class CapExceeded(ValueError):
    pass


@dataclass(eq=False)
class CoxeterGroup:
    """An enumerated finite Coxeter group; elements are dense BFS indices."""

    matrix: CoxeterMatrix
    lengths: list[int]
    mult: list[tuple[int, ...]]  # mult[w][s - 1] = index of w * s
    parent: list[int]
    parent_gen: list[int]
    _inverse: Optional[list[int]] = field(default=None, repr=False)

    def __len__(self):
        return len(self.lengths)

    def __repr__(self):
        return f"CoxeterGroup({self.matrix.name or self.matrix.size}, order={len(self)})"

    @property
    def name(self) -> str:
        return self.matrix.name

    def elements(self):
        return range(len(self.lengths))

    def bottom_element(self) -> int:
        return 0

    @cached_property
    def top(self) -> int:
        return max(self.elements(), key=self.lengths.__getitem__)

    def top_element(self) -> int:
        return self.top

    def index(self, x) -> int:
        return x

    def length(self, w: int) -> int:
        return self.lengths[w]

    def times(self, w: int, s: int) -> int:
        return self.mult[w][s - 1]

    def has_right_descent(self, w: int, s: int) -> bool:
        return self.lengths[self.mult[w][s - 1]] < self.lengths[w]

    def right_descents(self, w: int) -> frozenset:
        return frozenset(s for s in self.matrix.generators if self.has_right_descent(w, s))

    def word(self, w: int) -> list[int]:
        out = []
        while w:
            out.append(self.parent_gen[w])
            w = self.parent[w]
        return out[::-1]

    def from_word(self, word, start: int = 0) -> int:
        w = start
        for s in word:
            w = self.mult[w][s - 1]
        return w

    def inverse(self, w: int) -> int:
        if self._inverse is None:
            self._inverse = [self.from_word(reversed(self.word(x))) for x in self.elements()]
        return self._inverse[w]

    def element(self, w: int) -> GenericElement:
        return GenericElement.from_word(self.matrix, self.word(w))

    def poincare(self) -> LaurentPoly:
        out: dict = {}
        for v in self.lengths:
            out[v] = out.get(v, 0) + 1
        return LaurentPoly(out)

    def subgroup(self, J) -> list[int]:
        J = _check_J(self.matrix, J)
        seen, queue = {0}, deque([0])
        while queue:
            w = queue.popleft()
            for s in sorted(J):
                v = self.mult[w][s - 1]
                if v not in seen:
                    seen.add(v)
                    queue.append(v)
        return sorted(seen)


def _weight_realization(matrix: CoxeterMatrix):
    A = matrix.cartan()
    k = matrix.size

    def act(state, s):
        i = s - 1
        ci = state[i]
        if ci == 0:
            return state
        row = A[i]
        return tuple(cj - ci * aij if aij != 0 else cj for cj, aij in zip(state, row))

    return tuple([1] * k), act


def _polygon_realization(matrix: CoxeterMatrix):
    m = matrix.entry(1, 2)
    # s1: k -> -k, s2: k -> 1 - k on Z/m; states are w as a vertex permutation
    gens = {1: tuple((-k) % m for k in range(m)), 2: tuple((1 - k) % m for k in range(m))}

    def act(state, s):
        g = gens[s]
        return tuple(state[g[k]] for k in range(m))

    return tuple(range(m)), act


def enumerate_group(matrix: CoxeterMatrix, cap: int = DEFAULT_CAP) -> CoxeterGroup:
    """Breadth-first closure under right multiplication; length is BFS depth."""
    try:
        start, act = _weight_realization(matrix)
    except ValueError:
        if matrix.size != 2:
            raise
        start, act = _polygon_realization(matrix)
    gens = matrix.generators
    index = {start: 0}
    states = [start]
    lengths, parent, parent_gen = [0], [0], [0]
    mult: list[tuple[int, ...]] = []
    w = 0
    while w < len(states):
        state = states[w]
        row = []
        for s in gens:
            nxt = act(state, s)
            v = index.get(nxt)
            if v is None:
                v = len(states)
                if v >= cap:
                    raise CapExceeded(f"{matrix.name or 'group'} has more than {cap} elements")
                index[nxt] = v
                states.append(nxt)
                lengths.append(lengths[w] + 1)
                parent.append(w)
                parent_gen.append(s)
            row.append(v)
        mult.append(tuple(row))
        states[w] = None  # only the index dict is needed from here on
        w += 1
    return CoxeterGroup(matrix, lengths, mult, parent, parent_gen)


def table_parabolic_decompose(group: CoxeterGroup, w: int, J):
    """``(w^J, w_J, word of w_J)`` as indices, by stripping right descents in J."""
    order = sorted(J)
    stripped = []
    lens, mult = group.lengths, group.mult
    while True:
        for s in order:
            v = mult[w][s - 1]
            if lens[v] < lens[w]:
                w = v
                stripped.append(s)
                break
        else:
            break
    word = stripped[::-1]
    return w, group.from_word(word), word


def find_relabeling(matrix: CoxeterMatrix, J, model: GroupDescriptor) -> dict:
    """First bijection J -> generators of ``model`` preserving Coxeter matrix entries."""
    J = sorted(_check_J(matrix, J))
    target = classical_coxeter_matrix(model)
    gens = model.generators
    if len(gens) != len(J):
        raise ValueError(f"|J| = {len(J)} does not match the rank of {model}")
    for image in permutations(gens):
        relabel = dict(zip(J, image))
        if all(matrix.entry(s, t) == target[relabel[s], relabel[t]] for s in J for t in J):
            return relabel
    raise ValueError(f"W_J for J={J} is not isomorphic to {model} as a Coxeter system")


def _validate_relabeling(matrix: CoxeterMatrix, relabel: dict, model: GroupDescriptor):
    target = classical_coxeter_matrix(model)
    if sorted(relabel.values()) != sorted(model.generators):
        raise ValueError("relabeling must be a bijection onto the model generators")
    for s in relabel:
        for t in relabel:
            if matrix.entry(s, t) != target[relabel[s], relabel[t]]:
                raise ValueError(f"relabeling breaks m(s{s}, s{t})")


def generic_induce(group: CoxeterGroup, g: Optional[Statistic], J, relabel: Optional[dict] = None,
                   side: str = "right", validate: bool = True) -> Statistic:
    """``w -> len(w^J) + g(w_J)`` on an enumerated group.

    ``g`` lives on a classical group isomorphic to ``W_J``; ``relabel`` maps
    each generator label in J to a generator index of that group.  ``g=None``
    stands for the length of ``W_J`` itself.
    """
    J = _check_J(group.matrix, J)
    base_name = "len" if g is None else g.name
    name = f"induced:{base_name}:{{{','.join(f's{s}' for s in sorted(J))}}}:{side}"
    if side == "left":
        from .statistics import star
        inner = generic_induce(group, None if g is None else star(g), J, relabel, "right", validate)
        vals = [inner(group.inverse(w)) for w in group.elements()]
        return Statistic(name, vals.__getitem__, group)
    if side != "right":
        raise ValueError(f"side must be 'right' or 'left', not {side!r}")

    to_model = None
    if g is not None:
        model = g.universe
        if not isinstance(model, GroupDescriptor):
            raise ValueError("the inducing statistic must live on a classical group")
        if relabel is None:
            relabel = find_relabeling(group.matrix, J, model)
        else:
            _validate_relabeling(group.matrix, relabel, model)
        from .enumeration import group_order
        if len(group.subgroup(J)) != group_order(model):
            raise ValueError(f"|W_J| does not match |{model}|")
        if validate:
            from .posets import in_same_class
            if not in_same_class(g, base_statistic("len", model)):
                raise ValueError(f"{g.name} is not in the class of the length on {model}")

        def to_model(word):
            w = model.identity()
            for s in word:
                w = _right_gen(w, relabel[s])
            return w

    cache: dict[int, int] = {}
    vals = []
    for w in group.elements():
        q, p, word = table_parabolic_decompose(group, w, J)
        if p not in cache:
            cache[p] = group.lengths[p] if g is None else g(to_model(word))
        vals.append(group.lengths[q] + cache[p])
    return Statistic(name, vals.__getitem__, group)


def _right_gen(w, i):
    from .groups import right_multiply
    return right_multiply(w, i)


def _base_model(base: str, k: int) -> Optional[GroupDescriptor]:
    core = base[:-4] if base.endswith("star") else base
    if core in ("maj", "inv"):
        return GroupDescriptor("A", k + 1)
    if core in ("nmaj", "fmaj"):
        return GroupDescriptor("B", k)
    if core in ("dmaj", "Dmaj"):
        return GroupDescriptor("D", k)
    if core == "len":
        return None
    raise ValueError(f"unknown base statistic {base!r}")


def generic_statistic(name: str, group: CoxeterGroup, validate: bool = True) -> Statistic:
    """Registry lookup on an enumerated group: ``len`` or ``induced:<base>:<J>:<side>``."""
    if name == "len":
        return Statistic("len", group.lengths.__getitem__, group)
    if not name.startswith("induced:"):
        raise ValueError(f"only len and induced statistics exist on {group.name or 'this group'}")
    parts = name.split(":")
    if len(parts) not in (3, 4):
        raise ValueError(f"expected induced:<base>:<J>[:<side>], got {name!r}")
    base, J = parts[1], parts[2]
    side = parts[3] if len(parts) == 4 else "right"
    J = _check_J(group.matrix, J)
    model = _base_model(base, len(J))
    g = None if model is None else base_statistic(base, model)
    return generic_induce(group, g, J, side=side, validate=validate)


def generic_good_decomposition(group: CoxeterGroup, J):
    from .posets import FiniteGradedPoset, GoodDecomposition

    J = _check_J(group.matrix, J)
    facs = [table_parabolic_decompose(group, w, J)[:2] for w in group.elements()]
    a_elems = sorted({q for q, _ in facs})
    b_elems = group.subgroup(J)
    a_idx = {w: i for i, w in enumerate(a_elems)}
    b_idx = {w: i for i, w in enumerate(b_elems)}

    def poset(elems):
        lens = [group.lengths[w] for w in elems]
        top = max(range(len(elems)), key=lens.__getitem__)
        return FiniteGradedPoset(tuple(lens), lens.index(0), top, tuple(elems))

    return GoodDecomposition(poset(list(group.elements())), poset(a_elems), poset(b_elems),
                             tuple((a_idx[q], b_idx[p]) for q, p in facs))
