"""Signed permutations realizing the Coxeter groups of type A, B and D.

Elements are stored in window notation ``(w(1), ..., w(n))``.  Products follow
the convention ``(uv)(i) = u(v(i))``, so right multiplication by a simple
generator acts on positions and left multiplication acts on values:

* ``s_i`` (``i >= 1``) is the window ``(1, ..., i+1, i, ..., n)``;
* ``s_0`` in type B is ``(-1, 2, ..., n)``;
* ``s_0`` in type D is ``(-2, -1, 3, ..., n)``.

Type A on window ``n`` is the Coxeter system ``A_{n-1}`` on ``S_n`` with
generators ``s_1 .. s_{n-1}``.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, Optional

__all__ = [
    "GroupDescriptor", "SignedPermutation", "CosetFactorization",
    "compose", "inverse", "inv_count", "neg_set", "length",
    "right_descent_set", "left_descent_set", "right_multiply", "left_multiply",
    "parabolic_decompose", "left_parabolic_decompose", "parse_generator_set",
    "format_generator_set", "reflections", "reflection_length_oracle",
    "inversion_reflections", "subgroup_elements", "coxeter_matrix",
]

FAMILIES = ("A", "B", "D")


@dataclass(frozen=True)
class GroupDescriptor:
    family: str
    n: int

    def __post_init__(self):
        if self.family not in FAMILIES:
            raise ValueError(f"unknown family {self.family!r}")
        if self.n < 1:
            raise ValueError("window size must be positive")
        if self.family == "D" and self.n < 2:
            raise ValueError("type D needs window size >= 2")

    @classmethod
    def parse(cls, text: str) -> "GroupDescriptor":
        """Parse ``"A:4"``, ``"B:3"`` or ``"D:4"``."""
        family, _, n = text.strip().partition(":")
        if not n:
            raise ValueError(f"bad group descriptor {text!r}")
        return cls(family.strip().upper(), int(n))

    def __str__(self):
        return f"{self.family}:{self.n}"

    @property
    def generators(self) -> tuple[int, ...]:
        start = 1 if self.family == "A" else 0
        return tuple(range(start, self.n))

    @property
    def coxeter_rank(self) -> int:
        return len(self.generators)

    def identity(self) -> "SignedPermutation":
        return SignedPermutation(tuple(range(1, self.n + 1)), self)

    def longest(self) -> "SignedPermutation":
        n = self.n
        if self.family == "A":
            return SignedPermutation(tuple(range(n, 0, -1)), self)
        window = [-i for i in range(1, n + 1)]
        if self.family == "D" and n % 2 == 1:
            window[0] = 1
        return SignedPermutation(tuple(window), self)

    def generator(self, i: int) -> "SignedPermutation":
        if i not in self.generators:
            raise ValueError(f"s_{i} is not a generator of {self}")
        window = list(range(1, self.n + 1))
        if i >= 1:
            window[i - 1], window[i] = window[i], window[i - 1]
        elif self.family == "B":
            window[0] = -1
        else:
            window[0], window[1] = -2, -1
        return SignedPermutation(tuple(window), self)

    def element(self, window) -> "SignedPermutation":
        if isinstance(window, str):
            window = [int(tok) for tok in window.replace("(", "").replace(")", "").split(",")]
        return SignedPermutation(tuple(window), self)


@dataclass(frozen=True)
class SignedPermutation:
    window: tuple[int, ...]
    descriptor: GroupDescriptor

    def __post_init__(self):
        window, desc = self.window, self.descriptor
        if len(window) != desc.n:
            raise ValueError(f"window {window} has wrong size for {desc}")
        if sorted(abs(a) for a in window) != list(range(1, desc.n + 1)):
            raise ValueError(f"{window} is not a signed permutation")
        negs = sum(1 for a in window if a < 0)
        if desc.family == "A" and negs:
            raise ValueError("type A windows must be positive")
        if desc.family == "D" and negs % 2:
            raise ValueError("type D windows need an even number of negative entries")

    def __call__(self, i: int) -> int:
        if i > 0:
            return self.window[i - 1]
        return -self.window[-i - 1]

    def __len__(self):
        return len(self.window)

    def __iter__(self):
        return iter(self.window)

    def __str__(self):
        return ",".join(str(a) for a in self.window)

    def __repr__(self):
        return f"{self.descriptor}({self})"


@dataclass(frozen=True)
class CosetFactorization:
    """``w = w_quotient * w_parabolic`` with ``w_quotient`` in ``W^J``."""

    w_quotient: SignedPermutation
    w_parabolic: SignedPermutation
    subset_J: frozenset

    def restricted(self) -> Optional[SignedPermutation]:
        """The parabolic factor inside the smaller classical group, if J has prefix form."""
        model = parabolic_model(self.w_parabolic.descriptor, self.subset_J)
        if model is None:
            return None
        return SignedPermutation(self.w_parabolic.window[: model.n], model)


def _check_same(u: SignedPermutation, v: SignedPermutation):
    if u.descriptor != v.descriptor:
        raise ValueError(f"descriptor mismatch: {u.descriptor} vs {v.descriptor}")


def compose(u: SignedPermutation, v: SignedPermutation) -> SignedPermutation:
    _check_same(u, v)
    uw = u.window
    out = tuple(uw[a - 1] if a > 0 else -uw[-a - 1] for a in v.window)
    return SignedPermutation(out, u.descriptor)


def inverse(w: SignedPermutation) -> SignedPermutation:
    out = [0] * len(w.window)
    for i, a in enumerate(w.window, 1):
        if a > 0:
            out[a - 1] = i
        else:
            out[-a - 1] = -i
    return SignedPermutation(tuple(out), w.descriptor)


def inv_count(w) -> int:
    seq = tuple(w)
    n = len(seq)
    return sum(1 for i in range(n) for j in range(i + 1, n) if seq[i] > seq[j])


def neg_set(w) -> frozenset:
    return frozenset(i for i, a in enumerate(w, 1) if a < 0)


def length(w: SignedPermutation) -> int:
    family = w.descriptor.family
    inv = inv_count(w)
    if family == "A":
        return inv
    negs = [a for a in w.window if a < 0]
    if family == "B":
        return inv - sum(negs)
    return inv - sum(negs) - len(negs)


def _has_right_descent(window, family: str, i: int) -> bool:
    if i >= 1:
        return window[i - 1] > window[i]
    if family == "B":
        return window[0] < 0
    return window[0] + window[1] < 0


def right_descent_set(w: SignedPermutation) -> frozenset:
    fam = w.descriptor.family
    return frozenset(i for i in w.descriptor.generators if _has_right_descent(w.window, fam, i))


def left_descent_set(w: SignedPermutation) -> frozenset:
    return right_descent_set(inverse(w))


def right_multiply(w: SignedPermutation, i: int) -> SignedPermutation:
    """``w * s_i``: acts on positions of the window."""
    window = list(w.window)
    if i >= 1:
        window[i - 1], window[i] = window[i], window[i - 1]
    elif w.descriptor.family == "B":
        window[0] = -window[0]
    else:
        window[0], window[1] = -window[1], -window[0]
    return SignedPermutation(tuple(window), w.descriptor)


def left_multiply(i: int, w: SignedPermutation) -> SignedPermutation:
    """``s_i * w``: acts on values of the window."""
    return compose(w.descriptor.generator(i), w)


def parse_generator_set(text, descriptor: Optional[GroupDescriptor] = None) -> frozenset:
    """Parse ``"{s1,s2}"``, ``"s0,s1"`` or ``"1,2"`` into generator indices."""
    if not isinstance(text, str):
        J = frozenset(int(j) for j in text)
    else:
        body = text.strip().strip("{}").strip()
        J = frozenset(int(tok.strip().lstrip("sS")) for tok in body.split(",") if tok.strip())
    if descriptor is not None and not J <= set(descriptor.generators):
        raise ValueError(f"{sorted(J)} is not a subset of the generators of {descriptor}")
    return J


def format_generator_set(J) -> str:
    return "{" + ",".join(f"s{j}" for j in sorted(J)) + "}"


def parabolic_model(descriptor: GroupDescriptor, J) -> Optional[GroupDescriptor]:
    """Classical group that ``W_J`` is when J is ``{s_1..s_k}`` or ``{s_0..s_k}``."""
    J = frozenset(J)
    if not J:
        return GroupDescriptor("A", 1)
    k = max(J)
    if 0 not in J:
        if J == frozenset(range(1, k + 1)):
            return GroupDescriptor("A", k + 1)
        return None
    if J != frozenset(range(0, k + 1)):
        return None
    if descriptor.family == "B":
        return GroupDescriptor("B", k + 1)
    if descriptor.family == "D" and k >= 1:
        return GroupDescriptor("D", k + 1)
    return None


def _position_blocks(n: int, J) -> list[tuple[int, int]]:
    """Maximal runs of positions glued by the generators s_i (i >= 1) in J."""
    blocks, start = [], 0
    for i in range(1, n):
        if i not in J:
            blocks.append((start, i))
            start = i
    blocks.append((start, n))
    return blocks


def parabolic_decompose(w: SignedPermutation, J) -> CosetFactorization:
    desc = w.descriptor
    J = parse_generator_set(J, desc)
    if 0 not in J:
        # generators s_i, i >= 1, permute positions: sort each block
        window = list(w.window)
        for lo, hi in _position_blocks(desc.n, J):
            window[lo:hi] = sorted(window[lo:hi])
        quotient = SignedPermutation(tuple(window), desc)
        parabolic = compose(inverse(quotient), w)
        return CosetFactorization(quotient, parabolic, J)
    quotient, stripped = _strip_right(w, J)
    parabolic = desc.identity()
    for i in reversed(stripped):
        parabolic = right_multiply(parabolic, i)
    return CosetFactorization(quotient, parabolic, J)


def _strip_right(w: SignedPermutation, J):
    stripped = []
    order = sorted(J)
    fam = w.descriptor.family
    while True:
        for i in order:
            if _has_right_descent(w.window, fam, i):
                w = right_multiply(w, i)
                stripped.append(i)
                break
        else:
            return w, stripped


def left_parabolic_decompose(w: SignedPermutation, J):
    """Return ``(w_J', ^J w)`` with ``w = w_J' * ^J w`` by stripping left descents."""
    desc = w.descriptor
    J = parse_generator_set(J, desc)
    stripped = []
    v = w
    while True:
        hits = sorted(J & left_descent_set(v))
        if not hits:
            break
        v = left_multiply(hits[0], v)
        stripped.append(hits[0])
    parabolic = desc.identity()
    for i in stripped:
        parabolic = right_multiply(parabolic, i)
    return parabolic, v


def coxeter_matrix(descriptor: GroupDescriptor) -> dict:
    """Coxeter matrix entries ``m(s_i, s_j)`` keyed by generator index pairs."""
    gens = descriptor.generators
    m = {}
    for i in gens:
        for j in gens:
            if i == j:
                v = 1
            elif 0 not in (i, j):
                v = 3 if abs(i - j) == 1 else 2
            else:
                other = j if i == 0 else i
                if descriptor.family == "B":
                    v = 4 if other == 1 else 2
                else:
                    v = 3 if other == 2 else 2
            m[i, j] = v
    return m


# -- brute-force oracle: word length by BFS, reflections as conjugates ---------

DEFAULT_ORACLE_CAP = 50_000


@lru_cache(maxsize=16)
def _cayley_bfs(descriptor: GroupDescriptor, cap: int) -> dict:
    ident = descriptor.identity()
    dist = {ident: 0}
    queue = deque([ident])
    while queue:
        w = queue.popleft()
        for i in descriptor.generators:
            v = compose(w, descriptor.generator(i))
            if v not in dist:
                dist[v] = dist[w] + 1
                if len(dist) > cap:
                    raise ValueError(f"{descriptor} exceeds the brute-force cap {cap}")
                queue.append(v)
    return dist


def subgroup_elements(descriptor: GroupDescriptor, J) -> list[SignedPermutation]:
    """All elements of ``W_J`` by closure under the generators in J."""
    J = parse_generator_set(J, descriptor)
    ident = descriptor.identity()
    seen = {ident}
    order = [ident]
    queue = deque([ident])
    while queue:
        w = queue.popleft()
        for i in sorted(J):
            v = right_multiply(w, i)
            if v not in seen:
                seen.add(v)
                order.append(v)
                queue.append(v)
    return order


@lru_cache(maxsize=16)
def reflections(descriptor: GroupDescriptor, cap: int = DEFAULT_ORACLE_CAP) -> frozenset:
    out = set()
    for u in _cayley_bfs(descriptor, cap):
        uinv = inverse(u)
        for i in descriptor.generators:
            out.add(compose(compose(u, descriptor.generator(i)), uinv))
    return frozenset(out)


def inversion_reflections(w: SignedPermutation, cap: int = DEFAULT_ORACLE_CAP) -> frozenset:
    """``{t in T : wt < w}``, with lengths taken from the Cayley graph."""
    dist = _cayley_bfs(w.descriptor, cap)
    lw = dist[w]
    return frozenset(t for t in reflections(w.descriptor, cap) if dist[compose(w, t)] < lw)


def reflection_length_oracle(w: SignedPermutation, cap: int = DEFAULT_ORACLE_CAP) -> int:
    return len(inversion_reflections(w, cap))


def word_length(w: SignedPermutation, cap: int = DEFAULT_ORACLE_CAP) -> int:
    """Length as distance from the identity in the Cayley graph."""
    return _cayley_bfs(w.descriptor, cap)[w]


def all_generator_sets(descriptor: GroupDescriptor) -> Iterable[frozenset]:
    gens = descriptor.generators
    for mask in range(1 << len(gens)):
        yield frozenset(g for b, g in enumerate(gens) if mask >> b & 1)
