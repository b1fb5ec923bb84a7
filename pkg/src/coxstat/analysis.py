"""Exact distributions, image sets, symmetric pairs and involutions.

Everything is integer or rational arithmetic; there are no tolerances.  Sweeps
over classical groups go through the compiled kernels whenever both
statistics have one, otherwise through the pure-Python fold.
"""

from __future__ import annotations

import json
from collections import Counter, defaultdict
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional

import numpy as np

from . import universe as U
from .enumeration import EnumerationRange, count_values, joint_histogram
from .groups import (
    GroupDescriptor, SignedPermutation, compose, inverse, length, neg_set,
    right_descent_set, right_multiply,
)
from .statistics import Statistic, maj

__all__ = [
    "LaurentPoly", "BivariatePoly", "InvolutionMap", "NotSymmetric",
    "WitnessFamilies", "distribution", "joint_distribution", "is_symmetric_pair",
    "is_reciprocal", "sum_image", "diff_image", "k_plus", "k_minus",
    "ratio_sum_check", "build_involution", "lift_involution",
    "descent_class_partition", "sum_image_witnesses", "format_rational",
]


class LaurentPoly:
    """Sparse ``exponent -> coefficient`` map; exponents may be negative."""

    def __init__(self, coeffs=None):
        self.coeffs = {int(e): int(c) for e, c in dict(coeffs or {}).items() if c}

    def __eq__(self, other):
        return isinstance(other, LaurentPoly) and self.coeffs == other.coeffs

    def __hash__(self):
        return hash(frozenset(self.coeffs.items()))

    def __repr__(self):
        return f"LaurentPoly({self.render()})"

    def __getitem__(self, e):
        return self.coeffs.get(e, 0)

    def __add__(self, other):
        out = Counter(self.coeffs)
        out.update(other.coeffs)
        return LaurentPoly(out)

    def total(self) -> int:
        return sum(self.coeffs.values())

    def support(self) -> set:
        return set(self.coeffs)

    def degree(self) -> int:
        return max(self.coeffs)

    def low_degree(self) -> int:
        return min(self.coeffs)

    def render(self, var: str = "q") -> str:
        if not self.coeffs:
            return "0"
        out = []
        for e in sorted(self.coeffs):
            c = self.coeffs[e]
            if e == 0:
                term = str(abs(c))
            else:
                mono = var if e == 1 else f"{var}^{e}"
                term = mono if abs(c) == 1 else f"{abs(c)}{mono}"
            sign = "-" if c < 0 else "+"
            out.append(term if not out and c > 0 else (f"-{term}" if not out else f"{sign}{term}"))
        return "".join(out)

    def to_json(self, var: str = "q") -> dict:
        return {"var": var, "terms": {str(e): str(c) for e, c in sorted(self.coeffs.items())}}

    @classmethod
    def from_json(cls, data) -> "LaurentPoly":
        if isinstance(data, str):
            data = json.loads(data)
        return cls({int(e): int(c) for e, c in data["terms"].items()})


class BivariatePoly:
    """Sparse ``(e_q, e_t) -> coefficient`` map."""

    def __init__(self, coeffs=None):
        self.coeffs = {(int(a), int(b)): int(c) for (a, b), c in dict(coeffs or {}).items() if c}

    def __eq__(self, other):
        return isinstance(other, BivariatePoly) and self.coeffs == other.coeffs

    def __hash__(self):
        return hash(frozenset(self.coeffs.items()))

    def __repr__(self):
        return f"BivariatePoly({len(self.coeffs)} terms)"

    def transpose(self) -> "BivariatePoly":
        return BivariatePoly({(b, a): c for (a, b), c in self.coeffs.items()})

    def marginal(self, axis: int) -> LaurentPoly:
        out: Counter = Counter()
        for key, c in self.coeffs.items():
            out[key[axis]] += c
        return LaurentPoly(out)

    def total(self) -> int:
        return sum(self.coeffs.values())

    def to_json(self, vars=("q", "t")) -> dict:
        return {"vars": list(vars),
                "terms": {f"{a},{b}": str(c) for (a, b), c in sorted(self.coeffs.items())}}

    @classmethod
    def from_json(cls, data) -> "BivariatePoly":
        if isinstance(data, str):
            data = json.loads(data)
        out = {}
        for key, c in data["terms"].items():
            a, b = key.split(",")
            out[int(a), int(b)] = int(c)
        return cls(out)


def _kernel_pair(f: Statistic, g: Statistic) -> bool:
    return (f.kernel is not None and g.kernel is not None
            and isinstance(f.universe, GroupDescriptor) and f.universe == g.universe)


def _hist_to_poly(hist: np.ndarray) -> BivariatePoly:
    a, b = np.nonzero(hist)
    return BivariatePoly({(int(x), int(y)): int(hist[x, y]) for x, y in zip(a, b)})


def joint_distribution(f: Statistic, g: Statistic, threads: Optional[int] = None) -> BivariatePoly:
    """``sum_x q^f(x) t^g(x)``."""
    if f.universe != g.universe:
        raise ValueError("statistics live on different universes")
    uni = f.universe
    if _kernel_pair(f, g):
        return _hist_to_poly(joint_histogram(EnumerationRange.full(uni), f.kernel, g.kernel, threads))
    if isinstance(uni, GroupDescriptor):
        ff, gf = f.func, g.func
        return BivariatePoly(count_values(EnumerationRange.full(uni),
                                          lambda w: (ff(w), gf(w)), threads))
    return BivariatePoly(Counter(zip(U.values(f), U.values(g))))


def distribution(f: Statistic, threads: Optional[int] = None) -> LaurentPoly:
    """``sum_x q^f(x)``."""
    uni = f.universe
    if isinstance(uni, GroupDescriptor):
        if f.kernel is not None:
            hist = joint_histogram(EnumerationRange.full(uni), f.kernel, f.kernel, threads)
            diag = np.diagonal(hist)
            return LaurentPoly({int(e): int(c) for e, c in enumerate(diag) if c})
        return LaurentPoly(count_values(EnumerationRange.full(uni), f.func, threads))
    return LaurentPoly(Counter(U.values(f)))


def is_symmetric_pair(f: Statistic, g: Statistic, threads: Optional[int] = None) -> bool:
    joint = joint_distribution(f, g, threads)
    return joint == joint.transpose()


def is_reciprocal(p: LaurentPoly) -> bool:
    if not p.coeffs:
        raise ValueError("zero polynomial")
    if p.low_degree() < 0:
        raise ValueError("reciprocity is defined for polynomials with nonnegative exponents")
    d = p.degree()
    return all(p[e] == p[d - e] for e in range(d + 1))


def sum_image(f: Statistic, g: Statistic, threads: Optional[int] = None) -> set:
    return {a + b for a, b in joint_distribution(f, g, threads).coeffs}


def diff_image(f: Statistic, g: Statistic, threads: Optional[int] = None) -> set:
    return {a - b for a, b in joint_distribution(f, g, threads).coeffs}


def image_data(joint: BivariatePoly) -> dict:
    """Image sizes and deficiency counts read off one joint distribution."""
    im_f = joint.marginal(0).support()
    im_g = joint.marginal(1).support()
    sums = {a + b for a, b in joint.coeffs}
    diffs = {a - b for a, b in joint.coeffs}
    all_sums = {a + b for a in im_f for b in im_g}
    all_diffs = {a - b for a in im_f for b in im_g}
    return {
        "sum_image": len(sums),
        "diff_image": len(diffs),
        "k_plus": len(all_sums) - len(sums) - 1,
        "k_minus": len(all_diffs) - len(diffs) - 1,
    }


def k_plus(f: Statistic, g: Statistic, threads: Optional[int] = None) -> int:
    return image_data(joint_distribution(f, g, threads))["k_plus"]


def k_minus(f: Statistic, g: Statistic, threads: Optional[int] = None) -> int:
    return image_data(joint_distribution(f, g, threads))["k_minus"]


def ratio_sums(joint: BivariatePoly) -> tuple[Fraction, Fraction]:
    left = sum((Fraction(c * a, b) for (a, b), c in joint.coeffs.items() if b), Fraction(0))
    right = sum((Fraction(c * b, a) for (a, b), c in joint.coeffs.items() if a), Fraction(0))
    return left, right


def ratio_sum_check(f: Statistic, g: Statistic, threads: Optional[int] = None):
    """``(sum_{g!=0} f/g, sum_{f!=0} g/f, equal?)``; equality is necessary for an involution."""
    left, right = ratio_sums(joint_distribution(f, g, threads))
    return left, right, left == right


def format_rational(r: Fraction) -> str:
    return f"{r.numerator}/{r.denominator}"


class NotSymmetric(ValueError):
    """The pair's joint distribution is not swap-invariant."""


@dataclass(frozen=True)
class InvolutionMap:
    mapping: tuple[int, ...]

    def __post_init__(self):
        m = self.mapping
        if sorted(m) != list(range(len(m))) or any(m[m[i]] != i for i in range(len(m))):
            raise ValueError("mapping is not an involution")

    def __call__(self, i: int) -> int:
        return self.mapping[i]

    def __len__(self):
        return len(self.mapping)

    def fixed_points(self) -> list[int]:
        return [i for i, j in enumerate(self.mapping) if i == j]


def build_involution(f: Statistic, g: Statistic) -> InvolutionMap:
    """An involution ``iota`` of the universe indices with ``f = g o iota``.

    Within each value class the i-th smallest index of ``(f, g) = (h, k)`` is
    matched with the i-th smallest index of ``(f, g) = (k, h)``.
    """
    if f.universe != g.universe:
        raise ValueError("statistics live on different universes")
    fv, gv = U.values(f), U.values(g)
    classes = defaultdict(list)
    for x, key in enumerate(zip(fv, gv)):
        classes[key].append(x)
    mapping = list(range(len(fv)))
    for (h, k), xs in classes.items():
        ys = classes.get((k, h), [])
        if len(xs) != len(ys):
            raise NotSymmetric(f"({f.name}, {g.name}) is not a symmetric pair: "
                               f"{len(xs)} elements at ({h},{k}), {len(ys)} at ({k},{h})")
        if h < k:
            for x, y in zip(xs, ys):
                mapping[x], mapping[y] = y, x
    iota = InvolutionMap(tuple(mapping))
    assert all(fv[x] == gv[iota(x)] for x in range(len(fv)))
    return iota


def lift_involution(iota: InvolutionMap, d) -> InvolutionMap:
    """``(a, b) -> (a, iota(b))`` on a good decomposition ``X = A x B``."""
    if not isinstance(iota, InvolutionMap):
        iota = InvolutionMap(tuple(iota))
    if len(iota) != len(d.factor_b):
        raise ValueError("involution does not act on the second factor")
    return InvolutionMap(tuple(d.element(a, iota(b)) for a, b in d.pairs))


_MODES = {"A": "A", "A_descents": "A", "B": "B", "B_descents_and_negs": "B"}


def descent_class_partition(descriptor: GroupDescriptor, mode: str = "A") -> dict:
    """Classes ``D_I`` (type A) or ``D_{I,K}`` (type B) keyed by ``I`` or ``(I, K)``."""
    kind = _MODES.get(mode)
    if kind is None or kind != descriptor.family:
        raise ValueError(f"mode {mode!r} is not available on {descriptor}")
    classes = defaultdict(list)
    for w in U.elements(descriptor):
        if kind == "A":
            key = right_descent_set(w)
        else:
            key = (right_descent_set(w) - {0}, neg_set(inverse(w)))
        classes[key].append(w)
    return dict(classes)


@dataclass
class WitnessFamilies:
    """Families showing that ``len + maj`` takes ``n(n+1) - 1`` values on ``S_{n+1}``."""

    n: int
    U: dict  # (i, j) -> sigma_{i,j}
    J_set: dict  # (i, j) -> psi(sigma_{i,j})
    phi: dict  # (i, j) -> (i', j') with phi(sigma_{i,j}) = sigma_{i',j'}
    claims: dict = field(default_factory=dict)

    @property
    def verified(self) -> bool:
        return all(self.claims.values())


def _sigma(n: int, i: int, j: int) -> tuple[int, ...]:
    out = []
    for k in range(1, n + 2):
        if k > n + 1 - j:
            out.append(k)
        elif k > i:
            out.append(n + 2 - j - k)
        elif k == i:
            out.append(n + 1 - j)
        else:
            out.append(n + 1 - j - k)
    return tuple(out)


def sum_image_witnesses(n: int, check_image: bool = True) -> WitnessFamilies:
    """Build ``sigma_{i,j}``, ``phi`` and ``psi`` and check every claim made about them."""
    if n < 2:
        raise ValueError("witness families need n >= 2")
    G = GroupDescriptor("A", n + 1)
    fams = {(i, j): G.element(_sigma(n, i, j)) for j in range(n) for i in range(1, n - j + 1)}
    lookup = {w: key for key, w in fams.items()}
    w0 = G.longest()

    def lm(w):
        return length(w) + maj(w)

    claims = {}
    claims["U has n(n+1)/2 distinct elements"] = (
        len(lookup) == len(fams) == n * (n + 1) // 2)
    claims["sigma_{1,0} is w_0"] = fams[1, 0] == w0

    phi, phi_formula, phi_len, phi_maj = {}, True, True, True
    for (i, j), w in fams.items():
        if (i, j) == (1, n - 1):
            continue
        v = right_multiply(w, i)
        target = (i + 1, j) if i < n - j else (1, j + 1)
        phi_formula &= fams.get(target) == v
        phi[i, j] = lookup.get(v)
        phi_len &= length(v) == length(w) - 1
        phi_maj &= maj(v) == maj(w) - 1
    claims["phi(sigma_{i,j}) = sigma_{i,j} s_i follows the two-case formula"] = phi_formula
    claims["phi is a bijection U - {sigma_{1,n-1}} -> U - {w_0}"] = (
        None not in phi.values() and set(phi.values()) == set(fams) - {(1, 0)}
        and len(set(phi.values())) == len(phi))
    claims["phi lowers length by 1"] = phi_len
    claims["phi lowers maj by 1"] = phi_maj

    J_set, psi_len, psi_maj = {}, True, True
    for (i, j), w in fams.items():
        if (i, j) in ((1, 0), (2, 0)):
            continue
        gen = n if j == 0 else n + 1 - j
        v = compose(G.generator(gen), w)
        J_set[i, j] = v
        psi_len &= length(v) == length(w) + 1
        psi_maj &= maj(v) == maj(w)
    claims["psi raises length by 1"] = psi_len
    claims["psi preserves maj"] = psi_maj
    claims["psi is injective"] = len(set(J_set.values())) == len(J_set)
    claims["J_n and U_n are disjoint"] = not set(J_set.values()) & set(fams.values())
    claims["len+maj is even on U_n"] = all(lm(w) % 2 == 0 for w in fams.values())
    claims["len+maj is odd on J_n"] = all(lm(w) % 2 == 1 for w in J_set.values())
    witnessed = {lm(w) for w in list(fams.values()) + list(J_set.values())} | {0}
    claims["U_n, J_n, e give n(n+1)-1 distinct values of len+maj"] = (
        len(witnessed) == len(fams) + len(J_set) + 1 == n * (n + 1) - 1)
    if check_image:
        from .statistics import base_statistic
        img = sum_image(base_statistic("len", G), base_statistic("maj", G))
        claims["|Im(len+maj)| = n(n+1)-1 by enumeration"] = len(img) == n * (n + 1) - 1
        claims["witnessed values exhaust Im(len+maj)"] = witnessed == img
    return WitnessFamilies(n, fams, J_set, phi, claims)
