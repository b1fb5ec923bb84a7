"""Dense, splittable enumeration of S_n, S_n^B and S_n^D.

Index layout: ``index = signbits * n! + lehmer(perm)``.  The Lehmer code is
read most-significant digit first, so the permutation part runs in
lexicographic order; ``signbits`` is little-endian over window positions.
Type D uses ``n - 1`` free sign bits and the sign of the last position is
fixed by parity, so every range stays dense.

Sub-ranges are walked by successor-stepping (next permutation, then the sign
odometer), never by unranking each element.
"""

from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from math import factorial
from typing import Callable, Iterator, Optional

import numpy as np
from numba import njit

from .groups import GroupDescriptor, SignedPermutation

__all__ = [
    "EnumerationRange", "group_order", "unrank", "rank", "iter_range",
    "elements", "default_threads", "run_chunks", "parallel_fold",
    "count_values", "joint_histogram", "value_array", "KERNEL_STATS",
]

INT64_MAX = 2**63 - 1


def group_order(descriptor: GroupDescriptor) -> int:
    n = descriptor.n
    if descriptor.family == "A":
        return factorial(n)
    if descriptor.family == "B":
        return 2**n * factorial(n)
    return 2 ** (n - 1) * factorial(n)


def _sign_bit_count(descriptor: GroupDescriptor) -> int:
    return {"A": 0, "B": descriptor.n, "D": descriptor.n - 1}[descriptor.family]


@dataclass(frozen=True)
class EnumerationRange:
    descriptor: GroupDescriptor
    start: int
    end: int

    def __post_init__(self):
        if not 0 <= self.start <= self.end <= group_order(self.descriptor):
            raise ValueError(f"bad range [{self.start}, {self.end}) for {self.descriptor}")

    @classmethod
    def full(cls, descriptor: GroupDescriptor) -> "EnumerationRange":
        return cls(descriptor, 0, group_order(descriptor))

    def __len__(self):
        return self.end - self.start

    def split(self, parts: int) -> list["EnumerationRange"]:
        size = len(self)
        parts = max(1, min(parts, size)) if size else 1
        bounds = [self.start + size * k // parts for k in range(parts + 1)]
        return [EnumerationRange(self.descriptor, a, b) for a, b in zip(bounds, bounds[1:])]


def _window(perm, bits: int, family: str) -> tuple[int, ...]:
    n = len(perm)
    window = [p if not bits >> i & 1 else -p for i, p in enumerate(perm)]
    if family == "D" and bin(bits).count("1") % 2:
        window[n - 1] = -window[n - 1]
    return tuple(window)


def unrank(descriptor: GroupDescriptor, k: int) -> SignedPermutation:
    order = group_order(descriptor)
    if not 0 <= k < order:
        raise IndexError(f"index {k} out of range for {descriptor} (order {order})")
    n = descriptor.n
    bits, code = divmod(k, factorial(n))
    pool = list(range(1, n + 1))
    perm = []
    for i in range(n):
        digit, code = divmod(code, factorial(n - 1 - i))
        perm.append(pool.pop(digit))
    return SignedPermutation(_window(perm, bits, descriptor.family), descriptor)


def rank(w: SignedPermutation) -> int:
    desc = w.descriptor
    n = desc.n
    perm = [abs(a) for a in w.window]
    code = 0
    for i, p in enumerate(perm):
        smaller = sum(1 for q in perm[i + 1:] if q < p)
        code += smaller * factorial(n - 1 - i)
    free = _sign_bit_count(desc)
    bits = sum(1 << i for i in range(free) if w.window[i] < 0)
    return bits * factorial(n) + code


def _next_permutation(perm: list) -> bool:
    i = len(perm) - 2
    while i >= 0 and perm[i] >= perm[i + 1]:
        i -= 1
    if i < 0:
        perm.reverse()
        return False
    j = len(perm) - 1
    while perm[j] <= perm[i]:
        j -= 1
    perm[i], perm[j] = perm[j], perm[i]
    perm[i + 1:] = reversed(perm[i + 1:])
    return True


def iter_range(rng: EnumerationRange) -> Iterator[SignedPermutation]:
    if not len(rng):
        return
    desc = rng.descriptor
    first = unrank(desc, rng.start)
    perm = [abs(a) for a in first.window]
    bits = rank(first) // factorial(desc.n)
    for _ in range(len(rng)):
        yield SignedPermutation(_window(perm, bits, desc.family), desc)
        if not _next_permutation(perm):
            bits += 1


def elements(descriptor: GroupDescriptor) -> list[SignedPermutation]:
    return list(iter_range(EnumerationRange.full(descriptor)))


# -- parallel folds -------------------------------------------------------------

def default_threads() -> int:
    env = os.environ.get("COXSTAT_THREADS")
    if env:
        return max(1, int(env))
    return os.cpu_count() or 1


def _tree_reduce(parts: list, merge: Callable):
    # fixed fan-in 2, left to right: same tree for the same chunk list
    while len(parts) > 1:
        nxt = [merge(parts[k], parts[k + 1]) for k in range(0, len(parts) - 1, 2)]
        if len(parts) % 2:
            nxt.append(parts[-1])
        parts = nxt
    return parts[0]


def run_chunks(rng: EnumerationRange, chunk_fn: Callable, merge: Callable,
               threads: Optional[int] = None, chunks_per_thread: int = 4):
    """Apply ``chunk_fn`` to sub-ranges in worker threads and tree-reduce the results."""
    threads = threads or default_threads()
    subs = rng.split(threads * chunks_per_thread)
    if threads == 1:
        parts = [chunk_fn(sub) for sub in subs]
    else:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            parts = list(pool.map(chunk_fn, subs))
    return _tree_reduce(parts, merge)


def parallel_fold(rng: EnumerationRange, per_element: Callable, merge: Callable,
                  identity, threads: Optional[int] = None):
    """Fold ``merge`` over ``per_element(w)`` for every ``w`` in the range.

    ``merge`` must be associative and commutative with ``identity`` as its
    neutral element, and must not mutate its arguments.
    """
    def chunk(sub):
        acc = identity
        for w in iter_range(sub):
            acc = merge(acc, per_element(w))
        return acc

    return run_chunks(rng, chunk, merge, threads)


def count_values(rng: EnumerationRange, key: Callable, threads: Optional[int] = None) -> dict:
    """Multiset of ``key(w)`` over the range as a dict ``value -> count``."""
    def chunk(sub):
        acc: dict = {}
        for w in iter_range(sub):
            v = key(w)
            acc[v] = acc.get(v, 0) + 1
        return acc

    def merge(a, b):
        out = dict(a)
        for v, c in b.items():
            out[v] = out.get(v, 0) + c
        return out

    return run_chunks(rng, chunk, merge, threads)


# -- compiled kernels -------------------------------------------------------------

KERNEL_STATS = {
    "len": 0, "inv": 1, "maj": 2, "nmaj": 3, "fmaj": 4, "dmaj": 5, "Dmaj": 6,
    "majstar": 7, "nmajstar": 8, "lenstar": 0, "invstar": 9,
}
_FAMILY_CODE = {"A": 0, "B": 1, "D": 2}


@njit(cache=True, nogil=True)
def _k_inv(w, n):
    c = 0
    for i in range(n):
        wi = w[i]
        for j in range(i + 1, n):
            if wi > w[j]:
                c += 1
    return c


@njit(cache=True, nogil=True)
def _k_maj(w, n):
    c = 0
    for i in range(n - 1):
        if w[i] > w[i + 1]:
            c += i + 1
    return c


@njit(cache=True, nogil=True)
def _k_negsum(w, n):
    s = 0
    for i in range(n):
        if w[i] < 0:
            s += w[i]
    return s


@njit(cache=True, nogil=True)
def _k_negcount(w, n):
    c = 0
    for i in range(n):
        if w[i] < 0:
            c += 1
    return c


@njit(cache=True, nogil=True)
def _k_inverse(w, n, out):
    for i in range(n):
        a = w[i]
        if a > 0:
            out[a - 1] = i + 1
        else:
            out[-a - 1] = -(i + 1)


@njit(cache=True, nogil=True)
def _k_stat(code, fam, w, n, tmp):
    if code == 0:
        v = _k_inv(w, n)
        if fam >= 1:
            v -= _k_negsum(w, n)
        if fam == 2:
            v -= _k_negcount(w, n)
        return v
    if code == 1:
        return _k_inv(w, n)
    if code == 2:
        return _k_maj(w, n)
    if code == 3:
        return _k_maj(w, n) - _k_negsum(w, n)
    if code == 4:
        return 2 * _k_maj(w, n) + _k_negcount(w, n)
    if code == 5:
        return _k_maj(w, n) - _k_negsum(w, n) - _k_negcount(w, n)
    if code == 6:
        last = w[n - 1]
        if last < 0:
            w[n - 1] = -last
        v = 2 * _k_maj(w, n) + _k_negcount(w, n)
        w[n - 1] = last
        return v
    _k_inverse(w, n, tmp)
    if code == 7:
        return _k_maj(tmp, n)
    if code == 8:
        return _k_maj(tmp, n) - _k_negsum(tmp, n)
    return _k_inv(tmp, n)


@njit(cache=True, nogil=True)
def _k_unrank_perm(n, code, perm, facts):
    used = np.zeros(n + 1, np.int64)
    for i in range(n):
        f = facts[n - 1 - i]
        digit = code // f
        code = code % f
        cnt = -1
        for v in range(1, n + 1):
            if used[v] == 0:
                cnt += 1
                if cnt == digit:
                    perm[i] = v
                    used[v] = 1
                    break


@njit(cache=True, nogil=True)
def _k_next_perm(perm, n):
    i = n - 2
    while i >= 0 and perm[i] >= perm[i + 1]:
        i -= 1
    if i < 0:
        for k in range(n // 2):
            t = perm[k]
            perm[k] = perm[n - 1 - k]
            perm[n - 1 - k] = t
        return False
    j = n - 1
    while perm[j] <= perm[i]:
        j -= 1
    t = perm[i]
    perm[i] = perm[j]
    perm[j] = t
    lo = i + 1
    hi = n - 1
    while lo < hi:
        t = perm[lo]
        perm[lo] = perm[hi]
        perm[hi] = t
        lo += 1
        hi -= 1
    return True


@njit(cache=True, nogil=True)
def _k_fill_window(perm, bits, fam, n, w):
    parity = 0
    for i in range(n):
        if (bits >> i) & 1:
            w[i] = -perm[i]
            parity ^= 1
        else:
            w[i] = perm[i]
    if fam == 2 and parity == 1:
        w[n - 1] = -w[n - 1]


@njit(cache=True, nogil=True)
def _k_joint(fam, n, start, end, code_f, code_g, dim, facts):
    hist = np.zeros((dim, dim), np.int64)
    if end <= start:
        return hist
    perm = np.empty(n, np.int64)
    w = np.empty(n, np.int64)
    tmp = np.empty(n, np.int64)
    nf = facts[n]
    bits = start // nf
    _k_unrank_perm(n, start % nf, perm, facts)
    for _ in range(end - start):
        _k_fill_window(perm, bits, fam, n, w)
        a = _k_stat(code_f, fam, w, n, tmp)
        b = _k_stat(code_g, fam, w, n, tmp)
        hist[a, b] += 1
        if not _k_next_perm(perm, n):
            bits += 1
    return hist


@njit(cache=True, nogil=True)
def _k_values(fam, n, start, end, code, facts):
    out = np.empty(end - start, np.int64)
    if end <= start:
        return out
    perm = np.empty(n, np.int64)
    w = np.empty(n, np.int64)
    tmp = np.empty(n, np.int64)
    nf = facts[n]
    bits = start // nf
    _k_unrank_perm(n, start % nf, perm, facts)
    for k in range(end - start):
        _k_fill_window(perm, bits, fam, n, w)
        out[k] = _k_stat(code, fam, w, n, tmp)
        if not _k_next_perm(perm, n):
            bits += 1
    return out


def _kernel_args(descriptor: GroupDescriptor):
    if group_order(descriptor) > INT64_MAX:
        raise OverflowError(f"{descriptor} does not fit 64-bit indices")
    facts = np.array([factorial(k) for k in range(descriptor.n + 1)], dtype=np.int64)
    return _FAMILY_CODE[descriptor.family], descriptor.n, facts


def _code(name: str) -> int:
    try:
        return KERNEL_STATS[name]
    except KeyError:
        raise ValueError(f"no compiled kernel for statistic {name!r}") from None


def joint_histogram(rng: EnumerationRange, stat_f: str, stat_g: str,
                    threads: Optional[int] = None) -> np.ndarray:
    """Counts ``hist[f(w), g(w)]`` over the range for two compiled statistics."""
    fam, n, facts = _kernel_args(rng.descriptor)
    cf, cg = _code(stat_f), _code(stat_g)
    dim = n * n + 2  # every kernel statistic lies in [0, n^2]

    def chunk(sub):
        return _k_joint(fam, n, sub.start, sub.end, cf, cg, dim, facts)

    return run_chunks(rng, chunk, np.add, threads)


def value_array(rng: EnumerationRange, stat: str, threads: Optional[int] = None) -> np.ndarray:
    """Values of a compiled statistic in index order over the range."""
    fam, n, facts = _kernel_args(rng.descriptor)
    code = _code(stat)

    def chunk(sub):
        return [(sub.start, _k_values(fam, n, sub.start, sub.end, code, facts))]

    parts = run_chunks(rng, chunk, lambda a, b: a + b, threads)
    parts.sort(key=lambda p: p[0])
    return np.concatenate([p[1] for p in parts]) if parts else np.empty(0, np.int64)
