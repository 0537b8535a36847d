"""Exact-arithmetic cancellation identities behind the near-resonant bounds.

Both identity sums are evaluated in exact rational arithmetic: a floating
S_8 double sum cannot distinguish a true zero from catastrophic
cancellation.  Integer inputs take a vectorized int64 path (prefix
products stay well below 2^63 for desk-scale inputs) with exact Fraction
aggregation; general rationals fall back to a pure-Fraction loop.
"""

from __future__ import annotations

import itertools
import math
from fractions import Fraction
from functools import lru_cache
from typing import Sequence

import numpy as np

_INT64_GUARD = 2**62


def max_equiv_ratio(x: Sequence[float]) -> tuple[float, float]:
    """(ratio, ratio) of max |prefix sum| to max |entry|.

    The two maxima are comparable: the ratio always lies in
    [1/(2n), n].  Returned as a (lo, hi) pair of the same value so the
    call site reads like an interval check.
    """
    xs = list(x)
    if not xs:
        raise ValueError("empty list")
    entry_max = max(abs(v) for v in xs)
    if entry_max == 0:
        raise ValueError("all-zero list")
    prefix_max = max(abs(v) for v in itertools.accumulate(xs))
    ratio = prefix_max / entry_max
    return (ratio, ratio)


@lru_cache(maxsize=16)
def _perm_matrix(n: int) -> np.ndarray:
    return np.array(list(itertools.permutations(range(n))), dtype=np.int64)


def _aggregate_exact(products: np.ndarray) -> Fraction:
    """Exact sum of 1/p over an int64 array of nonzero products."""
    vals, counts = np.unique(products, return_counts=True)
    total = Fraction(0)
    for v, k in zip(vals.tolist(), counts.tolist()):
        total += Fraction(int(k), int(v))
    return total


def zero_sum_identity(a: Sequence) -> Fraction:
    """Sum over all permutations of 1/(a_s(1)...a_s(N-1)), skipped terms
    dropped (any zero factor or vanishing partial sum up to N-1).

    Exactly zero whenever sum(a) = 0; for other inputs the exact value is
    returned as-is.
    """
    vals = [Fraction(v) for v in a]
    n = len(vals)
    if n < 2:
        raise ValueError("need N >= 2")
    if all(v.denominator == 1 for v in vals):
        ints = [int(v) for v in vals]
        if (sum(abs(v) for v in ints) or 1) ** (n - 1) < _INT64_GUARD:
            return _zero_sum_int(ints)
    return _zero_sum_fractions(vals)


def _zero_sum_int(a: list[int]) -> Fraction:
    arr = np.array(a, dtype=np.int64)
    perms = _perm_matrix(len(a))
    pa = arr[perms]
    prefix = np.cumsum(pa, axis=1)
    head = pa[:, :-1]
    head_prefix = prefix[:, :-1]
    valid = np.all(head != 0, axis=1) & np.all(head_prefix != 0, axis=1)
    if not np.any(valid):
        return Fraction(0)
    products = np.prod(head[valid], axis=1)
    return _aggregate_exact(products)


def _zero_sum_fractions(a: list[Fraction]) -> Fraction:
    n = len(a)
    total = Fraction(0)
    for perm in itertools.permutations(a):
        prod = Fraction(1)
        partial = Fraction(0)
        ok = True
        for i in range(n - 1):
            v = perm[i]
            partial += v
            if v == 0 or partial == 0:
                ok = False
                break
            prod *= v
        if ok:
            total += 1 / prod
    return total


def _block_boundaries(pi: Sequence[int]) -> list[int]:
    return list(itertools.accumulate(pi))


def multiset_perms(K: Sequence[int]) -> list[tuple[int, ...]]:
    """Distinct arrangements of the multiset K."""
    return sorted(set(itertools.permutations(sorted(K))))


def multiset_cancellation(K: Sequence[int], xi: Sequence) -> Fraction:
    """Symmetrized block-prefix sum over S_M x Perm(K).

    Blocks of sizes pi(1..N) partition the permuted xi; each summand is
    1/(X_1 (X_1+X_2) ... (X_1+...+X_{N-1})) with X_i the block sums,
    skipping terms with a zero block or zero prefix.  Exactly zero when
    sum(xi) = 0 and N >= 2.
    """
    sizes = list(K)
    m = sum(sizes)
    vals = [Fraction(v) for v in xi]
    if len(vals) != m:
        raise ValueError(f"expected {m} entries for multiset {sizes}, got {len(vals)}")
    arrangements = multiset_perms(sizes)
    if all(v.denominator == 1 for v in vals):
        ints = [int(v) for v in vals]
        if (sum(abs(v) for v in ints) or 1) ** (len(sizes) - 1) < _INT64_GUARD:
            return _multiset_int(arrangements, ints)
    return _multiset_fractions(arrangements, vals)


def _multiset_int(arrangements, xi: list[int]) -> Fraction:
    m = len(xi)
    arr = np.array(xi, dtype=np.int64)
    perms = _perm_matrix(m)
    permuted = np.cumsum(arr[perms], axis=1)  # row-wise prefix sums of sigma.xi
    total = Fraction(0)
    n = len(arrangements[0])
    for pi in arrangements:
        bounds = _block_boundaries(pi)
        prefix = permuted[:, [b - 1 for b in bounds]]  # X_1, X_1+X_2, ...
        blocks = np.diff(prefix, axis=1, prepend=0)
        head_prefix = prefix[:, : n - 1]
        head_blocks = blocks[:, : n - 1]
        valid = np.all(head_blocks != 0, axis=1) & np.all(head_prefix != 0, axis=1)
        if not np.any(valid):
            continue
        # n == 1 degenerates to the empty product: each valid row adds 1
        products = np.prod(head_prefix[valid], axis=1)
        total += _aggregate_exact(products)
    return total


def _multiset_fractions(arrangements, xi: list[Fraction]) -> Fraction:
    m = len(xi)
    total = Fraction(0)
    n = len(arrangements[0])
    for sigma in itertools.permutations(range(m)):
        permuted = [xi[i] for i in sigma]
        prefix_all = list(itertools.accumulate(permuted))
        for pi in arrangements:
            bounds = _block_boundaries(pi)
            prod = Fraction(1)
            ok = True
            prev = Fraction(0)
            for i in range(n - 1):
                p = prefix_all[bounds[i] - 1]
                if p == 0 or p - prev == 0:
                    ok = False
                    break
                prev = p
                prod *= p
            if ok:
                total += 1 / prod
    return total


def all_multisets_up_to(max_total: int, min_part: int = 2) -> list[tuple[int, ...]]:
    """Multisets {k_1..k_N} with parts >= min_part, N >= 2, sum <= max_total."""
    out = []

    def rec(smallest, remaining, acc):
        for k in range(smallest, remaining + 1):
            cand = acc + [k]
            if len(cand) >= 2:
                out.append(tuple(cand))
            if remaining - k >= k:
                rec(k, remaining - k, cand)

    rec(min_part, max_total, [])
    return sorted(out, key=lambda t: (sum(t), t))
