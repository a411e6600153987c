"""Multi-index arithmetic and the cached combinatorial tables behind coefficient storage.

Every coefficient table in this package is indexed by multi-indices in a fixed
graded order: degree ascending, and within a degree by descending lexicographic
comparison of the exponent tuples, so for dimension 2 the order starts
(0,0), (1,0), (0,1), (2,0), (1,1), (0,2).  Positions in this order do not
depend on the truncation degree, so a degree-D table is a prefix of the
degree-D' table for D' > D.  All counting is done in exact integer arithmetic.
"""

from __future__ import annotations

import math
from functools import lru_cache

import numpy as np


class MultiIndex(tuple):
    """Exponent vector of a monomial, one nonnegative entry per coordinate."""

    def __new__(cls, exponents):
        idx = super().__new__(cls, (int(e) for e in exponents))
        if not idx:
            raise ValueError("empty space: dimension must be at least 1")
        for e in idx:
            if e < 0:
                raise ValueError(f"negative exponent in multi-index {tuple(idx)}")
        return idx

    def degree(self) -> int:
        return sum(self)

    def __add__(self, other):
        if len(self) != len(other):
            raise ValueError(
                f"multi-index dimensions differ: {len(self)} vs {len(other)}"
            )
        return MultiIndex(a + b for a, b in zip(self, other))

    def __sub__(self, other):
        if len(self) != len(other):
            raise ValueError(
                f"multi-index dimensions differ: {len(self)} vs {len(other)}"
            )
        return MultiIndex(a - b for a, b in zip(self, other))

    def to_json(self) -> list[int]:
        return list(self)


def _require_dim(dim: int) -> None:
    if dim < 1:
        raise ValueError("empty space: dimension must be at least 1")


def count_indices(dim: int, degree: int) -> int:
    """Number of multi-indices of the given dimension with total degree <= degree."""
    _require_dim(dim)
    if degree < 0:
        raise ValueError("degree must be nonnegative")
    return math.comb(dim + degree, degree)


@lru_cache(maxsize=None)
def indices_of_degree(dim: int, degree: int) -> tuple[MultiIndex, ...]:
    """All multi-indices with total degree exactly `degree`, in graded order.

    Within the fixed degree the order is descending lexicographic, which is
    what makes (1,0) come before (0,1).
    """
    _require_dim(dim)
    if degree < 0:
        raise ValueError("degree must be nonnegative")
    if dim == 1:
        return (MultiIndex((degree,)),)
    out = []
    for first in range(degree, -1, -1):
        for rest in indices_of_degree(dim - 1, degree - first):
            out.append(MultiIndex((first,) + tuple(rest)))
    return tuple(out)


@lru_cache(maxsize=None)
def enumerate_indices(dim: int, max_degree: int) -> tuple[MultiIndex, ...]:
    """All multi-indices with total degree <= max_degree, in graded order."""
    _require_dim(dim)
    out = []
    for k in range(max_degree + 1):
        out.extend(indices_of_degree(dim, k))
    return tuple(out)


@lru_cache(maxsize=None)
def index_positions(dim: int, max_degree: int) -> dict[MultiIndex, int]:
    return {a: i for i, a in enumerate(enumerate_indices(dim, max_degree))}


def position_of(alpha, max_degree: int) -> int:
    a = MultiIndex(alpha)
    pos = index_positions(len(a), max_degree)
    if a not in pos:
        raise ValueError(f"multi-index {tuple(a)} exceeds degree {max_degree}")
    return pos[a]


def multinomial(alpha) -> int:
    """|alpha|! / prod(alpha_i!), the number of orderings of the multiset."""
    a = MultiIndex(alpha)
    out = math.factorial(a.degree())
    for e in a:
        out //= math.factorial(e)
    return out


def binom_componentwise(alpha, beta) -> int:
    """prod_i binom(alpha_i + beta_i, alpha_i).

    This is the coefficient of x^alpha y^beta in (x + y)^(alpha + beta) and the
    structure constant of convolution on coefficient extractors.
    """
    a, b = MultiIndex(alpha), MultiIndex(beta)
    if len(a) != len(b):
        raise ValueError(f"multi-index dimensions differ: {len(a)} vs {len(b)}")
    out = 1
    for x, y in zip(a, b):
        out *= math.comb(x + y, x)
    return out


# ---------------------------------------------------------------------------
# numpy views used by the series engine


@lru_cache(maxsize=None)
def exponent_matrix(dim: int, max_degree: int) -> np.ndarray:
    """Integer array of shape (count, dim); row i is the i-th multi-index."""
    idx = enumerate_indices(dim, max_degree)
    m = np.array([tuple(a) for a in idx], dtype=np.int64)
    m.setflags(write=False)
    return m


@lru_cache(maxsize=None)
def degree_vector(dim: int, max_degree: int) -> np.ndarray:
    v = exponent_matrix(dim, max_degree).sum(axis=1)
    v.setflags(write=False)
    return v


@lru_cache(maxsize=None)
def product_table(dim: int, max_degree: int):
    """Index triples (ia, ib, ic) with alpha_ia + alpha_ib = alpha_ic, all <= max_degree.

    Drives truncated Cauchy products: c[ic] += a[ia] * b[ib].
    """
    pos = index_positions(dim, max_degree)
    ia, ib, ic = [], [], []
    # iterate degree blocks so only pairs under the degree budget are touched
    for da in range(max_degree + 1):
        off_a = count_indices(dim, da - 1) if da else 0
        for db in range(max_degree - da + 1):
            off_b = count_indices(dim, db - 1) if db else 0
            for i, a in enumerate(indices_of_degree(dim, da), start=off_a):
                for j, b in enumerate(indices_of_degree(dim, db), start=off_b):
                    ia.append(i)
                    ib.append(j)
                    ic.append(pos[a + b])
    out = (
        np.array(ia, dtype=np.int64),
        np.array(ib, dtype=np.int64),
        np.array(ic, dtype=np.int64),
    )
    for arr in out:
        arr.setflags(write=False)
    return out


@lru_cache(maxsize=None)
def convolution_table(dim: int, max_degree: int):
    """Like product_table but with the componentwise binomial weight attached."""
    pos = index_positions(dim, max_degree)
    ia, ib, ic, w = [], [], [], []
    for da in range(max_degree + 1):
        off_a = count_indices(dim, da - 1) if da else 0
        for db in range(max_degree - da + 1):
            off_b = count_indices(dim, db - 1) if db else 0
            for i, a in enumerate(indices_of_degree(dim, da), start=off_a):
                for j, b in enumerate(indices_of_degree(dim, db), start=off_b):
                    ia.append(i)
                    ib.append(j)
                    ic.append(pos[a + b])
                    w.append(binom_componentwise(a, b))
    out = (
        np.array(ia, dtype=np.int64),
        np.array(ib, dtype=np.int64),
        np.array(ic, dtype=np.int64),
        np.array(w, dtype=np.float64),
    )
    for arr in out:
        arr.setflags(write=False)
    return out


@lru_cache(maxsize=None)
def derivative_table(dim: int, max_degree: int, coord: int):
    """Gather map for d/dx_coord on a degree-max_degree coefficient table.

    Returns (src, factor): the target coefficient at position t (over the
    degree max_degree - 1 order) is factor[t] * source[src[t]].
    """
    _require_dim(dim)
    if not 0 <= coord < dim:
        raise ValueError(f"coordinate {coord} out of range for dimension {dim}")
    if max_degree < 1:
        return (np.zeros(0, dtype=np.int64), np.zeros(0, dtype=np.float64))
    pos = index_positions(dim, max_degree)
    src, factor = [], []
    unit = MultiIndex(1 if i == coord else 0 for i in range(dim))
    for a in enumerate_indices(dim, max_degree - 1):
        src.append(pos[a + unit])
        factor.append(a[coord] + 1)
    return (np.array(src, dtype=np.int64), np.array(factor, dtype=np.float64))
