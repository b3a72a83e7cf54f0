"""Integral weights of GL(k,C) and the Bott-Borel-Weil reduction.

Conventions, fixed once and used everywhere in this package:

* a weight is a tuple of integers (w_1, ..., w_k), one entry per
  coordinate line in C^k;
* *dominant* means nondecreasing, w_1 <= w_2 <= ... <= w_k;
* the half-sum shift is rho = (0, 1, ..., k-1), so w is nonsingular
  exactly when w + rho has pairwise distinct entries.

With these choices the affine Weyl action needed for Bott-Borel-Weil is
just "sort w + rho, remembering how disordered it was": the cohomology
degree is the inversion count of w + rho and the resulting dominant
weight is sorted(w + rho) - rho.
"""

from __future__ import annotations

from itertools import combinations

Weight = tuple[int, ...]

__all__ = [
    "Weight",
    "SINGULAR",
    "Singular",
    "rho",
    "inversions",
    "is_dominant",
    "bbw_reduce",
    "max_degree",
]


class Singular:
    """Marker for weights killed by the affine Weyl action.

    A single shared instance, ``SINGULAR``, is used everywhere; it is
    falsy so that ``if reduced := bbw_reduce(w):`` keeps only the
    nonsingular branch (a genuine result ``(q, dominant)`` is a nonempty
    tuple, hence truthy).
    """

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self) -> str:
        return "Singular"

    def __bool__(self) -> bool:
        return False


SINGULAR = Singular()


def rho(k: int) -> Weight:
    """The dominance shift (0, 1, ..., k-1) for GL(k,C)."""
    return tuple(range(k))


def inversions(w: Weight) -> int:
    """Number of pairs i < j with w[i] > w[j].

    This is the length of the unique permutation sorting ``w`` into
    nondecreasing order; entries must be pairwise distinct, otherwise
    "the" sorting permutation is ambiguous and we raise.
    """
    if len(set(w)) != len(w):
        raise ValueError(f"inversions undefined for repeated entries: {w}")
    return sum(1 for (a, b) in combinations(w, 2) if a > b)


def is_dominant(w: Weight) -> bool:
    """True iff the entries are nondecreasing."""
    return all(a <= b for a, b in zip(w, w[1:]))


def bbw_reduce(w: Weight, k: int | None = None) -> Singular | tuple[int, Weight]:
    """Bott-Borel-Weil reduction of a GL(k,C) weight.

    Returns ``SINGULAR`` when w + rho has a repeated entry, and otherwise
    the pair ``(q, dominant)`` where q is the inversion count of w + rho
    and ``dominant`` is the unique dominant weight in the affine Weyl
    orbit: sorted(w + rho) - rho.

    ``k`` is accepted for explicitness but must equal ``len(w)``.
    """
    if k is None:
        k = len(w)
    if k != len(w):
        raise ValueError(f"weight {w} does not have {k} entries")
    shifted = tuple(a + i for i, a in enumerate(w))
    if len(set(shifted)) != k:
        return SINGULAR
    q = inversions(shifted)
    dominant = tuple(a - i for i, a in enumerate(sorted(shifted)))
    return q, dominant


def max_degree(k: int) -> int:
    """Largest cohomology degree bbw_reduce can produce: C(k,2) inversions."""
    return k * (k - 1) // 2
