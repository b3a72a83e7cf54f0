"""Irreducible homogeneous bundles and filtered bundles on flag quotients.

An irreducible bundle is recorded by its *label*: a tuple of integers
split into blocks by the flag type, nondecreasing inside each block
(our dominance convention; see weights.py).  The spaces in play:

==========  ===========  =====================================
space tag   blocks       printed shape (n = 3)
==========  ===========  =====================================
``"M"``     (1, n)       (a||b,c,d)
``"X"``     (1,1,...,1)  (a||b|c|d)      full flag when n <= 3
``"Z"``     (1, n-1, 1)  (a|b,c|d)
``"fiber"`` (k,)         (b,c,d)         plain GL(k) weight
==========  ===========  =====================================

The ``||`` after the first entry marks the distinguished line of the
ambient space; the twistor space Z is written without it.

Reducible but filtered bundles (relative cotangent bundles and their
wedge powers) are ``FilteredBundle``s: an ordered factor list — top
quotient first, deepest subbundle last — with each factor assigned a
direct-summand component and a filtration level inside its component.
Between consecutive factors of one component a level step of +1 is the
composition-series adjacency written ``A + B`` (B the subbundle);
everything else is a genuine ``(+)`` direct sum.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations

from .notation import format_entries, parse_label
from .weights import is_dominant

__all__ = [
    "BundleLabel",
    "FilteredBundle",
    "m_label",
    "x_label",
    "z_label",
    "fiber_label",
    "trivial_label",
    "label_from_string",
    "rank",
    "dual",
    "is_line",
    "tensor_line",
    "pieri_tensor",
    "branch_to_torus",
    "exterior_power",
]

# Spaces whose printed form puts '||' after the first entry.
_DOUBLE_BAR_SPACES = frozenset({"M", "X"})
_SPACES = frozenset({"M", "X", "Z", "fiber"})


@dataclass(frozen=True, order=True)
class BundleLabel:
    """An irreducible homogeneous bundle, named by its blocked weight."""

    space: str
    blocks: tuple[int, ...]
    weight: tuple[int, ...]

    def __post_init__(self):
        if self.space not in _SPACES:
            raise ValueError(f"unknown space tag {self.space!r}")
        if sum(self.blocks) != len(self.weight) or any(s < 1 for s in self.blocks):
            raise ValueError(f"blocks {self.blocks} do not fit weight {self.weight}")
        for lo, hi in _block_spans(self.blocks):
            if not is_dominant(self.weight[lo:hi]):
                raise ValueError(
                    f"entries must be nondecreasing within each block: {self.weight}"
                    f" with blocks {self.blocks}"
                )

    @property
    def n(self) -> int:
        """Ambient rank minus one: the label lives over a quotient of GL(n+1)."""
        return len(self.weight) - 1

    def __str__(self) -> str:
        return format_entries(self.weight, self.blocks, self.space in _DOUBLE_BAR_SPACES)

    def __repr__(self) -> str:
        return f"<{self.space} {self}>"


def _block_spans(blocks: tuple[int, ...]):
    start = 0
    for size in blocks:
        yield start, start + size
        start += size


def _x_blocks(n: int) -> tuple[int, ...]:
    # Full-flag shape for n <= 3; for larger n the correspondence space
    # keeps a block of size n-2 in the middle of its last three blocks.
    return (1,) * (n + 1) if n <= 3 else (1, 1, n - 2, 1)


def m_label(weight) -> BundleLabel:
    w = tuple(weight)
    return BundleLabel("M", (1, len(w) - 1), w)


def x_label(weight) -> BundleLabel:
    w = tuple(weight)
    return BundleLabel("X", _x_blocks(len(w) - 1), w)


def z_label(weight) -> BundleLabel:
    w = tuple(weight)
    return BundleLabel("Z", (1, len(w) - 2, 1), w)


def fiber_label(weight) -> BundleLabel:
    w = tuple(weight)
    return BundleLabel("fiber", (len(w),), w)


def trivial_label(space: str, n: int) -> BundleLabel:
    zero = (0,) * (n + 1)
    return {"M": m_label, "X": x_label, "Z": z_label}[space](zero)


_CONSTRUCTORS = {"M": m_label, "X": x_label, "Z": z_label, "fiber": fiber_label}


def label_from_string(text: str, space: str) -> BundleLabel:
    """Parse a label string and place it on the named space.

    The block structure implied by the separators must agree with the
    space's own; this catches e.g. an M-style label handed to the
    twistor space.
    """
    parsed = parse_label(text)
    lab = _CONSTRUCTORS[space](parsed.weight)
    want_bar = space in _DOUBLE_BAR_SPACES
    if parsed.blocks != lab.blocks or (parsed.double_bar != want_bar and len(parsed.blocks) > 1):
        raise ValueError(
            f"{text!r} has blocks {parsed.blocks}"
            f"{' with ||' if parsed.double_bar else ''}, "
            f"but space {space} wants {lab.blocks}{' with ||' if want_bar else ''}"
        )
    return lab


# ---------------------------------------------------------------- rank

def _weyl_rank(mu: tuple[int, ...]) -> int:
    """Dimension of the GL(m) irreducible with nondecreasing weight mu.

    Weyl dimension formula over the positive roots of GL(m); exact by
    Fraction arithmetic (the product is an integer, but intermediate
    partial products need not be).
    """
    m = len(mu)
    dim = Fraction(1)
    for i in range(m):
        for j in range(i + 1, m):
            dim *= Fraction(mu[j] - mu[i] + j - i, j - i)
    assert dim.denominator == 1 and dim > 0, mu
    return int(dim)


def rank(b) -> int:
    """Rank of a BundleLabel or a FilteredBundle (sum over factors)."""
    if isinstance(b, FilteredBundle):
        return sum(rank(f) for f in b.factors)
    return _prod(_weyl_rank(b.weight[lo:hi]) for lo, hi in _block_spans(b.blocks))


def _prod(xs) -> int:
    out = 1
    for x in xs:
        out *= x
    return out


def is_line(b: BundleLabel) -> bool:
    """Rank one <=> the weight is constant on every block."""
    return all(
        len(set(b.weight[lo:hi])) == 1 for lo, hi in _block_spans(b.blocks)
    )


def dual(b: BundleLabel) -> BundleLabel:
    """Dual bundle: negate and reverse the weight inside each block."""
    w = list(b.weight)
    for lo, hi in _block_spans(b.blocks):
        w[lo:hi] = [-x for x in reversed(w[lo:hi])]
    return BundleLabel(b.space, b.blocks, tuple(w))


def tensor_line(a: BundleLabel, b: BundleLabel) -> BundleLabel:
    """Tensor product when at least one factor is a line bundle.

    This is the only tensor that stays irreducible for free: the line
    bundle just shifts the weight entrywise.
    """
    if a.space != b.space or a.blocks != b.blocks:
        raise ValueError(f"cannot tensor labels on different spaces: {a!r} vs {b!r}")
    if not (is_line(a) or is_line(b)):
        raise ValueError(f"neither {a} nor {b} is a line bundle; use pieri_tensor")
    return BundleLabel(a.space, a.blocks, tuple(x + y for x, y in zip(a.weight, b.weight)))


# ------------------------------------------------------- Pieri tensor

def pieri_tensor(b: BundleLabel) -> list[BundleLabel]:
    """Constituents of b tensored with the rank-2n cotangent generator sum.

    On the base the two generating line-bundle directions contribute,
    for a label (a || mu), the terms (a+1 || mu - e_i) and
    (a-1 || mu + e_i) over all coordinates i keeping mu dominant.  The
    decomposition is multiplicity-free (Pieri for a fundamental weight),
    and total rank is conserved: 2n * rank(b).
    """
    if b.space != "M":
        raise ValueError(f"pieri_tensor expects a base-space label, got {b!r}")
    a, mu = b.weight[0], list(b.weight[1:])
    out: set[tuple[int, ...]] = set()
    for i in range(len(mu)):
        for da, dmu in ((1, -1), (-1, 1)):
            cand = mu.copy()
            cand[i] += dmu
            if is_dominant(tuple(cand)):
                out.add((a + da, *cand))
    return [m_label(w) for w in sorted(out)]


# -------------------------------------------- Gelfand-Tsetlin branching

def branch_to_torus(mu: tuple[int, ...]) -> Counter:
    """Torus weight multiset of the GL(m) irreducible with weight mu.

    Enumerates Gelfand-Tsetlin patterns: rows interleave downwards, and
    the j-th weight entry is (sum of row j) - (sum of row j-1).  The
    multiset is Weyl-invariant, so the nondecreasing input is read in
    reverse (conventional nonincreasing top row) without loss.
    """
    mu = tuple(mu)
    if not is_dominant(mu):
        raise ValueError(f"weight must be dominant (nondecreasing): {mu}")
    top = tuple(reversed(mu))
    out: Counter = Counter()

    def descend(row: tuple[int, ...], partial: tuple[int, ...]):
        if len(row) == 1:
            out[partial + (row[0],)] += 1
            return
        total = sum(row)
        for nxt in _interleavings(row):
            descend(nxt, partial + (total - sum(nxt),))

    # weight entries come out last-coordinate-first; reverse at the end
    def _interleavings(row: tuple[int, ...]):
        ranges = [range(row[i + 1], row[i] + 1) for i in range(len(row) - 1)]
        def rec(i: int, acc: list[int]):
            if i == len(ranges):
                yield tuple(acc)
                return
            for v in ranges[i]:
                if not acc or v <= acc[-1]:
                    acc.append(v)
                    yield from rec(i + 1, acc)
                    acc.pop()
        yield from rec(0, [])

    descend(top, ())
    return Counter({tuple(reversed(w)): c for w, c in out.items()})


# ------------------------------------------------------ FilteredBundle

@dataclass(frozen=True)
class FilteredBundle:
    """Ordered factors of a filtered homogeneous bundle.

    ``components[i]`` is the direct-summand index of factor i (0-based,
    nondecreasing along the list) and ``levels[i]`` its filtration depth
    inside that component, 0 for the top quotient.  Factors are listed
    quotient-first within each component.
    """

    space: str
    blocks: tuple[int, ...]
    factors: tuple[BundleLabel, ...] = ()
    components: tuple[int, ...] = ()
    levels: tuple[int, ...] = ()

    def __post_init__(self):
        assert len(self.factors) == len(self.components) == len(self.levels)
        for f in self.factors:
            if (f.space, f.blocks) != (self.space, self.blocks):
                raise ValueError(f"factor {f!r} does not live on {self.space}{self.blocks}")
        if self.components and list(self.components) != sorted(self.components):
            raise ValueError("components must be listed contiguously")

    def __len__(self) -> int:
        return len(self.factors)

    def edges(self) -> tuple[str, ...]:
        """Separator between consecutive factors: '+' = composition-series
        adjacency (right factor is the deeper subbundle), '(+)' = direct sum."""
        out = []
        for i in range(len(self.factors) - 1):
            adjacent = (
                self.components[i] == self.components[i + 1]
                and self.levels[i + 1] == self.levels[i] + 1
            )
            out.append("+" if adjacent else "(+)")
        return tuple(out)

    def __str__(self) -> str:
        if not self.factors:
            return "0"
        bits = [str(self.factors[0])]
        for sep, f in zip(self.edges(), self.factors[1:]):
            bits.append(sep)
            bits.append(str(f))
        return " ".join(bits)

    def twist_by(self, line: BundleLabel) -> "FilteredBundle":
        """Tensor every factor by a line bundle (filtration unchanged)."""
        return FilteredBundle(
            self.space,
            self.blocks,
            tuple(tensor_line(f, line) for f in self.factors),
            self.components,
            self.levels,
        )

    @staticmethod
    def of_lines(labels, components, levels) -> "FilteredBundle":
        labels = tuple(labels)
        if not labels:
            raise ValueError("use an explicit space/blocks for the empty bundle")
        return FilteredBundle(
            labels[0].space, labels[0].blocks, labels, tuple(components), tuple(levels)
        )


def exterior_power(f: FilteredBundle, p: int) -> FilteredBundle:
    """Associated graded of the p-th wedge of a filtered sum of lines.

    Each p-subset of factors contributes the line with the summed
    weight.  Subsets are grouped into output components by their
    *multidegree* — how many factors they draw from each input
    component — ordered lexicographically descending; inside a
    component the level is the (normalised) sum of input levels.  This
    is the canonical weight-by-weight expansion of
    wedge(A (+) B) = (+)_{i+j=p} wedge^i A (x) wedge^j B
    together with the filtration each wedge inherits.
    """
    if p < 0:
        raise ValueError("negative exterior power")
    if any(not is_line(x) for x in f.factors):
        raise ValueError(
            "exterior_power needs line-bundle factors; "
            "non-full-flag totals (n >= 4) are not supported"
        )
    ncomp = (max(f.components) + 1) if f.components else 0
    entries = []
    for subset in combinations(range(len(f.factors)), p):
        weight = tuple(
            sum(f.factors[i].weight[k] for i in subset)
            for k in range(sum(f.blocks))
        )
        multidegree = tuple(
            -sum(1 for i in subset if f.components[i] == c) for c in range(ncomp)
        )
        level = sum(f.levels[i] for i in subset)
        entries.append((multidegree, level, subset, weight))
    entries.sort()

    factors, components, levels = [], [], []
    comp_of: dict[tuple[int, ...], int] = {}
    base_level: dict[int, int] = {}
    for multidegree, level, _subset, weight in entries:
        c = comp_of.setdefault(multidegree, len(comp_of))
        base_level.setdefault(c, level)
        factors.append(BundleLabel(f.space, f.blocks, weight))
        components.append(c)
        levels.append(level - base_level[c])
    return FilteredBundle(f.space, f.blocks, tuple(factors), tuple(components), tuple(levels))
