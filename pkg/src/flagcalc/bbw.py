"""Direct images along the M-leg and global Bott-Borel-Weil cohomology.

A line-bundle factor on the correspondence space restricts to each
fiber of the M-leg as a line bundle on a flag manifold of GL(n,C); its
fiberwise cohomology is computed by bbw_reduce on the weight entries
inside the fiber coordinates, with the first entry a spectator.  The
q-th direct image is then the irreducible bundle on the base whose
block-2 weight is the resulting dominant weight.

Filtered bundles produce one candidate per factor.  Two reporting
modes:

* ``conservative`` — every surviving (q, label) is listed, and pairs
  that *might* cancel through a connecting homomorphism are flagged.
* ``paper`` — flagged pairs satisfying all three cancellation
  conditions (composition-series adjacency, image degrees q and q+1,
  identical base labels) are removed from the table, each removal
  logged.  This reproduces the worked derivation; the rule's validity
  beyond those cases is an assumption the log keeps visible.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .bundles import BundleLabel, FilteredBundle, fiber_label, is_line, m_label, rank
from .geometry import Fibration
from .weights import bbw_reduce

__all__ = [
    "CancellationRecord",
    "DirectImageTable",
    "CohomologyResult",
    "direct_images",
    "reduce_factor",
    "global_cohomology",
    "MODES",
]

MODES = ("paper", "conservative")


@dataclass(frozen=True)
class CancellationRecord:
    """One connecting-homomorphism candidate (quotient at q, sub at q+1)."""

    p: int
    quotient: BundleLabel       # factor on X whose image sits in degree q
    sub: BundleLabel            # deeper factor whose image sits in degree q+1
    q: int                      # lower of the two image degrees
    base_label: BundleLabel     # the shared direct-image label on M
    applied: bool               # True when paper mode removed the pair

    def describe(self) -> str:
        verb = "cancelled" if self.applied else "candidate"
        return (
            f"p={self.p}: {verb} {self.quotient} (q={self.q}) against "
            f"{self.sub} (q={self.q + 1}), both imaging to {self.base_label}"
        )


@dataclass(frozen=True)
class DirectImageTable:
    """Cells (p, q) -> labels on the base, plus the cancellation log."""

    cells: dict[tuple[int, int], tuple[BundleLabel, ...]]
    mode: str
    log: tuple[CancellationRecord, ...] = ()

    def labels_at(self, p: int, q: int) -> tuple[BundleLabel, ...]:
        return self.cells.get((p, q), ())

    def qs_for_column(self, p: int) -> tuple[int, ...]:
        return tuple(sorted({q for (pp, q) in self.cells if pp == p}))

    def euler_rank(self, p: int) -> int:
        return sum(
            (-1) ** q * sum(rank(b) for b in labs)
            for (pp, q), labs in self.cells.items()
            if pp == p
        )

    @staticmethod
    def merge(tables: list["DirectImageTable"]) -> "DirectImageTable":
        cells: dict[tuple[int, int], tuple[BundleLabel, ...]] = {}
        log: list[CancellationRecord] = []
        modes = {t.mode for t in tables}
        assert len(modes) == 1, "cannot merge tables from different modes"
        for t in tables:
            overlap = cells.keys() & t.cells.keys()
            assert not overlap, f"duplicate cells {overlap}"
            cells.update(t.cells)
            log.extend(t.log)
        return DirectImageTable(cells, modes.pop(), tuple(log))


def _fiber_entries(f: Fibration) -> tuple[int, int]:
    if f.base.name != "M":
        raise ValueError(f"direct images are computed along the M-leg, not {f.name}")
    return 1, f.total.n + 1  # fiber coordinates: everything past the spectator


def reduce_factor(b: BundleLabel, fib: Fibration):
    """Fiberwise cohomology of one line-bundle factor: None or (q, label)."""
    if b.space != "X":
        raise ValueError(f"factors live on the correspondence space, got {b!r}")
    if not is_line(b):
        raise ValueError(f"not a line bundle along the fibers: {b}")
    lo, hi = _fiber_entries(fib)
    reduced = bbw_reduce(b.weight[lo:hi])
    if not reduced:
        return None
    q, dom = reduced
    return q, m_label((b.weight[0], *dom))


def direct_images(
    f: FilteredBundle, fib: Fibration, mode: str = "paper", p: int = 0
) -> DirectImageTable:
    """Direct images of a filtered bundle: one p-column of the E1 page."""
    if mode not in MODES:
        raise ValueError(f"mode must be one of {MODES}, got {mode!r}")
    images: dict[int, tuple[int, BundleLabel]] = {}  # factor index -> (q, label)
    for i, factor in enumerate(f.factors):
        res = reduce_factor(factor, fib)
        if res is not None:
            images[i] = res

    # connecting-homomorphism candidates: quotient directly above sub in
    # one composition series, images in degrees q and q+1, same label
    candidates = []
    for i in images:
        for j in images:
            if (
                f.components[i] == f.components[j]
                and f.levels[j] == f.levels[i] + 1
                and images[j][0] == images[i][0] + 1
                and images[j][1] == images[i][1]
            ):
                candidates.append((i, j))
    candidates.sort(key=lambda ij: (f.components[ij[0]], f.levels[ij[0]], images[ij[0]][0],
                                    f.factors[ij[0]].weight, f.factors[ij[1]].weight))

    removed: set[int] = set()
    log = []
    for i, j in candidates:
        apply = mode == "paper" and i not in removed and j not in removed
        if apply:
            removed.update((i, j))
        log.append(
            CancellationRecord(
                p, f.factors[i], f.factors[j], images[i][0], images[i][1], apply
            )
        )

    cells: dict[tuple[int, int], list[BundleLabel]] = {}
    for i, (q, label) in images.items():
        if i not in removed:
            cells.setdefault((p, q), []).append(label)
    return DirectImageTable(
        {pq: tuple(sorted(labs)) for pq, labs in sorted(cells.items())},
        mode,
        tuple(log),
    )


# ------------------------------------------------- global cohomology

@dataclass(frozen=True)
class CohomologyResult:
    """Cohomology by degree; absent degree means zero.

    Values are either label tuples (global cohomology) or plain
    multiplicities of the trivial representation (involutive results).
    """

    by_degree: dict[int, object] = field(default_factory=dict)

    def dim_at(self, r: int) -> int:
        v = self.by_degree.get(r, 0)
        if isinstance(v, int):
            return v
        return sum(rank(b) for b in v)

    def degrees(self) -> tuple[int, ...]:
        return tuple(sorted(self.by_degree))

    def __bool__(self) -> bool:
        return bool(self.by_degree)


def global_cohomology(b: BundleLabel) -> CohomologyResult:
    """Cohomology of a line bundle over the twistor space.

    Z-labels are written in Bott-Borel-Weil-ready order, so the full
    weight reduces directly; labels on the correspondence space carry
    the sigma-twisted frame and have their first two entries swapped
    back before reducing.
    """
    if b.space not in ("Z", "X"):
        raise ValueError(f"global cohomology computed on Z or X labels, got {b!r}")
    if not is_line(b):
        raise ValueError(f"line bundles only, got {b}")
    w = b.weight
    if b.space == "X":
        w = (w[1], w[0], *w[2:])
    reduced = bbw_reduce(w)
    if not reduced:
        return CohomologyResult({})
    q, dom = reduced
    return CohomologyResult({q: (fiber_label(dom),)})
