"""End-to-end assembly of the transform and the checks on its output.

Feeding a line-bundle twist through the machinery means:

1. pull the twist back from the twistor space (pullback_line),
2. tensor it onto each wedge power of the relative cotangent bundle of
   the Z-leg (exterior_power + twist_by),
3. push every column down the M-leg (direct_images), and
4. when the resulting first-page table is concentrated in a single
   fiber degree q with contiguous nonempty columns, read off the
   complex of irreducible bundles on the base.

The engine never guesses: a table that fails the concentration test is
returned as a table, with the offending columns named.

The form dictionary at the bottom identifies the irreducible summands
of the (p,q)-form bundles on the base for n = 2, 3; it powers the
form-type annotations, the formal adjoint, and the comparison
complexes.  "perp" marks the primitive part (the complement of the
previous diagonal wedged up by the Kaehler class).
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass

from .bbw import CohomologyResult, DirectImageTable, direct_images, global_cohomology
from .bundles import (
    BundleLabel,
    exterior_power,
    m_label,
    pieri_tensor,
    rank,
    trivial_label,
    z_label,
)
from .geometry import fiber_betti, pullback_line, registry, relative_cotangent
from .notation import parse_label

__all__ = [
    "FormType",
    "ComplexOnM",
    "TransformResult",
    "ArrowCheck",
    "EllipticityReport",
    "RealizationReport",
    "UnsupportedTwistError",
    "assemble_transform",
    "involutive_cohomology",
    "check_ellipticity",
    "formal_adjoint",
    "form_type",
    "form_dictionary",
    "complex_from_form_types",
    "annotate_form_types",
    "emit_realization",
]


class UnsupportedTwistError(ValueError):
    """Raised when no pinned rule covers the requested twist."""


# ----------------------------------------------------------- complexes

@dataclass(frozen=True, order=True)
class FormType:
    """Name of a summand of the (p,q)-forms: full bundle, primitive
    part ("perp"), or the Kaehler line inside a diagonal bundle."""

    p: int
    q: int
    role: str = "full"

    def __str__(self) -> str:
        suffix = {"full": "", "perp": "_perp", "kappa": "_kappa"}[self.role]
        return f"L({self.p},{self.q}){suffix}"

    @property
    def degree(self) -> int:
        return self.p + self.q


@dataclass(frozen=True)
class ComplexOnM:
    """A complex of direct sums of irreducible bundles on the base.

    ``claims[i]`` is the asserted cohomology dimension at position i
    (None when nothing is asserted); ``q_row``/``start_p`` remember
    where the terms sat in the first-page table they collapsed from.
    """

    terms: tuple[tuple[BundleLabel, ...], ...]
    q_row: int | None = None
    start_p: int | None = None
    form_types: tuple[tuple[FormType, ...], ...] | None = None
    claims: tuple[int, ...] | None = None
    claim_tags: dict[int, str] | None = None

    def ranks(self) -> tuple[int, ...]:
        return tuple(sum(rank(b) for b in term) for term in self.terms)

    def alternating_rank_sum(self) -> int:
        return sum((-1) ** i * r for i, r in enumerate(self.ranks()))

    def __str__(self) -> str:
        def side(term):
            return " (+) ".join(str(b) for b in term) if term else "0"

        return "0 -> " + " -> ".join(side(t) for t in self.terms) + " -> 0"


@dataclass(frozen=True)
class TransformResult:
    table: DirectImageTable
    complex_: ComplexOnM | None
    reason: str            # empty when a complex was emitted
    twist_z: BundleLabel | None
    twist_x: BundleLabel
    n: int
    mode: str


def _normalise_twist(twist, n: int) -> tuple[BundleLabel | None, BundleLabel]:
    """Accept None/trivial, a Z-label, or an X-label; return (Z, X) forms."""
    if twist is None:
        twist = trivial_label("Z", n)
    if twist.space == "Z":
        return twist, pullback_line(twist)
    if twist.space == "X":
        w = twist.weight
        swapped = (w[1], w[0], *w[2:])
        try:
            tz = z_label(swapped)
        except ValueError:
            tz = None
        return tz, twist
    raise ValueError(f"twists live on Z (or already on X), got {twist!r}")


def assemble_transform(twist=None, n: int = 3, mode: str = "paper") -> TransformResult:
    """Run the whole pipeline for one twist; collapse when honest."""
    reg = registry(n)
    twist_z, twist_x = _normalise_twist(twist, n)
    lam = relative_cotangent(reg["mu"])
    columns = [
        direct_images(exterior_power(lam, p).twist_by(twist_x), reg["nu"], mode, p)
        for p in range(len(lam) + 1)
    ]
    table = DirectImageTable.merge(columns)

    ps = sorted({p for p, _q in table.cells})
    qs = sorted({q for _p, q in table.cells})
    if not table.cells:
        return TransformResult(table, None, "every direct image vanishes",
                               twist_z, twist_x, n, mode)
    if len(qs) != 1:
        bad = [p for p in ps if len(table.qs_for_column(p)) > 1]
        return TransformResult(
            table, None,
            f"no collapse: columns p={bad or ps} spread over degrees q={qs}",
            twist_z, twist_x, n, mode,
        )
    if ps != list(range(ps[0], ps[-1] + 1)):
        return TransformResult(
            table, None,
            f"no collapse: nonempty columns {ps} are not contiguous",
            twist_z, twist_x, n, mode,
        )

    q0 = qs[0]
    terms = tuple(table.labels_at(p, q0) for p in range(ps[0], ps[-1] + 1))
    claims = claim_tags = None
    if twist_z is not None:
        try:
            inv = involutive_cohomology(twist_z, n)
        except UnsupportedTwistError:
            inv = None
        if inv is not None:
            claims = tuple(inv.dim_at(ps[0] + i + q0) for i in range(len(terms)))
            if all(x == 0 for x in twist_z.weight):
                claim_tags = {
                    i: ("constants" if ps[0] + i + q0 == 0 else "Kaehler form")
                    for i in range(len(terms))
                    if claims[i]
                }
    cx = ComplexOnM(
        terms,
        q_row=q0,
        start_p=ps[0],
        form_types=annotate_form_types(terms, n),
        claims=claims,
        claim_tags=claim_tags,
    )
    return TransformResult(table, cx, "", twist_z, twist_x, n, mode)


# ------------------------------------------------ involutive cohomology

def involutive_cohomology(twist: BundleLabel, n: int) -> CohomologyResult:
    """Cohomology of the involutive complex on the correspondence space.

    The topology spectral sequence of the Z-leg collapses for exactly
    two twists — the trivial one and the hyperplane twist (1|0,...,0) —
    giving H^r = (+)_i H^(r-i)(Z, twist) over the even Betti degrees i
    of the projective-space fiber.  Anything else has no pinned rule
    and is refused.
    """
    if twist.space != "Z":
        raise UnsupportedTwistError(f"involutive cohomology needs a twist on Z, got {twist!r}")
    w = twist.weight
    hyperplane = (1,) + (0,) * n
    if w != (0,) * (n + 1) and w != hyperplane:
        raise UnsupportedTwistError(
            f"no pinned row-cohomology rule for twist {twist}; "
            "only the trivial and hyperplane twists are known to collapse"
        )
    zcoh = global_cohomology(twist)
    betti = fiber_betti(registry(n)["eta"])
    out: dict[int, int] = {}
    for i, b in enumerate(betti):
        if b:
            for r in zcoh.by_degree:
                out[r + i] = out.get(r + i, 0) + b * zcoh.dim_at(r)
    return CohomologyResult(out)


# ------------------------------------------------------- form dictionary

def form_dictionary(n: int) -> tuple[dict, dict]:
    """(full, perp): constituents of the (p,q)-form bundles on the base.

    The diagonal bundles contain the Kaehler line (the trivial factor);
    their perp part is the complement.  Stored as data for n = 2, 3 and
    rank-checked in the test suite against C(n,p)*C(n,q).
    """
    if n == 2:
        full = {
            (0, 0): ["(0||0,0)"],
            (1, 0): ["(1||-1,0)"], (0, 1): ["(-1||0,1)"],
            (2, 0): ["(2||-1,-1)"], (1, 1): ["(0||-1,1)", "(0||0,0)"], (0, 2): ["(-2||1,1)"],
            (2, 1): ["(1||-1,0)"], (1, 2): ["(-1||0,1)"],
            (2, 2): ["(0||0,0)"],
        }
        perp = {(1, 1): ["(0||-1,1)"]}
    elif n == 3:
        full = {
            (0, 0): ["(0||0,0,0)"],
            (1, 0): ["(1||-1,0,0)"], (0, 1): ["(-1||0,0,1)"],
            (2, 0): ["(2||-1,-1,0)"], (1, 1): ["(0||-1,0,1)", "(0||0,0,0)"],
            (0, 2): ["(-2||0,1,1)"],
            (3, 0): ["(3||-1,-1,-1)"], (2, 1): ["(1||-1,-1,1)", "(1||-1,0,0)"],
            (1, 2): ["(-1||-1,1,1)", "(-1||0,0,1)"], (0, 3): ["(-3||1,1,1)"],
            (3, 1): ["(2||-1,-1,0)"], (2, 2): ["(0||-1,0,1)", "(0||0,0,0)"],
            (1, 3): ["(-2||0,1,1)"],
            (3, 2): ["(1||-1,0,0)"], (2, 3): ["(-1||0,0,1)"],
            (3, 3): ["(0||0,0,0)"],
        }
        perp = {
            (1, 1): ["(0||-1,0,1)"], (2, 2): ["(0||-1,0,1)"],
            (1, 2): ["(-1||-1,1,1)"], (2, 1): ["(1||-1,-1,1)"],
        }
    else:
        raise ValueError(f"form dictionary is pinned for n in (2, 3) only, not n={n}")

    def parse(strings):
        return tuple(m_label(parse_label(s).weight) for s in strings)

    return ({k: parse(v) for k, v in full.items()},
            {k: parse(v) for k, v in perp.items()})


def _catalog(n: int) -> list[tuple[FormType, tuple[BundleLabel, ...]]]:
    full, perp = form_dictionary(n)
    cat = [(FormType(p, q, "full"), labs) for (p, q), labs in full.items()]
    cat += [(FormType(p, q, "perp"), labs) for (p, q), labs in perp.items()]
    return sorted(cat, key=lambda e: (e[0].p, e[0].q, e[0].role))


def _labels_for(ft: FormType, n: int) -> tuple[BundleLabel, ...]:
    full, perp = form_dictionary(n)
    if ft.role == "full":
        return full[(ft.p, ft.q)]
    if ft.role == "perp":
        return perp[(ft.p, ft.q)]
    return (trivial_label("M", n),)  # the Kaehler line


def form_type(b: BundleLabel, n: int = 3) -> tuple[FormType, ...]:
    """All dictionary occurrences of a label; empty tuple = unknown.

    The trivial label inside a diagonal bundle (other than the extreme
    corners) is the Kaehler line and is reported with role "kappa";
    primitive constituents are reported with role "perp" rather than
    doubly as plain members of the full bundle.
    """
    full, perp = form_dictionary(n)
    out = []
    for (p, q), labs in full.items():
        if b not in labs:
            continue
        if b in perp.get((p, q), ()):
            out.append(FormType(p, q, "perp"))
        elif p == q and 0 < p < n and b == trivial_label("M", n):
            out.append(FormType(p, q, "kappa"))
        else:
            out.append(FormType(p, q, "full"))
    for (p, q), labs in perp.items():
        if b in labs and (p, q) not in full:
            out.append(FormType(p, q, "perp"))
    return tuple(sorted(out))


def _partitions_of(term: tuple[BundleLabel, ...], n: int) -> dict[int, list[tuple[FormType, ...]]]:
    """All ways to write a term as a disjoint union of named bundles of
    one common total degree, grouped by that degree."""
    want = Counter(term)
    by_degree: dict[int, list] = {}
    cat = _catalog(n)
    degrees = {ft.degree for ft, _ in cat}
    for d in sorted(degrees):
        entries = [(ft, Counter(labs)) for ft, labs in cat if ft.degree == d]

        found: list[tuple[FormType, ...]] = []

        def cover(remaining: Counter, start: int, used: tuple[FormType, ...]):
            if not +remaining:
                found.append(used)
                return
            for k in range(start, len(entries)):
                ft, labs = entries[k]
                if all(remaining[x] >= c for x, c in labs.items()):
                    cover(remaining - labs, k, used + (ft,))

        cover(want, 0, ())
        if found:
            by_degree[d] = [tuple(sorted(f)) for f in found]
    return by_degree


def annotate_form_types(
    terms: tuple[tuple[BundleLabel, ...], ...], n: int
) -> tuple[tuple[FormType, ...], ...] | None:
    """Assign (p,q)-form names to every term, or None when ambiguous.

    Terms must carry consecutive total degrees (the arrows are first
    order); subject to that chain constraint the partition of every
    term must be unique.
    """
    if n not in (2, 3) or not terms:
        return None
    options = [_partitions_of(t, n) for t in terms]
    starts = [
        d0 for d0 in options[0]
        if all(d0 + i in opt for i, opt in enumerate(options))
    ]
    if len(starts) != 1:
        return None
    d0 = starts[0]
    chosen = []
    for i, opt in enumerate(options):
        parts = set(opt[d0 + i])
        if len(parts) != 1:
            return None
        chosen.append(next(iter(parts)))
    return tuple(chosen)


def complex_from_form_types(types, n: int = 3) -> ComplexOnM:
    """Build a comparison complex directly from named form bundles."""
    fts = tuple(tuple(sorted(t)) for t in types)
    terms = tuple(
        tuple(sorted(lab for ft in t for lab in _labels_for(ft, n))) for t in fts
    )
    return ComplexOnM(terms, form_types=fts)


# --------------------------------------------------------- ellipticity

@dataclass(frozen=True)
class ArrowCheck:
    index: int
    admissible: tuple[tuple[BundleLabel, BundleLabel], ...]
    inadmissible: tuple[tuple[BundleLabel, BundleLabel], ...]

    @property
    def ok(self) -> bool:
        return bool(self.admissible)


@dataclass(frozen=True)
class EllipticityReport:
    ranks: tuple[int, ...]
    alternating_sum: int
    arrows: tuple[ArrowCheck, ...]
    passed: bool

    def inadmissible_pairs(self) -> tuple[tuple[BundleLabel, BundleLabel], ...]:
        return tuple(p for a in self.arrows for p in a.inadmissible)


def check_ellipticity(c: ComplexOnM) -> EllipticityReport:
    """Symbol-level consistency of a complex on the base.

    Per arrow, a component (source label -> target label) is admissible
    when the target occurs in the source's Pieri tensor with the
    cotangent generators (a first-order invariant operator can exist);
    the arrow passes when at least one component is admissible, and
    every inadmissible component is reported.  The complex passes when
    all arrows do and the alternating rank sum vanishes.
    """
    if not c.terms or any(not t for t in c.terms):
        raise ValueError("malformed complex: empty terms")
    arrows = []
    for i in range(len(c.terms) - 1):
        adm, bad = [], []
        for s in c.terms[i]:
            targets = set(pieri_tensor(s))
            for t in c.terms[i + 1]:
                (adm if t in targets else bad).append((s, t))
        arrows.append(ArrowCheck(i, tuple(adm), tuple(bad)))
    total = sum((-1) ** i * r for i, r in enumerate(c.ranks()))
    passed = total == 0 and all(a.ok for a in arrows)
    return EllipticityReport(c.ranks(), total, tuple(arrows), passed)


# ------------------------------------------------------- formal adjoint

def formal_adjoint(c: ComplexOnM, n: int = 3) -> ComplexOnM:
    """Reverse the complex and send each L(p,q) summand to L(n-p,n-q).

    Labels are regenerated from the dictionary, so applying the map
    twice restores the original complex (in canonical order).  A
    complex whose terms cannot be annotated is rejected.
    """
    fts = c.form_types if c.form_types is not None else annotate_form_types(c.terms, n)
    if fts is None:
        raise ValueError(
            "formal adjoint needs (p,q)-form annotations; "
            "these terms have no unambiguous naming"
        )
    new_types = tuple(
        tuple(sorted(FormType(n - ft.p, n - ft.q, ft.role) for ft in t))
        for t in reversed(fts)
    )
    return complex_from_form_types(new_types, n)


# ---------------------------------------------------------- realization

@dataclass(frozen=True)
class RealizationReport:
    """Kernel presentation of the top cohomology over the flag domain."""

    degree: int
    source: BundleLabel
    dbar_targets: tuple[BundleLabel, ...]
    d_targets: tuple[BundleLabel, ...]
    dbar_full: tuple[BundleLabel, ...]
    d_full: tuple[BundleLabel, ...]


def emit_realization(twist=None, n: int = 3) -> RealizationReport:
    """The canonical-twist kernel presentation (n = 3 only).

    Runs the canonical-bundle pipeline and presents the single
    surviving cohomology as the kernel of the first arrow, splitting
    its targets into the holomorphic (first entry +1) and
    antiholomorphic (first entry -1) directions; the full Pieri lists
    are included so the projection is visible.
    """
    canonical = z_label((3,) + (0,) * (n - 1) + (-3,))
    if twist is None:
        twist = canonical
    if n != 3 or twist != canonical:
        raise ValueError(f"realization is pinned to the canonical twist for n=3, got {twist}")
    res = assemble_transform(twist, n, "paper")
    cx = res.complex_
    assert cx is not None and len(cx.terms[0]) == 1, "canonical pipeline did not collapse"
    source = cx.terms[0][0]
    a = source.weight[0]
    nxt = cx.terms[1]
    dbar_targets = tuple(t for t in nxt if t.weight[0] == a - 1)
    d_targets = tuple(t for t in nxt if t.weight[0] == a + 1)
    pieri = pieri_tensor(source)
    dbar_full = tuple(t for t in pieri if t.weight[0] == a - 1)
    d_full = tuple(t for t in pieri if t.weight[0] == a + 1)
    assert set(dbar_targets) <= set(dbar_full) and set(d_targets) <= set(d_full)
    return RealizationReport(
        cx.q_row, source, dbar_targets, d_targets, dbar_full, d_full
    )
