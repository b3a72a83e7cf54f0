"""The double fibration: spaces, isotropy roots, relative cotangent bundles.

Everything lives inside GL(n+1,C) acting on C^{n+1} with coordinates
0..n.  Three homogeneous spaces matter:

* ``M``  — blocks (1, n): projective n-space, carrying the real
  structure on which the assembled complexes live.  Its quoted
  dimension is the *real* one, 2n.
* ``Z``  — blocks (1, n-1, 1): the twistor space of pairs
  (line, hyperplane containing it), complex dimension 2n-1.  Its
  standard parabolic is conjugated by the transposition sigma = (0 1)
  of the first two coordinates; weight labels on Z are written so that
  Bott-Borel-Weil applies to the entries as printed.
* ``X``  — the correspondence space of triples (line, hyperplane,
  second line in the hyperplane), an open orbit with isotropy roots
  forming a chain parabolic pattern on coordinates 1..n only; complex
  dimension 4n-3.  X-labels are written in the sigma-twisted frame, so
  pulling back a line bundle from Z just swaps the first two entries.

A root (i, j) stands for e_i - e_j (the (i,j) matrix position); the
isotropy root sets below were pinned by requiring the relative
cotangent bundle of mu and the dimension count (2n-1, 2n, 4n-3) to
come out right for n = 2, 3.
"""

from __future__ import annotations

from dataclasses import dataclass

from .bundles import (
    BundleLabel,
    FilteredBundle,
    branch_to_torus,
    is_line,
    m_label,
    rank,
    x_label,
)

__all__ = [
    "FlagSpace",
    "Fibration",
    "registry",
    "relative_cotangent",
    "conormal",
    "pullback_line",
    "pullback_factors",
    "fiber_betti",
    "dimension_summary",
]

Root = tuple[int, int]


@dataclass(frozen=True)
class FlagSpace:
    """A homogeneous space, described by its isotropy root set."""

    name: str
    n: int
    blocks: tuple[int, ...]           # block sizes used by labels on this space
    isotropy: frozenset[Root]         # roots (i, j) of the isotropy subalgebra
    realization: tuple[int, ...]      # coordinate permutation of the realization

    @property
    def complex_dim(self) -> int:
        """Number of ambient roots outside the isotropy."""
        return self.n * (self.n + 1) - len(self.isotropy)

    @property
    def dim(self) -> int:
        """The quoted dimension: real (2x complex) for M, complex otherwise."""
        return 2 * self.complex_dim if self.name == "M" else self.complex_dim

    def levi_roots(self) -> frozenset[Root]:
        return frozenset(a for a in self.isotropy if (a[1], a[0]) in self.isotropy)

    def nilradical_roots(self) -> frozenset[Root]:
        return self.isotropy - self.levi_roots()


@dataclass(frozen=True)
class Fibration:
    """One leg of the double fibration, with stored fiber topology.

    ``fiber`` is a descriptor: ("cp", m) for projective m-space,
    ("flag", k) for the manifold of full flags in C^k, ("partial-flag",
    dims, k) for other flag types, or ("contractible",).  Topology is
    stored data — the engine never tries to prove contractibility.
    """

    name: str
    total: FlagSpace
    base: FlagSpace
    fiber: tuple
    fiber_contractible: bool

    @property
    def fiber_dim(self) -> int:
        d = self.total.dim - self.base.dim
        assert d >= 0
        return d


def _chain_roots(block_sizes: tuple[int, ...], coords: tuple[int, ...]) -> frozenset[Root]:
    """Roots of the chain parabolic with the given blocks on the given
    coordinates: (i, j) whenever block(i) <= block(j), i != j."""
    block_of = {}
    pos = 0
    for b, size in enumerate(block_sizes):
        for c in coords[pos:pos + size]:
            block_of[c] = b
        pos += size
    return frozenset(
        (i, j)
        for i in coords
        for j in coords
        if i != j and block_of[i] <= block_of[j]
    )


def _nonzero(blocks: tuple[int, ...]) -> tuple[int, ...]:
    return tuple(b for b in blocks if b > 0)


def registry(n: int) -> dict:
    """Named spaces and fibrations for ambient rank n+1 (n >= 2)."""
    if n < 2:
        raise ValueError(f"need n >= 2, got {n}")
    coords = tuple(range(n + 1))
    sigma = (1, 0) + coords[2:]

    m_space = FlagSpace("M", n, (1, n), _chain_roots((1, n), coords), coords)

    z_std = _chain_roots((1, n - 1, 1), coords)
    z_real = frozenset((sigma[i], sigma[j]) for i, j in z_std)
    z_space = FlagSpace("Z", n, (1, n - 1, 1), z_real, sigma)

    x_blocks = (1,) * (n + 1) if n <= 3 else (1, 1, n - 2, 1)
    x_iso = _chain_roots(_nonzero((1, n - 2, 1)), coords[1:])
    x_space = FlagSpace("X", n, x_blocks, x_iso, coords)

    flag_fiber = ("flag", n) if n <= 3 else ("partial-flag", (1, n - 1), n)
    return {
        "M": m_space,
        "Z": z_space,
        "X": x_space,
        # holomorphic legs of the correspondence
        "mu": Fibration("mu", x_space, z_space, ("contractible",), True),
        "nu": Fibration("nu", x_space, m_space, flag_fiber, False),
        # the underlying smooth legs of the incidence variety; same root
        # data, but the fiber topology the collapse arguments use
        "eta": Fibration("eta", x_space, z_space, ("cp", n - 2), n == 2),
        "tau": Fibration("tau", x_space, m_space, flag_fiber, False),
    }


def dimension_summary(n: int) -> tuple[int, int, int]:
    """(dim Z, dim M, dim X) in the quoted conventions."""
    r = registry(n)
    return (r["Z"].dim, r["M"].dim, r["X"].dim)


# ----------------------------------------------------- fiber topology

def fiber_betti(f: Fibration) -> list[int]:
    """Betti numbers of the fiber, for the fiber types we can name.

    Projective m-space has one cell in each even degree; a full flag
    manifold's Poincare polynomial is the q-factorial [k]_q! evaluated
    at q = t^2.  Partial flag fibers (n >= 4) are rejected.
    """
    kind = f.fiber[0]
    if kind == "cp":
        m = f.fiber[1]
        return [1 if i % 2 == 0 else 0 for i in range(2 * m + 1)]
    if kind == "flag":
        k = f.fiber[1]
        poly = [1]
        for i in range(1, k + 1):
            # multiply by 1 + q + ... + q^(i-1)
            out = [0] * (len(poly) + i - 1)
            for a, ca in enumerate(poly):
                for b in range(i):
                    out[a + b] += ca
            poly = out
        betti = [0] * (2 * len(poly) - 1)
        betti[::2] = poly
        return betti
    if kind == "contractible":
        return [1]
    raise ValueError(f"unsupported fiber type for {f.name}: {f.fiber}")


# ------------------------------------------- relative cotangent bundles

def _root_weight(alpha: Root, n: int) -> tuple[int, ...]:
    w = [0] * (n + 1)
    w[alpha[0]] += 1
    w[alpha[1]] -= 1
    return tuple(w)


def _neg(w: tuple[int, ...]) -> tuple[int, ...]:
    return tuple(-x for x in w)


def _add(a: tuple[int, ...], b: tuple[int, ...]) -> tuple[int, ...]:
    return tuple(x + y for x, y in zip(a, b))


def _assemble_filtered(weights: list[tuple[int, ...]], space: FlagSpace) -> FilteredBundle:
    """Group a multiplicity-free weight set into a filtered bundle on X.

    Levi-reachability inside the isotropy groups weights into
    irreducible constituents; nilradical roots then give the "who
    extends whom" order: adding a nilradical root moves deeper into the
    filtration.  Components are the weak connectivity classes and the
    level is the longest nilradical path from a top quotient.
    """
    if len(set(weights)) != len(weights):
        raise ValueError("filtration grouping needs a multiplicity-free weight set")
    n = space.n
    levi = [_root_weight(a, n) for a in space.levi_roots()]
    nil = [_root_weight(a, n) for a in space.nilradical_roots()]
    pool = set(weights)

    # constituents: orbits under adding/subtracting Levi roots
    orbit_of: dict[tuple[int, ...], int] = {}
    orbits: list[set] = []
    for w in weights:
        if w in orbit_of:
            continue
        orbit = {w}
        frontier = [w]
        while frontier:
            v = frontier.pop()
            for r in levi:
                for u in (_add(v, r), _add(v, _neg(r))):
                    if u in pool and u not in orbit:
                        orbit.add(u)
                        frontier.append(u)
        for v in orbit:
            orbit_of[v] = len(orbits)
        orbits.append(orbit)

    def constituent_label(orbit: set) -> BundleLabel:
        doms = []
        for w in orbit:
            try:
                doms.append(BundleLabel(space.name, space.blocks, w))
            except ValueError:
                continue
        if len(doms) != 1 or rank(doms[0]) != len(orbit):
            raise ValueError(
                f"cannot resolve a Levi constituent from weights {sorted(orbit)}; "
                "unsupported flag type"
            )
        return doms[0]

    labels = [constituent_label(o) for o in orbits]

    # nilradical edges between constituents: a -> b means b is deeper
    k = len(orbits)
    succ: list[set[int]] = [set() for _ in range(k)]
    for a, orbit in enumerate(orbits):
        for w in orbit:
            for r in nil:
                u = _add(w, r)
                if u in pool and orbit_of[u] != a:
                    succ[a].add(orbit_of[u])

    level = [0] * k
    changed = True
    while changed:  # longest-path relaxation; the graph is tiny and acyclic
        changed = False
        for a in range(k):
            for b in succ[a]:
                if level[b] < level[a] + 1:
                    if level[a] + 1 > k:
                        raise ValueError("cyclic extension order; not a filtration")
                    level[b] = level[a] + 1
                    changed = True

    comp = list(range(k))  # union-find over weak connectivity

    def find(i):
        while comp[i] != i:
            comp[i] = comp[comp[i]]
            i = comp[i]
        return i

    for a in range(k):
        for b in succ[a]:
            comp[find(a)] = find(b)

    groups: dict[int, list[int]] = {}
    for i in range(k):
        groups.setdefault(find(i), []).append(i)
    # order components by their top quotient's weight; members by level
    ordered = sorted(
        groups.values(),
        key=lambda g: min(labels[i].weight for i in g if level[i] == min(level[j] for j in g)),
    )
    factors, components, levels = [], [], []
    for c, members in enumerate(ordered):
        for i in sorted(members, key=lambda i: (level[i], labels[i].weight)):
            factors.append(labels[i])
            components.append(c)
            levels.append(level[i])
    return FilteredBundle(
        space.name, space.blocks, tuple(factors), tuple(components), tuple(levels)
    )


def relative_cotangent(f: Fibration) -> FilteredBundle:
    """Holomorphic 1-forms along the fibers of f, as a filtered bundle.

    The factors are the lines -alpha for each isotropy root alpha of
    the base (in its realization) that is not an isotropy root of the
    total space; the filtration comes from the total space's nilradical
    as in _assemble_filtered.
    """
    extra = f.base.isotropy - f.total.isotropy
    weights = [_neg(_root_weight(a, f.total.n)) for a in sorted(extra)]
    return _assemble_filtered(weights, f.total)


def conormal(f: Fibration) -> FilteredBundle:
    """The conormal complement on the correspondence space.

    For the M-leg this is the kernel of restricting the pulled-back
    1-forms of the base to the fiber directions of the Z-leg: weights
    of both cotangent generators of the base minus the weights of the
    Z-leg's relative cotangent bundle.
    """
    if f.base.name != "M":
        raise ValueError(f"conormal splitting is defined along the M-leg, not {f.name}")
    n = f.total.n
    mu_fib = registry(n)["mu"]
    used = set(relative_cotangent(mu_fib).factors)
    base_forms = [m_label((1, -1) + (0,) * (n - 1)), m_label((-1,) + (0,) * (n - 1) + (1,))]
    weights = []
    for gen in base_forms:
        for w in pullback_factors(gen).factors:
            if w not in used:
                weights.append(w.weight)
    return _assemble_filtered(weights, f.total)


# ---------------------------------------------------------- pullbacks

def pullback_line(b: BundleLabel) -> BundleLabel:
    """Pull a line bundle on Z back to the correspondence space.

    The realization swaps the first two weight entries; the result is
    relabeled onto X's block structure.
    """
    if b.space != "Z":
        raise ValueError(f"pullback_line starts on Z, got {b!r}")
    if not is_line(b):
        raise ValueError(f"only line bundles pull back to a single label: {b}")
    sigma = b.weight[1], b.weight[0], *b.weight[2:]
    return x_label(sigma)


def pullback_factors(b: BundleLabel) -> FilteredBundle:
    """Pull an irreducible bundle on M back to X, with its filtration.

    The torus weights of the GL(n) block (Gelfand-Tsetlin branching)
    become line-bundle factors on X; works when that weight multiset is
    multiplicity-free, which covers every pinned case.
    """
    if b.space != "M":
        raise ValueError(f"pullback_factors starts on M, got {b!r}")
    n = b.n
    space = registry(n)["X"]
    mults = branch_to_torus(b.weight[1:])
    if any(c > 1 for c in mults.values()):
        raise ValueError(f"weight multiset of {b} is not multiplicity-free")
    weights = [(b.weight[0], *w) for w in mults]
    return _assemble_filtered(weights, space)


