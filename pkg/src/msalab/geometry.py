"""Multi-particle box geometry in the max-norm.

Everything here is axis-aligned: an n-particle box of radius L centered at
u = (u_1, ..., u_n) in Z^{nd} is the product of open d-dimensional cubes
of radius L around each u_j.  Lattice boxes are the integer points of the
continuum box, i.e. |x - u| <= L - 1 componentwise.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

Point = tuple[int, ...]


class ChainEscapeError(RuntimeError):
    """An S-chain or enveloping box does not fit inside the ambient box."""


@dataclass(frozen=True)
class Cube:
    """Open d-dimensional cube: { x : |x_i - center_i| < radius for all i }."""

    center: Point
    radius: int

    def overlaps(self, other: "Cube") -> bool:
        return all(
            abs(a - b) < self.radius + other.radius
            for a, b in zip(self.center, other.center)
        )

    def contains_point(self, x) -> bool:
        return all(abs(xi - ci) < self.radius for xi, ci in zip(x, self.center))


@dataclass(frozen=True)
class MPBox:
    """n-particle box in Z^{nd}: center (n*d integers), radius L."""

    center: Point
    radius: int
    n: int
    d: int

    def __post_init__(self):
        if self.radius < 1:
            raise ValueError(f"radius must be >= 1, got {self.radius}")
        if self.n < 1 or self.d < 1:
            raise ValueError(f"need n >= 1 and d >= 1, got n={self.n}, d={self.d}")
        if len(self.center) != self.n * self.d:
            raise ValueError(
                f"center has {len(self.center)} coordinates, expected n*d = {self.n * self.d}"
            )

    @property
    def L(self) -> int:
        return self.radius

    def particle(self, j: int) -> Point:
        """Center of the j-th particle factor (1-based)."""
        if not 1 <= j <= self.n:
            raise IndexError(f"particle index {j} out of range 1..{self.n}")
        return self.center[(j - 1) * self.d : j * self.d]

    def particle_centers(self) -> list[Point]:
        return [self.particle(j) for j in range(1, self.n + 1)]

    def contains_lattice_point(self, x) -> bool:
        return all(abs(xi - ci) <= self.radius - 1 for xi, ci in zip(x, self.center))

    def lattice_points(self):
        """Iterate over the lattice box B_L(u) = Lambda_L(u) ∩ Z^{nd}."""
        ranges = [
            range(c - self.radius + 1, c + self.radius) for c in self.center
        ]
        return itertools.product(*ranges)

    def lattice_cardinality(self) -> int:
        return (2 * self.radius - 1) ** (self.n * self.d)

    def inflate(self, extra: int) -> "MPBox":
        return MPBox(self.center, self.radius + extra, self.n, self.d)

    def contains_box(self, other: "MPBox") -> bool:
        """Whether the continuum box of `other` sits inside this one."""
        return all(
            abs(a - b) + other.radius <= self.radius
            for a, b in zip(self.center, other.center)
        ) and (self.n, self.d) == (other.n, other.d)


@dataclass(frozen=True)
class Annulus:
    """Annular set □_outer(u) \\ □_inner(u), both cubes open."""

    center: Point
    inner: int
    outer: int

    def __post_init__(self):
        if not 0 < self.inner < self.outer:
            raise ValueError(f"need 0 < inner < outer, got {self.inner}, {self.outer}")

    @property
    def width(self) -> int:
        return self.outer - self.inner

    def contains_point(self, x) -> bool:
        r = max(abs(xi - ci) for xi, ci in zip(x, self.center))
        return self.inner <= r < self.outer

    def contains_box(self, center, radius: int) -> bool:
        r = max(abs(xi - ci) for xi, ci in zip(center, self.center))
        return r - radius >= self.inner and r + radius <= self.outer


@dataclass(frozen=True)
class SeparabilityVerdict:
    separable: bool
    witness: tuple[int, ...] | None = None
    # "second_from_first": second box is J-separable from the first,
    # "first_from_second": the other way round.
    direction: str | None = None


@dataclass(frozen=True)
class InteractionClass:
    tag: str  # "FI" or "PI"
    partition: tuple[int, ...] | None = None


# ---------------------------------------------------------------------------
# projections and distances


def projection(box: MPBox, j: int) -> Cube:
    """d-dimensional cube Lambda_L(u_j), the j-th factor of the box."""
    return Cube(box.particle(j), box.radius)


def full_projection(box: MPBox, extra: int = 0) -> list[Cube]:
    """Union (as a list of cubes) of all factor projections, inflated by `extra`."""
    return [Cube(box.particle(j), box.radius + extra) for j in range(1, box.n + 1)]


def box_distance(a: MPBox, b: MPBox) -> int:
    """Max-norm set distance between the two continuum boxes."""
    return max(
        max(0, abs(x - y) - a.radius - b.radius)
        for x, y in zip(a.center, b.center)
    )


def _check_pair(a: MPBox, b: MPBox):
    if (a.n, a.d, a.radius) != (b.n, b.d, b.radius):
        raise ValueError(
            f"mismatched boxes: (n,d,L)={(a.n, a.d, a.radius)} vs {(b.n, b.d, b.radius)}"
        )


def _cube_disjoint_from_union(cube: Cube, others: list[Cube]) -> bool:
    return not any(cube.overlaps(o) for o in others)


def is_j_separable(y_box: MPBox, x_box: MPBox, J, R: int) -> bool:
    """Whether box(y) is J-separable from box(x).

    The inflated (radius L+R) projections of y with indices in J must be
    disjoint from the remaining inflated projections of y and from the full
    inflated projection of x.
    """
    J = set(J)
    if not J or not J <= set(range(1, y_box.n + 1)):
        raise ValueError(f"J must be a nonempty subset of 1..{y_box.n}, got {sorted(J)}")
    r = y_box.radius + R
    j_cubes = [Cube(y_box.particle(j), r) for j in sorted(J)]
    rest = [Cube(y_box.particle(j), r) for j in range(1, y_box.n + 1) if j not in J]
    rest += [Cube(x_box.particle(i), r) for i in range(1, x_box.n + 1)]
    return all(_cube_disjoint_from_union(c, rest) for c in j_cubes)


def _overlap_clumps(centers: list[Point], radius: int) -> list[set[int]]:
    """Connected components (1-based indices) of the cube-overlap graph.

    Cubes are open of the given radius; overlap is strict (|Δ| < 2*radius).
    """
    n = len(centers)
    parent = list(range(n))

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    for i in range(n):
        for j in range(i + 1, n):
            if all(abs(a - b) < 2 * radius for a, b in zip(centers[i], centers[j])):
                ri, rj = find(i), find(j)
                if ri != rj:
                    parent[ri] = rj
    groups: dict[int, set[int]] = {}
    for i in range(n):
        groups.setdefault(find(i), set()).add(i + 1)
    return sorted(groups.values(), key=min)


def is_separable_pair(a: MPBox, b: MPBox, R: int, N: int) -> SeparabilityVerdict:
    """Structured separability test for a pair of same-shape boxes.

    Requires dist(a, b) > 2N(L+R) plus a J-split in one direction.  The split
    is found through overlap clumps of the inflated projections: a valid J is
    exactly a union of clumps avoiding the other box's full projection, so it
    suffices to look for a single clean clump on either side.
    """
    _check_pair(a, b)
    if box_distance(a, b) <= 2 * N * (a.radius + R):
        return SeparabilityVerdict(False)
    r = a.radius + R
    for y_box, x_box, direction in (
        (b, a, "second_from_first"),
        (a, b, "first_from_second"),
    ):
        x_cubes = full_projection(x_box, R)
        clumps = _overlap_clumps(y_box.particle_centers(), r)
        witness: set[int] = set()
        for clump in clumps:
            cubes = [Cube(y_box.particle(j), r) for j in clump]
            if all(_cube_disjoint_from_union(c, x_cubes) for c in cubes):
                witness |= clump
        if witness:
            J = tuple(sorted(witness))
            assert is_j_separable(y_box, x_box, J, R)
            return SeparabilityVerdict(True, J, direction)
    return SeparabilityVerdict(False)


def is_separable_pair_oracle(a: MPBox, b: MPBox, R: int, N: int) -> SeparabilityVerdict:
    """Brute-force separability: try every nonempty J in both directions."""
    _check_pair(a, b)
    if box_distance(a, b) <= 2 * N * (a.radius + R):
        return SeparabilityVerdict(False)
    indices = list(range(1, a.n + 1))
    for size in range(1, a.n + 1):
        for J in itertools.combinations(indices, size):
            if is_j_separable(b, a, J, R):
                return SeparabilityVerdict(True, J, "second_from_first")
            if is_j_separable(a, b, J, R):
                return SeparabilityVerdict(True, J, "first_from_second")
    return SeparabilityVerdict(False)


# ---------------------------------------------------------------------------
# covers and annuli


def non_separable_cover(x: Point, L: int, R: int, n: int, d: int) -> list[MPBox]:
    """Boxes of radius 2n(L+R) whose union traps every non-separable center.

    One box per assignment map sigma: {1..n} -> {1..n}; any distant y outside
    all of them is separable from □_L(x).  At most n^n boxes.
    """
    if n < 2:
        raise ValueError("cover is only defined for n >= 2")
    if len(x) != n * d:
        raise ValueError(f"center has {len(x)} coordinates, expected {n * d}")
    particles = [x[j * d : (j + 1) * d] for j in range(n)]
    radius = 2 * n * (L + R)
    boxes = []
    for sigma in itertools.product(range(n), repeat=n):
        center = tuple(c for i in sigma for c in particles[i])
        boxes.append(MPBox(center, radius, n, d))
    return boxes


def cover_contains(cover: list[MPBox], y: Point) -> bool:
    """Closed membership |y - c| <= radius, matching the covering bound."""
    return any(
        all(abs(a - b) <= box.radius for a, b in zip(y, box.center)) for box in cover
    )


def kappa(n: int) -> int:
    return n**n


def annuli_family(
    center: Point, L: int, n: int, R: int, width: int | None = None, count: int | None = None
) -> list[Annulus]:
    """Disjoint consecutive annuli A_j = □_{L+jB} \\ □_{L+(j-1)B} around center.

    Defaults: width B = 4n(L+R)+1 and 2*kappa(n)+1 annuli.  The alternative
    width 2n*l+1 used by the bad-box machinery is passed explicitly.
    """
    if L < 1:
        raise ValueError("L must be >= 1")
    B = width if width is not None else 4 * n * (L + R) + 1
    m = count if count is not None else 2 * kappa(n) + 1
    return [Annulus(center, L + (j - 1) * B, L + j * B) for j in range(1, m + 1)]


# ---------------------------------------------------------------------------
# clumps and interaction classes


def clump_decomposition(y: list[Point], L: int, R: int) -> list[set[int]]:
    """Partition particle indices (1-based) into maximal (L+R)-clumps.

    Two positions share a clump iff their closed (L+R)-cubes chain together
    (pairwise intersection, transitive closure).
    """
    n = len(y)
    parent = list(range(n))

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    for i in range(n):
        for j in range(i + 1, n):
            if all(abs(a - b) <= 2 * (L + R) for a, b in zip(y[i], y[j])):
                ri, rj = find(i), find(j)
                if ri != rj:
                    parent[ri] = rj
    groups: dict[int, set[int]] = {}
    for i in range(n):
        groups.setdefault(find(i), set()).add(i + 1)
    return sorted(groups.values(), key=min)


def classify_interaction(box: MPBox, r0: float, N: int) -> InteractionClass:
    """FI iff the box meets the diagonal neighborhood D^{(n)}.

    D^{(n)} = { x in Z^{nd} : max pairwise |x_j1 - x_j2| <= N*r0 }.  For PI
    boxes, a witness partition J with cross-gap > r0 everywhere on the box is
    returned when one exists (gaps measured on the continuum box).
    """
    centers = box.particle_centers()
    L = box.radius
    # Integer points exist with all particles inside a window of width N*r0
    # iff the per-coordinate center spread is <= N*r0 + 2(L-1).
    fi = all(
        max(c[i] for c in centers) - min(c[i] for c in centers) <= N * r0 + 2 * (L - 1)
        for i in range(box.d)
    )
    if fi:
        return InteractionClass("FI")
    return InteractionClass("PI", partition=_pi_witness(box, r0))


def _pi_witness(box: MPBox, r0: float) -> tuple[int, ...] | None:
    """Partition J with min cross-distance > r0 over the continuum box, if any."""
    centers = box.particle_centers()
    n = len(centers)
    parent = list(range(n))

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    for i in range(n):
        for j in range(i + 1, n):
            gap = max(
                max(0, abs(a - b) - 2 * box.radius)
                for a, b in zip(centers[i], centers[j])
            )
            if gap <= r0:
                ri, rj = find(i), find(j)
                if ri != rj:
                    parent[ri] = rj
    components: dict[int, set[int]] = {}
    for i in range(n):
        components.setdefault(find(i), set()).add(i + 1)
    comps = sorted(components.values(), key=min)
    if len(comps) < 2:
        return None
    return tuple(sorted(comps[0]))


def fi_projection_disjointness(a: MPBox, b: MPBox, r0: float, R: int, N: int) -> bool:
    """Whether the full (L+R)-inflated projections of the two boxes are disjoint."""
    a_cubes = full_projection(a, R)
    b_cubes = full_projection(b, R)
    return all(not ca.overlaps(cb) for ca in a_cubes for cb in b_cubes)


# ---------------------------------------------------------------------------
# layers, interiors, boundaries


def outer_layer(box: MPBox) -> list[Point]:
    """Lattice points of □_L(u) \\ □_{L-2}(u) (layer of width 2)."""
    L = box.radius
    return [
        x
        for x in box.lattice_points()
        if max(abs(a - b) for a, b in zip(x, box.center)) >= L - 2
    ]


def inner_boundary(box: MPBox) -> list[Point]:
    """Lattice points at distance 1 from the complement of the lattice box."""
    L = box.radius
    return [
        x
        for x in box.lattice_points()
        if max(abs(a - b) for a, b in zip(x, box.center)) == L - 1
    ]


def interior(box: MPBox) -> MPBox:
    """Interior box of radius [L/3]; requires L >= 4."""
    if box.radius < 4:
        raise ValueError(f"interior requires L >= 4, got L={box.radius}")
    return MPBox(box.center, box.radius // 3, box.n, box.d)
