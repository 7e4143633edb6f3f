"""Finite-volume n-particle Hamiltonians on a grid with Dirichlet boundary.

The operator is -1/2 * (discrete Laplacian) + U + V assembled as a dense
real symmetric matrix.  With mesh h = 1 the grid is the lattice box itself
and the model reduces to the usual tight-binding form whose 1D zero-potential
eigenvalues are 1 - cos(k*pi/(M+1)).
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field

import numpy as np
import scipy.linalg
import scipy.sparse

from .geometry import MPBox
from .randomfield import (
    AlloySpec,
    CoverageError,
    DisorderSample,
    InteractionSpec,
    interaction_energy,
    multiparticle_potential,
    sample_disorder,
)

DENSE_LIMIT = 4096


class CapExceededError(RuntimeError):
    """Matrix dimension exceeds the configured dense-solver cap."""


@dataclass
class GridHamiltonian:
    box: MPBox | None
    h: float
    grid: np.ndarray  # (M, nd) grid point coordinates
    matrix: np.ndarray  # (M, M) real symmetric
    n: int
    d: int
    cells: dict[tuple[int, ...], np.ndarray] = field(repr=False, default_factory=dict)
    meta: dict = field(default_factory=dict)

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    def cell_indices(self, w) -> np.ndarray:
        key = tuple(int(c) for c in w)
        if key not in self.cells:
            raise KeyError(f"lattice point {key} has no grid cell in this box")
        return self.cells[key]


@dataclass
class SpectralData:
    eigenvalues: np.ndarray
    eigenvectors: np.ndarray  # columns
    ham: GridHamiltonian

    def __post_init__(self):
        order = np.argsort(self.eigenvalues)
        self.eigenvalues = np.asarray(self.eigenvalues)[order]
        self.eigenvectors = np.asarray(self.eigenvectors)[:, order]


def _axis_offsets(L: int, h: float) -> np.ndarray:
    """Grid offsets h*j strictly inside the open interval (-L, L)."""
    jmax = math.ceil(L / h) - 1
    return h * np.arange(-jmax, jmax + 1)


def _kinetic(points_per_axis: int, naxes: int, h: float) -> np.ndarray:
    p = points_per_axis
    t1 = scipy.sparse.diags(
        [np.full(p - 1, -1.0), np.full(p, 2.0), np.full(p - 1, -1.0)],
        offsets=[-1, 0, 1],
    ) / (2.0 * h * h)
    total = None
    for axis in range(naxes):
        mats = [scipy.sparse.identity(p)] * naxes
        mats[axis] = t1
        term = mats[0]
        for m in mats[1:]:
            term = scipy.sparse.kron(term, m)
        total = term if total is None else total + term
    return np.asarray(total.todense())


def _build(
    axis_coords: list[np.ndarray],
    h: float,
    n: int,
    d: int,
    interaction: InteractionSpec | None,
    disorder: DisorderSample | None,
    alloy: AlloySpec | None,
    box: MPBox | None,
) -> GridHamiltonian:
    p = len(axis_coords[0])
    if any(len(a) != p for a in axis_coords):
        raise ValueError("all axes must have the same number of grid points")
    naxes = n * d
    dim = p**naxes
    if dim > DENSE_LIMIT:
        raise CapExceededError(f"matrix dimension {dim} exceeds cap {DENSE_LIMIT}")
    grid = np.array(list(itertools.product(*axis_coords)), dtype=float)
    matrix = _kinetic(p, naxes, h)
    diag = np.zeros(dim)
    for i, x in enumerate(grid):
        val = 0.0
        if interaction is not None:
            val += interaction_energy(interaction, x, d)
        if disorder is not None:
            val += multiparticle_potential(disorder, alloy, x, d)
        diag[i] = val
    matrix[np.diag_indices(dim)] += diag
    cells: dict[tuple[int, ...], list[int]] = {}
    for i, x in enumerate(grid):
        key = tuple(int(math.floor(c + 0.5)) for c in x)
        cells.setdefault(key, []).append(i)
    ham = GridHamiltonian(
        box=box,
        h=h,
        grid=grid,
        matrix=matrix,
        n=n,
        d=d,
        cells={k: np.array(v) for k, v in cells.items()},
    )
    return ham


def assemble(
    box: MPBox,
    h: float = 1.0,
    interaction: InteractionSpec | None = None,
    disorder: DisorderSample | None = None,
    alloy: AlloySpec | None = None,
) -> GridHamiltonian:
    """Assemble the finite-volume Hamiltonian of a box at mesh h.

    The disorder sample must cover the full projection of the box inflated
    by the bump diameter R.
    """
    if h <= 0:
        raise ValueError("mesh h must be positive")
    if (disorder is None) != (alloy is None):
        raise ValueError("disorder and alloy spec must be given together")
    if disorder is not None:
        needed = set()
        offs = _axis_offsets(box.radius, h)
        half = alloy.R / 2.0
        for j in range(1, box.n + 1):
            c = box.particle(j)
            ranges = [
                range(
                    math.ceil(ci + offs[0] - half), math.floor(ci + offs[-1] + half) + 1
                )
                for ci in c
            ]
            needed.update(itertools.product(*ranges))
        if not disorder.covers(needed):
            missing = [s for s in needed if s not in disorder.values]
            raise CoverageError(f"disorder sample misses sites, e.g. {missing[:3]}")
    offs = _axis_offsets(box.radius, h)
    axes = [c + offs for c in box.center]
    return _build(axes, h, box.n, box.d, interaction, disorder, alloy, box)


def assemble_segment(
    origin,
    points_per_axis: int,
    n: int,
    d: int,
    h: float = 1.0,
    interaction: InteractionSpec | None = None,
    disorder: DisorderSample | None = None,
    alloy: AlloySpec | None = None,
) -> GridHamiltonian:
    """Assemble on an explicit rectangular grid (used for even side lengths)."""
    if h <= 0:
        raise ValueError("mesh h must be positive")
    offs = h * np.arange(points_per_axis)
    axes = [c + offs for c in origin]
    if len(axes) != n * d:
        raise ValueError(f"origin must have n*d = {n * d} coordinates")
    return _build(axes, h, n, d, interaction, disorder, alloy, None)


def assemble_split(
    box: MPBox,
    J,
    h: float = 1.0,
    interaction: InteractionSpec | None = None,
    disorder: DisorderSample | None = None,
    alloy: AlloySpec | None = None,
):
    """Tensor factors (H', H'') of a PI box with witness partition J.

    Particles are reordered so J comes first; the returned `reordered` box
    satisfies assemble(reordered) == kron(H', I) + kron(I, H'') exactly when
    the cross interaction vanishes on the box.
    """
    J = sorted(set(J))
    rest = [j for j in range(1, box.n + 1) if j not in J]
    if not J or not rest:
        raise ValueError(f"J must be a nonempty proper subset of 1..{box.n}")
    if interaction is not None:
        for j1 in J:
            for j2 in rest:
                gap = max(
                    max(0, abs(a - b) - 2 * box.radius)
                    for a, b in zip(box.particle(j1), box.particle(j2))
                )
                if gap <= interaction.r0:
                    raise ValueError(
                        f"cross interaction does not vanish: particles {j1},{j2} "
                        f"come within {gap} <= r0={interaction.r0}"
                    )
    order = J + rest
    reordered = MPBox(
        tuple(c for j in order for c in box.particle(j)), box.radius, box.n, box.d
    )
    box1 = MPBox(
        tuple(c for j in J for c in box.particle(j)), box.radius, len(J), box.d
    )
    box2 = MPBox(
        tuple(c for j in rest for c in box.particle(j)), box.radius, len(rest), box.d
    )
    h1 = assemble(box1, h, interaction, disorder, alloy)
    h2 = assemble(box2, h, interaction, disorder, alloy)
    return h1, h2, reordered


def kron_sum(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    return np.kron(a, np.eye(b.shape[0])) + np.kron(np.eye(a.shape[0]), b)


def eigensolve(ham: GridHamiltonian) -> SpectralData:
    """Full dense symmetric eigendecomposition with a residual check."""
    if ham.dim > DENSE_LIMIT:
        raise CapExceededError(f"dimension {ham.dim} exceeds cap {DENSE_LIMIT}")
    vals, vecs = np.linalg.eigh(ham.matrix)
    scale = max(np.abs(vals).max(), 1.0)
    resid = np.linalg.norm(ham.matrix @ vecs - vecs * vals, axis=0)
    if resid.max() > 1e-8 * scale:
        raise RuntimeError(f"eigensolver residual too large: {resid.max():.3e}")
    return SpectralData(vals, vecs, ham)


def eigensolve_lowest(ham: GridHamiltonian, k: int) -> SpectralData:
    """Lowest-k eigenpairs (for large boxes where only the band edge matters)."""
    vals, vecs = scipy.linalg.eigh(ham.matrix, subset_by_index=(0, k - 1))
    return SpectralData(vals, vecs, ham)


def ground_energy_reference(
    interaction: InteractionSpec | None, box: MPBox, h: float = 1.0
) -> tuple[float, MPBox]:
    """Minimum eigenvalue of -1/2*Laplacian + U on the given box (no disorder)."""
    ham = assemble(box, h, interaction, None, None)
    vals = np.linalg.eigvalsh(ham.matrix)
    return float(vals[0]), box


@dataclass
class BoxInstance:
    """A box plus its sampled environment, with cached spectral data.

    Sub-instances share the parent's disorder sample, so classifying the
    sub-boxes of a box re-uses the exact same realization.
    """

    box: MPBox
    alloy: AlloySpec
    interaction: InteractionSpec | None
    disorder: DisorderSample
    h: float = 1.0
    _spectral: SpectralData | None = field(default=None, repr=False)
    _subcache: dict = field(default_factory=dict, repr=False)

    @classmethod
    def create(
        cls,
        box: MPBox,
        alloy: AlloySpec,
        interaction: InteractionSpec | None,
        seed: int,
        h: float = 1.0,
        margin: int = 0,
    ) -> "BoxInstance":
        half = alloy.R / 2.0
        reach = box.radius + margin + half
        region: set[tuple[int, ...]] = set()
        for j in range(1, box.n + 1):
            c = box.particle(j)
            ranges = [
                range(math.ceil(ci - reach), math.floor(ci + reach) + 1) for ci in c
            ]
            region.update(itertools.product(*ranges))
        sample = sample_disorder(alloy, sorted(region), seed)
        return cls(box, alloy, interaction, sample, h)

    def spectral(self) -> SpectralData:
        if self._spectral is None:
            ham = assemble(self.box, self.h, self.interaction, self.disorder, self.alloy)
            self._spectral = eigensolve(ham)
        return self._spectral

    def sub_instance(self, center, radius: int) -> "BoxInstance":
        key = (tuple(center), radius)
        if key not in self._subcache:
            sub = MPBox(tuple(center), radius, self.box.n, self.box.d)
            if not self.box.contains_box(sub):
                raise ValueError(f"sub-box {sub} not contained in {self.box}")
            self._subcache[key] = BoxInstance(
                sub, self.alloy, self.interaction, self.disorder, self.h
            )
        return self._subcache[key]
