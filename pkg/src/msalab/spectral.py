"""Resolvents, discretized Green functions and box classifiers.

A box is classified at an energy E through the cell-to-cell operator norms
of its resolvent: nonresonance compares the spectral gap at E against
exp(-L^beta), nonsingularity compares center-to-boundary Green blocks
against exp(-gamma(m, L, n)).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .geometry import MPBox, inner_boundary, outer_layer
from .hamiltonian import BoxInstance, SpectralData

ALPHA = 1.5
BETA = 0.5


class ResonantEnergyError(ValueError):
    """E is too close to the spectrum for the requested quantity."""


def gamma(m: float, L: int, n: int, N: int) -> float:
    """Decay threshold exponent m*L*(1 + L^(-1/4))^(N-n+1)."""
    if m <= 0 or L < 1 or not 1 <= n <= N:
        raise ValueError(f"bad arguments m={m}, L={L}, n={n}, N={N}")
    return m * L * (1.0 + L ** (-0.25)) ** (N - n + 1)


def resolvent_matrix(sd: SpectralData, E: float) -> np.ndarray:
    """(H - E)^(-1) as a dense matrix."""
    _require_off_spectrum(sd, E)
    w = 1.0 / (sd.eigenvalues - E)
    return (sd.eigenvectors * w) @ sd.eigenvectors.T


def _require_off_spectrum(sd: SpectralData, E: float, rel: float = 1e-12):
    scale = max(np.abs(sd.eigenvalues).max(), 1.0)
    if np.min(np.abs(sd.eigenvalues - E)) <= rel * scale:
        raise ResonantEnergyError(f"E={E} lies on the spectrum (within {rel} relative)")


def green_block(sd: SpectralData, E: float, v, w) -> float:
    """Operator norm of the cell-v x cell-w block of the resolvent."""
    _require_off_spectrum(sd, E)
    rows = sd.ham.cell_indices(v)
    cols = sd.ham.cell_indices(w)
    wt = 1.0 / (sd.eigenvalues - E)
    block = (sd.eigenvectors[rows] * wt) @ sd.eigenvectors[cols].T
    if block.size == 1:
        return abs(float(block[0, 0]))
    return float(np.linalg.norm(block, 2))


def green_row(sd: SpectralData, E: float, v, targets) -> dict:
    """D(v, y; E) for many targets y at once (fast when cells are single points)."""
    _require_off_spectrum(sd, E)
    rows = sd.ham.cell_indices(v)
    wt = 1.0 / (sd.eigenvalues - E)
    if len(rows) == 1 and all(len(sd.ham.cell_indices(y)) == 1 for y in targets):
        g = (sd.eigenvectors[rows[0]] * wt) @ sd.eigenvectors.T
        return {tuple(y): abs(float(g[sd.ham.cell_indices(y)[0]])) for y in targets}
    return {tuple(y): green_block(sd, E, v, y) for y in targets}


@dataclass
class GreenBlockTable:
    """Cell-to-cell resolvent block norms of one box at one energy."""

    box: MPBox
    energy: float
    values: dict = field(repr=False)

    def __getitem__(self, key):
        v, w = key
        v, w = tuple(v), tuple(w)
        if (v, w) in self.values:
            return self.values[(v, w)]
        return self.values[(w, v)]


def build_green_table(sd: SpectralData, E: float, sources, targets) -> GreenBlockTable:
    values = {}
    for v in sources:
        row = green_row(sd, E, v, targets)
        for y, val in row.items():
            values[(tuple(v), y)] = val
    return GreenBlockTable(sd.ham.box, E, values)


# ---------------------------------------------------------------------------
# resonance / singularity classification


def resonance_threshold(L: int, beta: float = BETA) -> float:
    return math.exp(-float(L) ** beta)


def classify_resonance(sd: SpectralData, E: float, L: int | None = None, beta: float = BETA) -> bool:
    """True iff dist(E, spectrum) >= exp(-L^beta) (E-NR)."""
    if L is None:
        L = sd.ham.box.radius
    gap = float(np.min(np.abs(sd.eigenvalues - E)))
    return gap >= resonance_threshold(L, beta)


@dataclass(frozen=True)
class CnrPolicy:
    """Which sub-boxes are examined for complete nonresonance.

    "concentric": concentric sub-boxes at every admissible radius.
    "strided": additionally boxes centered on a stride grid with radii in a
    geometric ladder.  The full property quantifies over every admissible
    sub-box; both policies are conservative restrictions of that family and
    the examined family is recorded with each verdict.
    """

    kind: str = "strided"
    stride: int | None = None
    ladder_factor: float = 1.5

    def sub_boxes(self, box: MPBox, alpha: float = ALPHA):
        L = box.radius
        lmin = math.ceil(L ** (1.0 / alpha))
        out = []
        for ell in range(lmin, L):
            out.append((box.center, ell))
        if self.kind == "strided":
            stride = self.stride or max(1, math.ceil(L / 8))
            radii = []
            r = lmin
            while r < L:
                radii.append(r)
                r = math.ceil(r * self.ladder_factor)
            naxes = box.n * box.d
            offsets = _stride_offsets(L, stride, naxes)
            for off in offsets:
                if all(o == 0 for o in off):
                    continue
                center = tuple(c + o for c, o in zip(box.center, off))
                for ell in radii:
                    if max(abs(o) for o in off) + ell <= L:
                        out.append((center, ell))
        return out


def _stride_offsets(L: int, stride: int, naxes: int):
    import itertools

    axis = list(range(-L + 1, L, stride))
    return list(itertools.product(axis, repeat=naxes))


def classify_cnr(
    instance: BoxInstance,
    E: float,
    policy: CnrPolicy | None = None,
    alpha: float = ALPHA,
    beta: float = BETA,
) -> tuple[bool, list]:
    """E-complete nonresonance of a box under a sub-box family policy.

    Returns (is_cnr, examined family of (center, radius) pairs).
    """
    policy = policy or CnrPolicy()
    box = instance.box
    examined: list = []
    if not classify_resonance(instance.spectral(), E, box.radius, beta):
        return False, examined
    for center, ell in policy.sub_boxes(box, alpha):
        examined.append((tuple(center), ell))
        sub = instance.sub_instance(center, ell)
        if not classify_resonance(sub.spectral(), E, ell, beta):
            return False, examined
    return True, examined


def classify_singularity(
    instance: BoxInstance, E: float, m: float, N: int, beta: float = BETA
) -> bool:
    """(E,m)-nonsingularity: center-to-outer-layer blocks all below e^{-gamma}.

    Refuses energies within exp(-L^beta) of the spectrum: the notion is
    meaningless at resonance.
    """
    box = instance.box
    sd = instance.spectral()
    gap = float(np.min(np.abs(sd.eigenvalues - E)))
    if gap < resonance_threshold(box.radius, beta):
        raise ResonantEnergyError(
            f"E={E} within {resonance_threshold(box.radius, beta):.3e} of the spectrum"
        )
    threshold = math.exp(-gamma(m, box.radius, box.n, N))
    row = green_row(sd, E, box.center, outer_layer(box))
    return all(val <= threshold for val in row.values())


@dataclass
class BoxClassification:
    energy: float
    m: float
    beta: float
    alpha: float
    nonresonant: bool
    completely_nonresonant: bool
    nonsingular: bool | None  # None when refused at a resonant energy
    spectral_gap: float
    cnr_family: list = field(default_factory=list)


def classify_box(
    instance: BoxInstance,
    E: float,
    m: float,
    N: int,
    policy: CnrPolicy | None = None,
    alpha: float = ALPHA,
    beta: float = BETA,
) -> BoxClassification:
    sd = instance.spectral()
    gap = float(np.min(np.abs(sd.eigenvalues - E)))
    nr = classify_resonance(sd, E, instance.box.radius, beta)
    cnr, family = classify_cnr(instance, E, policy, alpha, beta) if nr else (False, [])
    try:
        ns = classify_singularity(instance, E, m, N, beta)
    except ResonantEnergyError:
        ns = None
    return BoxClassification(E, m, beta, alpha, nr, cnr, ns, gap, family)


# ---------------------------------------------------------------------------
# Combes-Thomas and Weyl diagnostics


def combes_thomas_check(sd: SpectralData, E: float, delta: float) -> dict:
    """Fit the exponential decay rate of D(u, .; E) for E below the spectrum.

    Requires dist(E, spectrum) >= delta with E below the bottom eigenvalue.
    Returns the fitted rate (must be positive), prefactor and R^2.
    """
    box = sd.ham.box
    if E > sd.eigenvalues[0] - delta:
        raise ValueError(
            f"E={E} is not below the spectrum by delta={delta} "
            f"(bottom eigenvalue {sd.eigenvalues[0]:.6g})"
        )
    targets = list(box.lattice_points())
    row = green_row(sd, E, box.center, targets)
    rs, logs = [], []
    for y, val in row.items():
        r = max(abs(a - b) for a, b in zip(y, box.center))
        if r == 0 or val <= 0:
            continue  # the self-block is not a decay point
        rs.append(float(r))
        logs.append(math.log(val))
    rs, logs = np.array(rs), np.array(logs)
    slope, intercept = np.polyfit(rs, logs, 1)
    pred = slope * rs + intercept
    ss_res = float(np.sum((logs - pred) ** 2))
    ss_tot = float(np.sum((logs - logs.mean()) ** 2))
    r2 = 1.0 - ss_res / ss_tot if ss_tot > 0 else 1.0
    return {"rate": float(-slope), "prefactor": float(math.exp(intercept)), "r2": r2}


def weyl_cutoff(sd: SpectralData, eta: float, delta: float, nprime: int, d: int) -> dict:
    """Count of eigenvalues <= eta + delta and the volume bound delta^{n'd/2}|B|.

    The bound is stated for the zero-potential reference; nonnegative
    potentials can only shrink the count (min-max).
    """
    count = int(np.sum(sd.eigenvalues <= eta + delta))
    box = sd.ham.box
    card = box.lattice_cardinality() if box is not None else sd.ham.dim
    bound = delta ** (nprime * d / 2.0) * card
    return {"count": count, "bound": float(bound), "within": count <= bound}


def inner_boundary_points(box: MPBox):
    return inner_boundary(box)
