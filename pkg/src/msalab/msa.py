"""Multi-scale machinery: scale schedule, subharmonic descent, singular
chains, tunneling, and Monte Carlo estimation of the scale-induction
properties (DS, W1, W2, PT).

All probability estimates are frequencies over independent disorder samples
keyed by consecutive seeds; results are reduced in ascending seed order so
reports are reproducible regardless of execution order.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field

import numpy as np

from .geometry import (
    Annulus,
    ChainEscapeError,
    MPBox,
    box_distance,
    classify_interaction,
    cover_contains,
    is_separable_pair,
    kappa,
    non_separable_cover,
)
from .hamiltonian import (
    DENSE_LIMIT,
    BoxInstance,
    CapExceededError,
)
from .randomfield import AlloySpec, InteractionSpec, sample_disorder, site_uniforms
from .spectral import (
    ALPHA,
    BETA,
    CnrPolicy,
    ResonantEnergyError,
    classify_cnr,
    classify_singularity,
    gamma,
    green_block,
    resonance_threshold,
)

# ---------------------------------------------------------------------------
# scale schedule


@dataclass(frozen=True)
class ScaleSchedule:
    """L_k = floor(L_{k-1}^alpha) with the fixed exponents alpha=3/2, beta=1/2."""

    L0: int
    alpha: float = ALPHA
    beta: float = BETA

    def __post_init__(self):
        if self.L0 < 3:
            raise ValueError(f"L0 must be >= 3, got {self.L0}")

    def scales(self, k_max: int) -> tuple[int, ...]:
        return scale_sequence(self.L0, k_max)


def scale_sequence(L0: int, k_max: int) -> tuple[int, ...]:
    # L0 = 2 is a fixed point of floor(L^1.5); the sequence must increase
    if L0 < 3:
        raise ValueError(f"L0 must be >= 3, got {L0}")
    out = [L0]
    for _ in range(k_max):
        out.append(math.floor(out[-1] ** ALPHA))
    return tuple(out)


# ---------------------------------------------------------------------------
# subharmonicity and radial descent


def radial_descent_bound(Q: float, L: int, W: int, ell: int, max_f: float) -> float:
    """Q^((L - W - 3*ell)/ell) * max_f; errors when the exponent is vacuous."""
    if Q <= 0:
        raise ValueError("Q must be positive")
    if L <= W + 3 * ell:
        raise ValueError(f"vacuous bound: L={L} <= W + 3*ell = {W + 3 * ell}")
    return Q ** ((L - W - 3 * ell) / ell) * max_f


@dataclass
class SubharmonicCertificate:
    Q: float
    A: float
    ell: int
    S: frozenset
    W: int
    log: dict = field(default_factory=dict)


def _radius(x, center) -> int:
    return max(abs(a - b) for a, b in zip(x, center))


def verify_subharmonic(
    f: dict,
    box: MPBox,
    Q: float,
    A: float,
    ell: int,
    S,
    W: int | None = None,
):
    """Pointwise check of the two-condition subharmonicity definition.

    f maps every lattice point of the box to a nonnegative value.  Returns
    (certificate, None) on success or (None, counterexample point).  On
    success the radial-descent conclusion is also verified at the center.
    """
    S = frozenset(tuple(x) for x in S)
    if W is None:
        W = _annuli_width(S, box)
    points = [tuple(x) for x in box.lattice_points()]
    values = {p: float(f[p]) for p in points}
    if any(v < 0 or not math.isfinite(v) for v in values.values()):
        raise ValueError("f must be finite and nonnegative")
    L = box.radius
    # Conditions are checked where a full outward shell of radius 2*ell+1
    # exists inside the box; closer to the boundary the descent iteration
    # never applies them, and an inward-only shell would make the conditions
    # unsatisfiable for boundary-dominated functions.
    margin = 2 * ell + 1
    checked_i = checked_ii = 0
    for x in points:
        rx = _radius(x, box.center)
        if (L - 1) - rx < margin:
            continue
        if x not in S:
            shell = [values[w] for w in points if _radius(w, x) == 2 * ell + 1]
            checked_i += 1
            if not shell or values[x] > Q * max(shell) + 1e-12:
                return None, x
        else:
            ok = False
            for rho in range(ell, int(A * ell) + 1):
                shell = [
                    values[w]
                    for w in points
                    if rho <= _radius(w, x) <= rho + 2 * ell + 1
                ]
                if shell and values[x] <= Q * max(shell) + 1e-12:
                    ok = True
                    break
            checked_ii += 1
            if not ok:
                return None, x
    log = {"checked_i": checked_i, "checked_ii": checked_ii, "descent_checked": False}
    max_f = max(values.values())
    if L > W + 3 * ell:
        bound = radial_descent_bound(Q, L, W, ell, max_f)
        center_val = values[tuple(box.center)]
        log["descent_checked"] = True
        log["descent_bound"] = bound
        log["center_value"] = center_val
        if center_val > bound * (1 + 1e-9) + 1e-300:
            raise RuntimeError(
                f"radial descent violated: f(u)={center_val:.3e} > bound={bound:.3e}"
            )
    return SubharmonicCertificate(Q, A, ell, S, W, log), None


def _annuli_width(S, box: MPBox) -> int:
    """Total width of the merged radial annuli around the center covering S."""
    radii = sorted({_radius(x, box.center) for x in S})
    return _merge_intervals([(r, r) for r in radii], width_only=True)


def _merge_intervals(intervals, width_only: bool = False):
    merged: list[list[int]] = []
    for lo, hi in sorted(intervals):
        if merged and lo <= merged[-1][1] + 1:
            merged[-1][1] = max(merged[-1][1], hi)
        else:
            merged.append([lo, hi])
    if width_only:
        return sum(hi - lo + 1 for lo, hi in merged)
    return [tuple(iv) for iv in merged]


# ---------------------------------------------------------------------------
# singularity classifiers over sub-boxes


def make_singularity_classifier(instance: BoxInstance, E: float, m: float, N: int):
    """Memoized predicate: is the radius-ell sub-box at v (E,m)-singular?

    Near-resonant sub-boxes count as singular (the event estimators are
    upper-bound-seeking).
    """
    cache: dict = {}

    def singular(v, ell: int) -> bool:
        key = (tuple(v), ell)
        if key not in cache:
            sub = instance.sub_instance(v, ell)
            try:
                cache[key] = not classify_singularity(sub, E, m, N)
            except ResonantEnergyError:
                cache[key] = True
        return cache[key]

    return singular


def sub_centers(box: MPBox, ell: int, stride: int = 1):
    """Centers v with the continuum ell-box contained in the continuum box."""
    reach = box.radius - ell
    ranges = [range(c - reach, c + reach + 1, stride) for c in box.center]
    return [tuple(v) for v in itertools.product(*ranges)]


def detect_bad_box(
    instance: BoxInstance,
    v,
    ell: int,
    E: float,
    m: float,
    N: int,
    singular=None,
) -> tuple[bool, list]:
    """A singular ell-box each of whose kappa(n)+1 annuli holds another S-box.

    Annuli around v have width B = 2*n*ell + 1 with gaps of the same width:
    A_j spans radii [ell + (2j-1)B, ell + 2jB).  Evidence lists, per annulus,
    a singular witness center or None.
    """
    box = instance.box
    n = box.n
    singular = singular or make_singularity_classifier(instance, E, m, N)
    v = tuple(v)
    if not singular(v, ell):
        return False, []
    B = 2 * n * ell + 1
    evidence = []
    for j in range(1, kappa(n) + 2):
        ann = Annulus(v, ell + (2 * j - 1) * B, ell + 2 * j * B)
        witness = None
        for w in sub_centers(box, ell):
            if ann.contains_box(w, ell) and singular(w, ell):
                witness = w
                break
        evidence.append(witness)
        if witness is None:
            return False, evidence
    return True, evidence


@dataclass
class SChain:
    origin: tuple
    centers: list
    ell: int

    @property
    def length(self) -> int:
        return len(self.centers)


def find_s_chains(
    instance: BoxInstance,
    ell: int,
    E: float,
    m: float,
    N: int,
    singular=None,
) -> tuple[list[SChain], int]:
    """Greedy singular chains: grow the radius by ell while an adjacent
    ell-box (set distance <= 1 from the grown box) is singular."""
    box = instance.box
    singular = singular or make_singularity_classifier(instance, E, m, N)
    s_centers = [v for v in sub_centers(box, ell) if singular(v, ell)]
    chains: list[SChain] = []
    used: set = set()
    for v1 in s_centers:
        if v1 in used:
            continue
        chain = [v1]
        t = 1
        while True:
            cand = [
                w
                for w in s_centers
                if w not in chain and _radius(w, v1) <= (t + 1) * ell + 1
            ]
            if not cand:
                break
            chain.append(min(cand))
            t += 1
        used.update(chain)
        chains.append(SChain(v1, chain, ell))
    max_len = max((c.length for c in chains), default=0)
    return chains, max_len


def enveloping_box(
    chain: SChain,
    v,
    ambient: MPBox,
    singular=None,
) -> tuple[MPBox, dict]:
    """Smallest box centered at v containing the chain.

    Raises ChainEscapeError when the box does not stay 2*ell+1 away from the
    ambient boundary.  When a singularity predicate is supplied, every
    ell-box adjacent to the boundary must be nonsingular.
    """
    if not chain.centers:
        raise ValueError("chain is empty")
    v = tuple(v)
    ell = chain.ell
    L_t = max(ell, max(_radius(t, v) for t in chain.centers) + ell)
    box = MPBox(v, L_t, ambient.n, ambient.d)
    if _radius(v, ambient.center) + L_t > ambient.radius - 2 * ell - 1:
        raise ChainEscapeError(
            f"enveloping box radius {L_t} at {v} escapes the 2*ell+1 margin "
            f"of the ambient box (L={ambient.radius})"
        )
    info: dict = {"radius": L_t}
    if singular is not None:
        adjacent = [
            w
            for w in sub_centers(ambient, ell)
            if L_t - ell + 1 <= _radius(w, v) <= L_t + ell + 1
        ]
        bad = [w for w in adjacent if singular(w, ell)]
        info["adjacent_checked"] = len(adjacent)
        if bad:
            raise RuntimeError(f"singular ell-box adjacent to enveloping boundary: {bad[0]}")
    return box, info


# ---------------------------------------------------------------------------
# Green-function subharmonicity (hypotheses checked, then verified pointwise)


class HypothesisError(RuntimeError):
    """A hypothesis of the Green-function subharmonicity construction fails."""


def build_green_subharmonic(
    instance: BoxInstance,
    E: float,
    m: float,
    ell: int,
    N: int,
    c4: float,
    policy: CnrPolicy | None = None,
) -> dict:
    """Boundary-maximum of Green blocks as a certified subharmonic function.

    Hypotheses: the box is E-CNR and contains no (E,m)-bad ell-box.  The
    covered set S is the union of center annuli holding all singular
    ell-boxes; Q = c4 * (n*ell)^(d-1) * e^{ell^beta} * e^{-gamma(m,ell,n)}.
    """
    box = instance.box
    n, d, L = box.n, box.d, box.radius
    if not 1 < ell < L:
        raise ValueError(f"need 1 < ell < L, got ell={ell}, L={L}")
    sd = instance.spectral()
    if float(np.min(np.abs(sd.eigenvalues - E))) < resonance_threshold(L):
        raise HypothesisError("energy is resonant for the box")
    cnr, family = classify_cnr(instance, E, policy)
    if not cnr:
        raise HypothesisError("box is not E-CNR")
    singular = make_singularity_classifier(instance, E, m, N)
    s_centers = [v for v in sub_centers(box, ell) if singular(v, ell)]
    for v in s_centers:
        bad, _ = detect_bad_box(instance, v, ell, E, m, N, singular)
        if bad:
            raise HypothesisError(f"(E,m)-bad ell-box at {v}")
    intervals = _merge_intervals(
        [
            (max(0, _radius(v, box.center) - ell + 1), min(L - 1, _radius(v, box.center) + ell - 1))
            for v in s_centers
        ]
    )
    W = sum(hi - lo + 1 for lo, hi in intervals)
    S = {
        x
        for x in (tuple(p) for p in box.lattice_points())
        if any(lo <= _radius(x, box.center) <= hi for lo, hi in intervals)
    }
    Q = c4 * (n * ell) ** (d - 1) * math.exp(ell**BETA) * math.exp(-gamma(m, ell, n, N))
    A = 2 * (kappa(n) + 1) * (2 * n + 1)
    boundary = [
        tuple(x)
        for x in box.lattice_points()
        if _radius(x, box.center) == L - 1
    ]
    f = {}
    for x in box.lattice_points():
        x = tuple(x)
        f[x] = max(green_block(sd, E, x, y) for y in boundary)
    cert, counter = verify_subharmonic(f, box, Q, A, ell, S, W)
    return {
        "f": f,
        "Q": Q,
        "A": A,
        "S": S,
        "W": W,
        "annuli": intervals,
        "s_centers": s_centers,
        "certificate": cert,
        "counterexample": counter,
        "cnr_family": family,
    }


# ---------------------------------------------------------------------------
# tunneling and nu-counting


def is_tunneling(
    instance: BoxInstance,
    ell: int,
    m: float,
    N: int,
    energies,
    R: int = 1,
    stride: int = 1,
) -> bool:
    """Whether some probed E admits two separable singular ell-sub-boxes."""
    box = instance.box
    centers = sub_centers(box, ell, stride)
    for E in energies:
        singular = make_singularity_classifier(instance, E, m, N)
        s_centers = [v for v in centers if singular(v, ell)]
        for a, b in itertools.combinations(s_centers, 2):
            pair = (
                MPBox(a, ell, box.n, box.d),
                MPBox(b, ell, box.n, box.d),
            )
            if is_separable_pair(pair[0], pair[1], R, N).separable:
                return True
    return False


def classify_tunneling(
    factors: list[BoxInstance],
    ell: int,
    m: float,
    N: int,
    energies,
    R: int = 1,
    stride: int = 1,
) -> dict:
    """T/NT per factor box and PT for the product.

    The product is partially tunneling when some factor of some split is
    tunneling; since the factors are given per split, PT reduces to "any
    factor is T" (for N=2 the only split is 1+1).
    """
    flags = [is_tunneling(f, ell, m, N, energies, R, stride) for f in factors]
    return {"tunneling": flags, "partial": any(flags)}


@dataclass
class NuCounts:
    nu_s: int
    nu_pi: int
    nu_fi: int

    def __post_init__(self):
        if self.nu_s > self.nu_pi + self.nu_fi:
            raise ValueError("nu_S must not exceed nu_PI + nu_FI")


def _max_separable(centers, ell: int, n: int, d: int, R: int, N: int) -> int:
    """Size of a maximal pairwise-separable set of ell-boxes (exact when small)."""
    boxes = [MPBox(c, ell, n, d) for c in centers]
    k = len(boxes)
    if k == 0:
        return 0
    adj = [
        [is_separable_pair(boxes[i], boxes[j], R, N).separable for j in range(k)]
        for i in range(k)
    ]
    if k <= 16:
        best = 0
        for mask in range(1 << k):
            idx = [i for i in range(k) if mask >> i & 1]
            if len(idx) <= best:
                continue
            if all(adj[i][j] for i, j in itertools.combinations(idx, 2)):
                best = len(idx)
        return best
    best = 0
    for start in range(k):
        chosen = [start]
        for j in range(k):
            if j != start and all(adj[i][j] for i in chosen):
                chosen.append(j)
        best = max(best, len(chosen))
    return best


def count_singular_separable(
    instance: BoxInstance,
    ell: int,
    E: float,
    m: float,
    N: int,
    r0: float,
    R: int = 1,
    stride: int = 1,
) -> NuCounts:
    """Maximal pairwise-separable singular sets, split by interaction class."""
    box = instance.box
    singular = make_singularity_classifier(instance, E, m, N)
    s_centers = [v for v in sub_centers(box, ell, stride) if singular(v, ell)]
    fi = [
        v
        for v in s_centers
        if classify_interaction(MPBox(v, ell, box.n, box.d), r0, N).tag == "FI"
    ]
    pi = [v for v in s_centers if v not in fi]
    nu_s = _max_separable(s_centers, ell, box.n, box.d, R, N)
    nu_pi = _max_separable(pi, ell, box.n, box.d, R, N)
    nu_fi = _max_separable(fi, ell, box.n, box.d, R, N)
    return NuCounts(nu_s, nu_pi, nu_fi)


# ---------------------------------------------------------------------------
# Monte Carlo property estimation


@dataclass(frozen=True)
class MSAParams:
    """Induction parameters: mass m, exponents p and q, energy window."""

    m: float = 0.8
    p: float = 1.5
    q: float = 4.0
    E0: float = 0.0
    eta: float = 0.25
    n_energies: int = 64
    grid_step: float | None = None  # fixed step makes grids nest across eta sweeps

    def __post_init__(self):
        if self.m <= 0 or self.eta <= 0 or self.n_energies < 1:
            raise ValueError("need m > 0, eta > 0 and n_energies >= 1")

    @property
    def interval(self) -> tuple[float, float]:
        return (self.E0, self.E0 + self.eta)


def energy_grid(params: MSAParams, eigenvalues, L: int) -> tuple[float, ...]:
    """Base grid over I plus adaptive probes at lambda_j +/- e^{-L^beta}.

    Probes are included only when they land inside I, so grids for nested
    intervals are themselves nested (at a fixed step).
    """
    lo, hi = params.interval
    step = params.grid_step or params.eta / max(params.n_energies - 1, 1)
    out = set()
    j = 0
    while lo + j * step <= hi + 1e-12:
        out.add(round(lo + j * step, 15))
        j += 1
    thr = resonance_threshold(L)
    for lam in np.atleast_1d(eigenvalues):
        for probe in (lam - thr, lam + thr):
            if lo <= probe <= hi:
                out.add(float(probe))
    return tuple(sorted(out))


def wilson_interval(successes: int, trials: int, z: float = 1.96) -> tuple[float, float]:
    if trials == 0:
        raise ValueError("trials must be >= 1")
    phat = successes / trials
    denom = 1 + z * z / trials
    center = (phat + z * z / (2 * trials)) / denom
    half = z * math.sqrt(phat * (1 - phat) / trials + z * z / (4 * trials**2)) / denom
    return (max(0.0, center - half), min(1.0, center + half))


@dataclass
class ReportRow:
    property: str
    n: int
    k: int
    L: int
    trials: int
    events: int
    frequency: float
    ci_low: float
    ci_high: float
    bound: float
    passed: bool
    seed_start: int
    seed_end: int
    grid_size: int
    params: dict = field(default_factory=dict)


@dataclass
class MSAReport:
    rows: list[ReportRow] = field(default_factory=list)
    params: MSAParams | None = None
    interval: tuple[float, float] | None = None

    def ds_frequencies(self, n: int) -> list[tuple[int, float]]:
        return [
            (r.k, r.frequency)
            for r in sorted(self.rows, key=lambda r: r.k)
            if r.property == "DS" and r.n == n
        ]


_PAIR_SEED_TAG = 0x5EBA11


def sample_separable_center(
    origin, L: int, R: int, N: int, n: int, d: int, seed: int
) -> tuple:
    """Deterministic second center for a separable pair, oracle-verified.

    Coordinates are offset from the first center by magnitudes beyond the
    non-separability reach; for n >= 2 candidates inside the assignment-box
    cover are rejected and redrawn.
    """
    base = MPBox(tuple(origin), L, n, d)
    reach = 2 * N * (L + R)
    cover = non_separable_cover(tuple(origin), L, R, n, d) if n >= 2 else []
    for attempt in range(64):
        rows = np.array(
            [[_PAIR_SEED_TAG, attempt, i, c] for i in range(n * d) for c in (0, 1)],
            dtype=np.int64,
        )
        u = site_uniforms(seed, rows).reshape(n * d, 2)
        offs = []
        for i in range(n * d):
            mag = reach + 2 * L + 1 + int(u[i, 0] * (reach + 2 * L))
            sign = 1 if u[i, 1] < 0.5 else -1
            offs.append(sign * mag)
        y = tuple(o + c for o, c in zip(offs, origin))
        if n >= 2 and cover_contains(cover, y):
            continue
        cand = MPBox(y, L, n, d)
        if box_distance(base, cand) <= reach:
            continue
        if is_separable_pair(base, cand, R, N).separable:
            return y
    raise RuntimeError("failed to sample a separable partner center")


def pair_instances(
    box1: MPBox,
    box2: MPBox,
    alloy: AlloySpec,
    interaction: InteractionSpec | None,
    seed: int,
    h: float = 1.0,
) -> tuple[BoxInstance, BoxInstance]:
    """Two box instances sharing one disorder sample over the union region."""
    half = alloy.R / 2.0
    region: set = set()
    for box in (box1, box2):
        reach = box.radius + half
        for j in range(1, box.n + 1):
            c = box.particle(j)
            ranges = [
                range(math.ceil(ci - reach), math.floor(ci + reach) + 1) for ci in c
            ]
            region.update(itertools.product(*ranges))
    sample = sample_disorder(alloy, sorted(region), seed)
    return (
        BoxInstance(box1, alloy, interaction, sample, h),
        BoxInstance(box2, alloy, interaction, sample, h),
    )


def _is_singular_event(instance: BoxInstance, E: float, m: float, N: int) -> bool:
    try:
        return not classify_singularity(instance, E, m, N)
    except ResonantEnergyError:
        return True  # resonant boxes count toward the bad event


def _check_cap(L: int, n: int, d: int):
    dim = (2 * L - 1) ** (n * d)
    if dim > DENSE_LIMIT:
        raise CapExceededError(
            f"scale L={L} gives dimension {dim} > cap {DENSE_LIMIT} for n*d={n * d}"
        )


def estimate_property(
    prop: str,
    *,
    alloy: AlloySpec,
    interaction: InteractionSpec | None,
    n: int,
    d: int,
    N: int,
    L: int,
    params: MSAParams,
    trials: int,
    seed_start: int = 0,
    k: int = 0,
    policy: CnrPolicy | None = None,
    stride: int = 1,
) -> ReportRow:
    """Monte Carlo frequency of the bad event for DS, W1, W2 or PT.

    DS: some probed E in I makes both boxes of a separable pair singular.
    W1: some probed E makes the box not E-CNR.
    W2: some probed E makes neither box of a separable pair E-CNR.
    PT: the product box is partially tunneling over the probed grid.
    """
    if trials < 1:
        raise ValueError("trials must be >= 1")
    if prop not in ("DS", "W1", "W2", "PT"):
        raise ValueError(f"unknown property {prop!r}")
    _check_cap(L, n, d)
    R = alloy.R
    origin = (0,) * (n * d)
    events = 0
    grid_sizes = []
    for seed in range(seed_start, seed_start + trials):
        if prop == "W1":
            inst = BoxInstance.create(MPBox(origin, L, n, d), alloy, interaction, seed)
            grid = energy_grid(params, inst.spectral().eigenvalues, L)
            event = any(not classify_cnr(inst, E, policy)[0] for E in grid)
        elif prop in ("DS", "W2"):
            y = sample_separable_center(origin, L, R, N, n, d, seed)
            inst1, inst2 = pair_instances(
                MPBox(origin, L, n, d), MPBox(y, L, n, d), alloy, interaction, seed
            )
            eigs = np.concatenate(
                [inst1.spectral().eigenvalues, inst2.spectral().eigenvalues]
            )
            grid = energy_grid(params, eigs, L)
            if prop == "DS":
                event = any(
                    _is_singular_event(inst1, E, params.m, N)
                    and _is_singular_event(inst2, E, params.m, N)
                    for E in grid
                )
            else:
                event = any(
                    not classify_cnr(inst1, E, policy)[0]
                    and not classify_cnr(inst2, E, policy)[0]
                    for E in grid
                )
        else:  # PT: factor boxes at the next scale, sub-boxes at L
            L_next = math.floor(L**ALPHA)
            _check_cap(L_next, 1, d)
            product = MPBox((0,) * (N * d), L_next, N, d)
            half = alloy.R / 2.0
            region: set = set()
            reach = L_next + half
            for j in range(1, N + 1):
                c = product.particle(j)
                ranges = [
                    range(math.ceil(ci - reach), math.floor(ci + reach) + 1)
                    for ci in c
                ]
                region.update(itertools.product(*ranges))
            sample = sample_disorder(alloy, sorted(region), seed)
            factors = [
                BoxInstance(
                    MPBox(product.particle(j), L_next, 1, d),
                    alloy,
                    interaction,
                    sample,
                )
                for j in range(1, N + 1)
            ]
            eigs = np.concatenate([f.spectral().eigenvalues for f in factors])
            grid = energy_grid(params, eigs, L_next)
            event = classify_tunneling(
                factors, L, params.m, N, grid, R, stride
            )["partial"]
        grid_sizes.append(len(grid))
        if event:
            events += 1
    freq = events / trials
    lo, hi = wilson_interval(events, trials)
    if prop == "DS":
        bound = float(L) ** (-2 * params.p)
    elif prop == "PT":
        bound = 0.25 * float(math.floor(L**ALPHA)) ** (-2 * params.p)
    else:
        bound = float(L) ** (-params.q)
    return ReportRow(
        property=prop,
        n=n,
        k=k,
        L=L,
        trials=trials,
        events=events,
        frequency=freq,
        ci_low=lo,
        ci_high=hi,
        bound=bound,
        passed=freq <= bound,
        seed_start=seed_start,
        seed_end=seed_start + trials - 1,
        grid_size=max(grid_sizes),
        params={"m": params.m, "p": params.p, "q": params.q, "eta": params.eta,
                "E0": params.E0, "n_energies": params.n_energies},
    )


def induction_report(
    schedule: ScaleSchedule,
    n_values,
    *,
    d: int,
    N: int,
    alloy: AlloySpec,
    interaction: InteractionSpec | None,
    params: MSAParams,
    trials: int,
    seed_start: int = 0,
    k_max: int = 1,
    properties=("DS",),
    policy: CnrPolicy | None = None,
    stride: int = 1,
) -> MSAReport:
    """Estimate the induction properties for all n at each scale in order.

    Scales whose matrix dimension exceeds the dense cap are skipped (the
    full induction is out of numerical reach; the report records only what
    was run).
    """
    report = MSAReport(params=params, interval=params.interval)
    if k_max < 0:
        return report
    scales = schedule.scales(k_max)
    for k, L in enumerate(scales):
        for n in n_values:
            if (2 * L - 1) ** (n * d) > DENSE_LIMIT:
                continue
            for prop in properties:
                row = estimate_property(
                    prop,
                    alloy=alloy,
                    interaction=interaction,
                    n=n,
                    d=d,
                    N=N,
                    L=L,
                    params=params,
                    trials=trials,
                    seed_start=seed_start,
                    k=k,
                    policy=policy,
                    stride=stride,
                )
                report.rows.append(row)
    return report
