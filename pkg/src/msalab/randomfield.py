"""Alloy-type random potential and the deterministic interaction potential.

Site amplitudes are produced by a counter-based hash of (seed, site), so a
site's value does not depend on the region being sampled: overlapping regions
agree and regions with disjoint bump supports use disjoint randomness.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field

import numpy as np

Site = tuple[int, ...]


class CoverageError(ValueError):
    """A potential evaluation needs sites that were not sampled."""


@dataclass(frozen=True)
class AlloySpec:
    """Law of the alloy field: i.i.d. amplitudes V_s and a bump profile.

    The default bump is the indicator of the closed cube of diameter R
    centered at the site; with R = 1 and unit amplitude the bumps tile space
    and the covering condition holds with equality on the lattice.
    """

    g: float = 1.0
    distribution: str = "uniform"  # "uniform" on [0, g] or "table"
    table_points: tuple[float, ...] | None = None
    table_cdf: tuple[float, ...] | None = None
    R: int = 1  # bump support diameter

    def __post_init__(self):
        if self.g < 0:
            raise ValueError("amplitude scale g must be >= 0")
        if self.distribution not in ("uniform", "table"):
            raise ValueError(f"unknown distribution {self.distribution!r}")
        if self.distribution == "table":
            if not self.table_points or not self.table_cdf:
                raise ValueError("table distribution needs table_points and table_cdf")
            if abs(self.table_cdf[-1] - 1.0) > 1e-12:
                raise ValueError("table CDF must end at 1")
            if any(p < 0 for p in self.table_points):
                raise ValueError("amplitudes must be nonnegative")
        if self.R < 1:
            raise ValueError("bump support diameter R must be >= 1")

    def quantile(self, u: np.ndarray) -> np.ndarray:
        if self.distribution == "uniform":
            return self.g * u
        idx = np.searchsorted(np.asarray(self.table_cdf), u, side="left")
        return np.asarray(self.table_points)[idx]

    def cdf(self, y: float) -> float:
        if self.distribution == "uniform":
            if self.g == 0:
                return 1.0 if y >= 0 else 0.0
            return min(max(y / self.g, 0.0), 1.0)
        total = 0.0
        prev = 0.0
        for point, cum in zip(self.table_points, self.table_cdf):
            if point <= y:
                total = cum
            prev = cum
        return total

    def bump(self, offset) -> float:
        """phi(x - s) for the indicator bump; offset is x - s."""
        half = self.R / 2.0
        return 1.0 if all(abs(o) <= half for o in offset) else 0.0


@dataclass(frozen=True)
class DisorderSample:
    seed: int
    sites: tuple[Site, ...]
    values: dict[Site, float] = field(hash=False)

    def value(self, s: Site) -> float:
        try:
            return self.values[tuple(s)]
        except KeyError:
            raise CoverageError(f"site {tuple(s)} not covered by this sample") from None

    def covers(self, sites) -> bool:
        return all(tuple(s) in self.values for s in sites)


# counter-based per-site uniforms: splitmix64-style finalizer over (seed, site)
_MIX1 = np.uint64(0xBF58476D1CE4E5B9)
_MIX2 = np.uint64(0x94D049BB133111EB)
_GOLDEN = np.uint64(0x9E3779B97F4A7C15)


def _finalize(z: np.ndarray) -> np.ndarray:
    z = z ^ (z >> np.uint64(30))
    z = z * _MIX1
    z = z ^ (z >> np.uint64(27))
    z = z * _MIX2
    return z ^ (z >> np.uint64(31))


def site_uniforms(seed: int, sites: np.ndarray) -> np.ndarray:
    """Uniform [0,1) variates, one per site row, independent of ordering."""
    coords = np.atleast_2d(np.asarray(sites, dtype=np.int64)).astype(np.uint64)
    with np.errstate(over="ignore"):
        h = np.full(coords.shape[0], np.uint64(seed) & np.uint64(2**64 - 1))
        h = _finalize(h + _GOLDEN)
        for k in range(coords.shape[1]):
            h = _finalize(h ^ _finalize(coords[:, k] + _GOLDEN * np.uint64(k + 1)))
    return (h >> np.uint64(11)).astype(np.float64) * (2.0**-53)


def sample_disorder(spec: AlloySpec, region, seed: int) -> DisorderSample:
    """Draw i.i.d. amplitudes over a region (an iterable of lattice sites)."""
    sites = sorted({tuple(int(c) for c in s) for s in region})
    if not sites:
        raise ValueError("region is empty")
    u = site_uniforms(seed, np.array(sites, dtype=np.int64))
    vals = spec.quantile(u)
    return DisorderSample(seed, tuple(sites), dict(zip(sites, vals.tolist())))


def sites_for_cube(center, radius: float):
    """Integer sites s with |s - center| <= radius componentwise."""
    ranges = [
        range(math.ceil(c - radius), math.floor(c + radius) + 1) for c in center
    ]
    return itertools.product(*ranges)


def influence_sites(points, R: int):
    """All sites whose bump of diameter R can touch any of the given points."""
    out = set()
    half = R / 2.0
    for x in points:
        out.update(sites_for_cube(x, half))
    return sorted(out)


def external_potential(sample: DisorderSample, spec: AlloySpec, x) -> float:
    """Alloy sum V(x) = sum_s V_s * phi(x - s) for a single-particle point x."""
    half = spec.R / 2.0
    total = 0.0
    for s in sites_for_cube(x, half):
        total += sample.value(s)
    return total


def multiparticle_potential(sample: DisorderSample, spec: AlloySpec, x, d: int) -> float:
    """Sum of single-particle alloy values over the components of x in R^{nd}."""
    if len(x) % d:
        raise ValueError(f"point has {len(x)} coordinates, not a multiple of d={d}")
    return sum(
        external_potential(sample, spec, x[j : j + d]) for j in range(0, len(x), d)
    )


@dataclass(frozen=True)
class InteractionSpec:
    """k-body interaction; the default is the pairwise hard bump
    u0 * 1[|y_i - y_j| <= r0] in the max-norm."""

    u0: float = 1.0
    r0: float = 1.0

    def __post_init__(self):
        if self.u0 < 0:
            raise ValueError("interaction bound u0 must be >= 0")
        if self.r0 <= 0:
            raise ValueError("interaction range r0 must be > 0")


def interaction_energy(spec: InteractionSpec, x, d: int) -> float:
    """Total interaction U(x) for a configuration x in R^{nd}."""
    if len(x) % d:
        raise ValueError(f"point has {len(x)} coordinates, not a multiple of d={d}")
    n = len(x) // d
    parts = [x[j * d : (j + 1) * d] for j in range(n)]
    total = 0.0
    for i in range(n):
        for j in range(i + 1, n):
            if max(abs(a - b) for a, b in zip(parts[i], parts[j])) <= spec.r0:
                total += spec.u0
    return total


def check_holder(spec: AlloySpec, eps_grid) -> dict:
    """Continuity modulus nu(eps) = sup_y [F(y+eps) - F(y)] with a power fit.

    Returns the table, fitted (a, b) for nu(eps) <= a * eps^b, and whether the
    uniform Hoelder condition holds (b > 0).
    """
    eps_grid = [float(e) for e in eps_grid]
    if any(not 0 < e < 1 for e in eps_grid):
        raise ValueError("epsilon values must lie in (0, 1)")
    table = {}
    for eps in eps_grid:
        if spec.distribution == "uniform":
            nu = 1.0 if spec.g == 0 else min(eps / spec.g, 1.0)
        else:
            probs = np.diff(np.concatenate([[0.0], np.asarray(spec.table_cdf)]))
            pts = np.asarray(spec.table_points)
            nu = max(
                float(probs[(pts >= y) & (pts <= y + eps)].sum()) for y in pts
            )
        table[eps] = nu
    if spec.distribution == "uniform" and spec.g > 0:
        a, b = 1.0 / spec.g, 1.0  # exact for the uniform law
    else:
        xs = np.log(np.array(list(table.keys())))
        ys = np.log(np.maximum(np.array(list(table.values())), 1e-300))
        if len(xs) >= 2 and np.ptp(xs) > 0:
            b, log_a = np.polyfit(xs, ys, 1)
        else:
            b, log_a = 0.0, float(ys[0]) if len(ys) else 0.0
        a, b = float(np.exp(log_a)), float(b)
    holds = b > 1e-9 and all(nu <= a * eps**b + 1e-12 for eps, nu in table.items())
    return {"table": table, "a": a, "b": b, "holds": bool(holds)}
