"""Empirical calibration of the geometric constants and the NS scale.

The inequalities used by the multi-scale machinery involve constants that
are known to exist but are never valued; they are measured on a fixed
calibration suite, multiplied by a safety factor, and persisted to a JSON
file whose hash is referenced by every run manifest.
"""

from __future__ import annotations

import hashlib
import json
import math
import os
from pathlib import Path

from .analysis import dgri_ratio, gri_ratio, measure_gri_constant
from .geometry import MPBox
from .hamiltonian import BoxInstance
from .msa import HypothesisError, build_green_subharmonic
from .randomfield import AlloySpec
from .spectral import BETA, classify_singularity, gamma, ResonantEnergyError

CACHE_ENV = "MSALAB_CACHE_DIR"
SAFETY_FACTOR = 2.0
CALIBRATION_VERSION = 1


def cache_dir() -> Path:
    root = os.environ.get(CACHE_ENV)
    if root:
        return Path(root)
    return Path.home() / ".cache" / "msalab"


def calibration_path() -> Path:
    return cache_dir() / "calibration.json"


def _canonical(data: dict) -> str:
    return json.dumps(data, sort_keys=True, separators=(",", ":"))


def calibration_hash(data: dict) -> str:
    return hashlib.sha256(_canonical(data).encode()).hexdigest()


def save_calibration(data: dict, path: Path | None = None) -> Path:
    path = path or calibration_path()
    path.parent.mkdir(parents=True, exist_ok=True)
    payload = dict(data)
    payload["hash"] = calibration_hash(data)
    path.write_text(json.dumps(payload, sort_keys=True, indent=1))
    return path


def load_calibration(path: Path | None = None) -> dict:
    path = path or calibration_path()
    payload = json.loads(path.read_text())
    body = {k: v for k, v in payload.items() if k != "hash"}
    if payload.get("hash") != calibration_hash(body):
        raise ValueError(f"calibration file {path} fails its hash check")
    return payload


# ---------------------------------------------------------------------------
# measurement suites


def _gri_suite(seed_start: int, count: int, g: float = 5.0) -> list[float]:
    """GRI + DGRI ratios on concentric 1D instances."""
    alloy = AlloySpec(g=g)
    ratios = []
    for seed in range(seed_start, seed_start + count):
        inst = BoxInstance.create(MPBox((0,), 16, 1, 1), alloy, None, seed)
        eigs = inst.spectral().eigenvalues
        for E in (float(eigs[0]) - 0.5, float(eigs[0]) - 1.5):
            ratios.append(gri_ratio(inst, 8, E))
    return ratios


def _dgri_suite(seed_start: int, count: int, g: float = 5.0) -> list[float]:
    alloy = AlloySpec(g=g)
    ratios = []
    for seed in range(seed_start, seed_start + count):
        inst = BoxInstance.create(MPBox((0,), 16, 1, 1), alloy, None, seed)
        eigs = inst.spectral().eigenvalues
        E = float(eigs[0]) - 1.0
        for v, y in (((0,), (15,)), ((-2,), (-15,))):
            ratios.append(dgri_ratio(inst, v, 5, E, y))
    return ratios


def _subharmonic_suite(
    seed_start: int,
    count: int,
    *,
    L: int = 31,
    ell: int = 8,
    m: float = 0.2,
    g: float = 5.0,
):
    """Measured Q-ratios (needed Q per instance) for the Green boundary-max
    function, plus NS outcomes, on strong-disorder 1D instances.

    c4 is derived so that every suite instance verifies with margin; the
    certified instances also record whether singularity classification
    agrees with the descent conclusion.
    """
    alloy = AlloySpec(g=g)
    needed = []
    records = []
    for seed in range(seed_start, seed_start + count):
        inst = BoxInstance.create(MPBox((0,), L, 1, 1), alloy, None, seed)
        eigs = inst.spectral().eigenvalues
        E = float(eigs[0]) - 0.5
        # probe with an enormous c4 so hypotheses, not condition (i), decide
        try:
            result = build_green_subharmonic(inst, E, m, ell, 1, c4=1e12)
        except HypothesisError as exc:
            records.append({"seed": seed, "certified": False, "reason": str(exc)})
            continue
        f = result["f"]
        box = inst.box
        pts = list(f)
        q_needed = 0.0
        for x in pts:
            rx = max(abs(a - b) for a, b in zip(x, box.center))
            if x in result["S"] or (L - 1) - rx < 2 * ell + 1:
                continue
            shell = [
                f[w]
                for w in pts
                if max(abs(a - b) for a, b in zip(w, x)) == 2 * ell + 1
            ]
            if shell and max(shell) > 0:
                q_needed = max(q_needed, f[x] / max(shell))
        scale = (1 * ell) ** 0 * math.exp(ell**BETA) * math.exp(-gamma(m, ell, 1, 1))
        needed.append(q_needed / scale)
        try:
            ns = classify_singularity(inst, E, m, 1)
        except ResonantEnergyError:
            ns = None
        records.append(
            {"seed": seed, "certified": True, "q_needed": q_needed, "ns": ns}
        )
    return needed, records


def measure_ns_scale(
    seeds,
    ladder=(15, 21, 31),
    *,
    m: float = 0.2,
    g: float = 5.0,
) -> int | None:
    """Smallest ladder scale where strong-disorder boxes classify NS at a
    band-edge energy for every probed seed; None when none qualifies."""
    alloy = AlloySpec(g=g)
    for L in ladder:
        ok = True
        for seed in seeds:
            inst = BoxInstance.create(MPBox((0,), L, 1, 1), alloy, None, seed)
            E = float(inst.spectral().eigenvalues[0]) - 0.5
            try:
                if not classify_singularity(inst, E, m, 1):
                    ok = False
                    break
            except ResonantEnergyError:
                ok = False
                break
        if ok:
            return L
    return None


def run_calibration(seed: int = 0, count: int = 25) -> dict:
    """Measure all constants on the calibration suite.

    Each constant is the suite maximum times the safety factor, so the
    corresponding inequality holds with zero violations on the suite by
    construction and with margin on independent reruns.
    """
    gri = measure_gri_constant(_gri_suite(seed, count))
    dgri = measure_gri_constant(_dgri_suite(seed, count))
    needed, records = _subharmonic_suite(seed + 10_000, count)
    c4 = SAFETY_FACTOR * max(needed) if needed else 1.0
    ns_scale = measure_ns_scale(range(seed, seed + 10))
    return {
        "version": CALIBRATION_VERSION,
        "seed": seed,
        "count": count,
        "safety_factor": SAFETY_FACTOR,
        "c0_gri": SAFETY_FACTOR * gri["constant"],
        "c0_gri_measured": gri["constant"],
        "c0_dgri": SAFETY_FACTOR * dgri["constant"],
        "c0_dgri_measured": dgri["constant"],
        "c4": c4,
        "c4_certified_instances": sum(r.get("certified", False) for r in records),
        "ns_scale": ns_scale,
        "subharmonic_params": {"L": 31, "ell": 8, "m": 0.2, "g": 5.0},
    }


def get_calibration(path: Path | None = None, seed: int = 0, count: int = 25) -> dict:
    """Load the persisted calibration, measuring and saving it when absent."""
    path = path or calibration_path()
    if path.exists():
        return load_calibration(path)
    data = run_calibration(seed, count)
    save_calibration(data, path)
    return load_calibration(path)
