"""Numerical laboratory for multi-scale analysis of multi-particle
alloy-type random Hamiltonians on finite boxes."""

from .geometry import (
    Annulus,
    ChainEscapeError,
    Cube,
    InteractionClass,
    MPBox,
    SeparabilityVerdict,
    annuli_family,
    box_distance,
    classify_interaction,
    clump_decomposition,
    cover_contains,
    fi_projection_disjointness,
    is_j_separable,
    is_separable_pair,
    is_separable_pair_oracle,
    kappa,
    non_separable_cover,
    outer_layer,
)
from .hamiltonian import (
    BoxInstance,
    CapExceededError,
    GridHamiltonian,
    SpectralData,
    assemble,
    assemble_segment,
    assemble_split,
    eigensolve,
    eigensolve_lowest,
    kron_sum,
)
from .randomfield import (
    AlloySpec,
    CoverageError,
    DisorderSample,
    InteractionSpec,
    check_holder,
    interaction_energy,
    sample_disorder,
    site_uniforms,
)
from .spectral import (
    BoxClassification,
    CnrPolicy,
    GreenBlockTable,
    ResonantEnergyError,
    classify_box,
    classify_cnr,
    classify_resonance,
    classify_singularity,
    combes_thomas_check,
    gamma,
    green_block,
    resolvent_matrix,
    weyl_cutoff,
)
from .msa import (
    MSAParams,
    MSAReport,
    ScaleSchedule,
    SubharmonicCertificate,
    build_green_subharmonic,
    classify_tunneling,
    count_singular_separable,
    detect_bad_box,
    enveloping_box,
    estimate_property,
    find_s_chains,
    induction_report,
    radial_descent_bound,
    scale_sequence,
    verify_subharmonic,
)
from .analysis import (
    DecayFit,
    cell_norms,
    decay_fits,
    fit_decay,
    gri_ratio,
    interaction_width_effect,
    measure_gri_constant,
)
from .config import ExperimentConfig, RunManifest, config_hash, load_config

__version__ = "0.1.0"
