"""mixnorm-lab: anisotropic mixed-norm analysis on sampled grids.

Quasi-homogeneous geometry, continuous-convention transforms, mixed-norm
quadrature, Littlewood-Paley families, Besov/Triebel-Lizorkin/Sobolev
quasi-norms, iterated maximal operators, and Fourier multiplier condition
audits, with a configuration-driven command line (``mixnorm-lab``).
"""

from .anisotropy import (
    AnisotropyVector,
    aniso_dilate,
    aniso_norm,
    as_anisotropy,
    bracket,
    euclid_comparison,
)
from .littlewood_paley import (
    LPFamily,
    ResolutionError,
    TransitionProfile,
    build_family,
    lp_block,
    max_resolved_level,
    partition_residual,
)
from .maximal import (
    MaximalParams,
    directional_max,
    fefferman_stein_ratio,
    iterated_max,
    peetre_ratio,
)
from .mixed_grid import (
    FREQUENCY,
    PHYSICAL,
    ExponentVector,
    GridFunction,
    Region,
    as_exponents,
    conjugate,
    dft_forward,
    dft_inverse,
    empty_region,
    full_region,
    grid_function,
    hausdorff_young_check,
    holder_check,
    iterated_norm,
    load_grid_function,
    mask_region,
    mixed_norm,
    mixed_power_mean,
    rect_region,
    rect_shell,
    sample,
    save_grid_function,
    shell_cubes,
    shell_region,
)
from .multipliers import (
    ConditionReport,
    DiagnosticProfile,
    ExperimentReport,
    MultiplierSpec,
    SingularSymbolError,
    admissible,
    apply_multiplier,
    audit_grid,
    audit_shell,
    boundedness_experiment,
    condition_constant,
    identity_symbol,
    lifting_multiplier,
    localized_profile,
    modulation_symbol,
    mu_exponents,
    smoothness_threshold,
    sobolev_symbol,
)
from .spaces import (
    BESOV,
    GEN_SOBOLEV,
    SOBOLEV,
    TRIEBEL_LIZORKIN,
    SpaceParams,
    besov_norm,
    gen_sobolev_norm,
    sobolev_norm,
    tl_norm,
)
from .symbols import SymbolSyntaxError, parse_symbol

__version__ = "0.1.0"
