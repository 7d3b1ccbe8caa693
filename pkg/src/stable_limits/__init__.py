"""Monte Carlo checks of heavy-tailed partial-sum functionals converging to
stochastic integrals driven by alpha-stable Levy processes."""

from .diagnostics import KSResult, ecf_distance, hill_estimate, ks_two_sample, qq_points
from .heavy_tail import (
    LevyMeasure,
    ScalingConstants,
    TailLaw,
    TruncationFn,
    centering_cn,
    normalizer_bn,
    rho_integrate,
    sample_tail_law,
    scaling_constants,
    tail_prob,
    truncation_eval,
)
from .limit import (
    CharTriplet,
    JumpRecord,
    LimitPathConfig,
    euler_stochastic_integral,
    limit_characteristics,
    simulate_levy_path,
)
from .paths import FunctionalF, StepPath, build_functional_paths, build_truncated_paths
from .prelimit import (
    PreLimitKernel,
    ca_family_check,
    kernel_expectation,
    path_characteristics,
    vague_check,
)

__version__ = "0.1.0"
