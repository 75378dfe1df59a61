"""Rate, distortion and capacity computations for correlated sources over multiple access channels."""

from importlib.metadata import PackageNotFoundError, version

from .admissibility import (
    AdmissibilityReport,
    DistortionSpec,
    SideInfoSystem,
    check_multisource,
    check_theorem1,
    hamming_rate_distortion,
    lossless_conditions,
    optimal_decoder,
    source_coding_region,
    wz_binary_rate,
)
from .codebook import FitProblem, FitResult, MixtureCodebook, fit, fit_objective, mutual_info_mc, sample_pair
from .errors import InputError, MacJsccError, NumericalError
from .fading import FadingModel, csir_sum_rate, csit_sum_rate, waterfill_lambda
from .feedback import ozarow_bounds
from .gmac import GaussianSourcePair, GmacSpec, relaxed_bounds, rho_interval, sweep
from .mcsim import SimConfig, SimResult, estimate_entropy_mc, simulate_af_gmac, simulate_af_orth
from .orthogonal import LinearCombiner, OrthogonalSpec, SideInfoModel, af_si_distortion, af_si_optimize
from .probcore import GaussianVector, Kernel, Pmf, entropy, lmmse, mutual_information

try:
    __version__ = version("macjscc")
except PackageNotFoundError:  # pragma: no cover - running from a source tree
    __version__ = "0.0.0"

__all__ = [
    "AdmissibilityReport", "DistortionSpec", "FadingModel", "FitProblem", "FitResult",
    "GaussianSourcePair", "GaussianVector", "GmacSpec", "InputError", "Kernel", "LinearCombiner",
    "MacJsccError", "MixtureCodebook", "NumericalError", "OrthogonalSpec", "Pmf", "SideInfoModel",
    "SideInfoSystem", "SimConfig", "SimResult", "af_si_distortion", "af_si_optimize",
    "check_multisource", "check_theorem1", "csir_sum_rate", "csit_sum_rate", "entropy",
    "estimate_entropy_mc", "fit", "fit_objective", "hamming_rate_distortion", "lmmse",
    "lossless_conditions", "mutual_info_mc", "mutual_information", "optimal_decoder",
    "ozarow_bounds", "relaxed_bounds", "rho_interval", "sample_pair", "simulate_af_gmac",
    "simulate_af_orth", "source_coding_region", "sweep", "waterfill_lambda", "wz_binary_rate",
]
