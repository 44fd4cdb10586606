"""Expert votes, neutral p-values and inductive distributions for MLR families."""

from ._kernels import BACKEND
from .errors import (
    CompatibilityError,
    DegenerateSampleError,
    DomainError,
    ExpertVoteError,
    NumericError,
    ParameterError,
    QuadratureError,
    SampleError,
    TruncationError,
)
from .models import (
    GammaScale,
    MlrFamily,
    NoncentralBeta,
    NoncentralChi2One,
    NormalLocation,
    ParamInterval,
    boundary_limits,
    boundary_limits_check,
    mlr_verify,
    quantile,
)
from .nuisance import (
    AnovaInductiveDistribution,
    GammaPairModel,
    GhostSample,
    InverseGamma,
    NormalSummary,
    anova_inductive_distribution,
    anova_point_mass,
    anova_vote_quadrature,
    anova_vote_series,
    inverse_gamma_mixing,
    student_vote,
    student_vote_quadrature,
)
from .oracle import DecisionRule, EventWitness, expert_check, threshold_gap, uniformity_check
from .specfun import Tolerance
from .votes import (
    BilateralSplit,
    InductiveDistribution,
    OneSidedSplit,
    VoteResult,
    bilateral_vote_compatible,
    bilateral_vote_symmetric_normal,
    coherence_check,
    inductive_distribution,
    neutral_vote,
    symmetric_vote_via_chi2,
    vote_at,
)

__version__ = "0.1.0"

__all__ = sorted(name for name, value in dict(globals()).items()
                 if not name.startswith("_") and not hasattr(value, "__path__")
                 and type(value).__name__ != "module")
