"""Linear multistep methods in operator form: root-condition classification,
stability constants in the k-infinity and k-Spijker norms, and explicit
instability witnesses for weakly stable methods."""

__version__ = "0.1.0"

from .errors import (
    EmptyBlock,
    LengthMismatch,
    LmmError,
    MissingExact,
    NewtonDiverged,
    NoConvergence,
    NotWeaklyStable,
    SingularA,
    SizeExceeded,
    StartUnavailable,
    UsageError,
    ZeroLeadingAlpha,
)
from .methods import IVP, GridSpec, MultistepMethod, catalog, get_method, make_method, rho_eval
from .roots import RootSet, StabilityClass, Verdict, classify, find_roots
from .operators import (
    OperatorBundle,
    TrajectoryVector,
    apply_A_interior,
    apply_E,
    apply_E_inv,
    apply_F,
    dense_A,
    dense_B,
    factorization_residual,
    make_bundle,
)
from .norms import (
    INF_INF,
    INF_SPIJKER,
    NormPair,
    StabilityConstantReport,
    norm_kinf,
    norm_kspijker,
    stability_constant,
)
from .witness import WitnessReport, ratio_sweep, spijker_witness, weak_witness, witness_diagnostics
from .consistency import OrderEstimate, Scheme, defect, order_dominance_check, order_in_norm
from .integrator import RunResult, integrate, oscillation_demo
