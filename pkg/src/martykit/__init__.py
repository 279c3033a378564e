"""martykit: numerical normal-family calculus on the unit disk.

Rational-function carriers with exact derivatives and certified root
lists, the generalised Marty quotient with its continuous pole
extension, Poisson-weighted proximity/counting/characteristic functions,
Blaschke splittings with their product bounds, the universal expansion
of higher logarithmic derivatives, and scenario-level convergence and
sharpness checks for concrete rational families.
"""

from .blaschke import (
    BlaschkeFactor,
    BlaschkeSplit,
    DiskGeometry,
    NearestZeroReduction,
    build_split,
    factor_eval,
    factor_log_derivative,
    log_derivative_sup_bound,
    nearest_zero_reduction,
    poisson_log_derivative,
    smallness_threshold,
    smallness_threshold_scan,
    weight_function,
)
from .errors import (
    ClearanceError,
    ContractError,
    HolomorphyError,
    MartykitError,
    MultiplicityError,
    PreconditionError,
    QuadratureError,
    RootFindingError,
)
from .logderiv import (
    ExpansionTable,
    check_identity,
    correction_term,
    expansion_coefficients,
)
from .marty import (
    ExtendedValue,
    MartyParams,
    marty_quotient,
    pole_extension,
    spherical_derivative,
    sup_on_disk,
)
from .nevanlinna import (
    NevanlinnaEval,
    QuadratureSpec,
    characteristic_T_alpha,
    check_counting_inequality,
    check_first_fundamental,
    count_n,
    counting_N_alpha,
    proximity_m_alpha,
)
from .rational import (
    POLE,
    Polynomial,
    RationalFunction,
    RootList,
    derivative,
    evaluate,
    find_roots,
    log_derivative,
    zeros_poles,
)
from .theorems import (
    ConvergenceReport,
    EstimateChainReport,
    FamilySpec,
    ScanReport,
    SharpnessReport,
    check_diverging_family,
    check_vanishing_family,
    estimate_chain_check,
    harnack_check,
    scan_marty_quotient,
    sharpness_exponent,
)

__version__ = "0.1.0"
