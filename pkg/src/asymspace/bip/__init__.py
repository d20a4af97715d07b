"""Mixed binary intersection property, minimal pairs and the glued mu-norm."""
from .families import (
    BIP_HOLDS,
    BIP_VIOLATED,
    PREMISE_FAILS,
    BipVerdict,
    CommonPoint,
    FamilyShapeError,
    MixedBallFamily,
    NoWitnessError,
    common_point,
    family_program,
    metric_convexity_witness,
    mixed_bip_report,
    pairwise_mixed_check,
    scale_to_pairwise,
    symmetrized_family_check,
)
from .mu import MuNorm, build_mu_norm, mu_as_poly
from .pairs import (
    RHO1,
    RHO2,
    ConvergenceError,
    FinitePairTable,
    HullEnvelopeGauge,
    InvalidPairError,
    MaxAffineGauge,
    PairViolation,
    PiecewiseGaugePair,
    UnsupportedNormError,
    default_samples,
    extend_pair_globally,
    minimal_pair,
    verify_pair,
)
