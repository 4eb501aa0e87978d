from ._core import (
    BivariateNormal,
    CircularCauchy,
    CurveSingularJoint,
    DiscreteJoint,
    IndependentProduct,
    LiftscaleError,
    Univariate,
    convergence_counterexample,
    density_at,
    kernel_lift,
    lift_at,
    lift_grid,
    linear_branch,
    mi_bvn_closed_form,
    mi_monte_carlo,
    mutual_information,
    quadratic_branch,
    region_summary,
    sample,
    scaling_exponent,
    sibuya_omega,
    target_profile,
    weierstrass,
)

__all__ = [name for name in dir() if not name.startswith("_")]
