"""Construction of linearizing transformations and their linear targets."""

from .first import (ChiSolution, ConstructionI, PhiSolution, PsiSolution, alpha_beta_I, build_phi,
                    build_psi_I, construct_I, omega, riccati_rhs, solve_chi, solve_chi_with_retries,
                    target_expressions_I)
from .second import ConstructionII, Seeds, construct_II, grid_residuals, theta, theta_samples


def construct(c, box, chi0=0.0, grid=41, seeds=None):
    """Dispatch on the candidate kind."""
    if c.kind == "I":
        return construct_I(c, box, chi0=chi0, grid=grid)
    return construct_II(c, box, seeds=seeds, grid=grid)


__all__ = [
    "ChiSolution", "ConstructionI", "ConstructionII", "PhiSolution", "PsiSolution", "Seeds",
    "alpha_beta_I", "build_phi", "build_psi_I", "construct", "construct_I", "construct_II",
    "grid_residuals", "omega", "riccati_rhs", "solve_chi", "solve_chi_with_retries",
    "target_expressions_I", "theta", "theta_samples",
]
