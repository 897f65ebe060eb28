"""Numerical tolerances used across the package.

Two tiers: 1e-12 for quantities that are exact by construction (sums of
probabilities, operator completeness, state norms) and 1e-10 for quantities
that pass through one layer of floating-point algebra (condition checks,
phase closure residuals, cross-checks between symbolic and state-vector
paths).  Looser tolerances cover eigenvalue rank decisions and basis
extraction, where error compounds through diagonalization.
"""

# sums constrained to 1 (simplex, probabilities, norms) and operator
# completeness sums
SUM_TOL = 1e-12
COMPLETENESS_TOL = 1e-12

# a parameter-vector component counts as nonzero iff it exceeds this
ZERO_TOL = 1e-10

# condition checks, witness consistency, equivalence of parameter vectors,
# phase closure residual, agreement between symbolic and state-vector paths
VALIDATION_TOL = 1e-10
EQUIV_TOL = 1e-10

# an eigenvalue of a reduced density matrix counts as zero iff it is below
# RANK_TOL times the trace
RANK_TOL = 1e-9

# overlap shortfall allowed in basis extraction round trips
FIDELITY_TOL = 1e-8

# branch probabilities at or below this are treated as empty
PROB_EPS = 1e-15
