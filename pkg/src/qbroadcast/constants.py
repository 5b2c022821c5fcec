"""Numerical tolerances shared across the package.

Every module pulls its thresholds from here so a tolerance is never
defined twice. Values are absolute unless noted.
"""

# Maximum allowed |A - A^dagger| entry for a matrix passed off as Hermitian.
HERM_TOL = 1e-10

# Eigenvalues of a nominally PSD matrix in [-PSD_CLAMP, 0) are clamped to 0.
PSD_CLAMP = 1e-10

# Below this an eigenvalue is a genuine PSD violation, not roundoff.
PSD_FAIL = 1e-8

# Generic equality tolerance for scalar and entrywise comparisons.
EQ_TOL = 1e-9

# A partial-transpose eigenvalue below -PPT_TOL means "entangled";
# anything in [-PPT_TOL, PPT_TOL] sits on the separability boundary
# and is reported as separable.
PPT_TOL = 1e-10

# Isometries must satisfy V^dagger V = I to this precision.
ISOMETRY_TOL = 1e-10

# Measurement outcomes with probability below this are null branches.
PROB_FLOOR = 1e-12

# Threshold scans: default grid size and bisection width.
SCAN_GRID = 200
SCAN_TOL = 1e-4
