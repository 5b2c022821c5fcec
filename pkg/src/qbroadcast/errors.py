"""Exception types used across the package."""


class ContractError(RuntimeError):
    """A numerical contract was violated (non-Hermitian input, PSD failure,
    non-convergence, broken isometry). CLI maps this to exit code 1."""
