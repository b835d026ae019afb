class SolverError(RuntimeError):
    """A linear solve failed (singular, indefinite or non-finite)."""


class OptimizerError(RuntimeError):
    """The MMA subproblem could not be solved."""

    def __init__(self, message: str, kkt_residual: float = float("nan")):
        super().__init__(message)
        self.kkt_residual = kkt_residual
