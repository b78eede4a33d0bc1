"""Exception types shared across the solver."""

from __future__ import annotations


class ConsumptionDomainError(ValueError):
    """Raised by the exact-Legendre consumption rule for q_a <= 0,
    where the control supremum is unbounded."""


class DivergenceError(RuntimeError):
    """A trajectory component exceeded the blow-up limit during integration."""

    def __init__(self, t: float, message: str | None = None):
        self.t = t
        super().__init__(message or f"trajectory diverged near t = {t:.6g}")


class NonConvergenceError(RuntimeError):
    """The shooting Newton iteration exhausted its budget or stalled.

    Carries the best residual norm seen so the caller can report a
    diagnostic instead of silently continuing.
    """

    def __init__(self, best_residual: float, iterations: int,
                 message: str | None = None):
        self.best_residual = best_residual
        self.iterations = iterations
        super().__init__(
            message
            or f"shooting did not converge after {iterations} iterations "
               f"(best residual {best_residual:.3e})"
        )
