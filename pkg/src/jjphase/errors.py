"""Exception types shared across the package."""


class UnsupportedOrderError(ValueError):
    """Fractional order outside the window the coupled scheme supports."""


class ConfigError(ValueError):
    """Bad configuration file or command-line input."""


class StepFailureError(RuntimeError):
    """Newton iteration failed to converge within the allowed iterations.

    Carries enough context to report and to salvage the completed part of
    the trajectory.
    """

    def __init__(self, step, residual_norm, iterations):
        self.step = step
        self.residual_norm = residual_norm
        self.iterations = iterations
        super().__init__(
            f"Newton failed at step {step}: residual {residual_norm:.3e} "
            f"after {iterations} iterations"
        )
