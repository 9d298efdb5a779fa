"""Exception hierarchy shared by all memwave modules."""


class MemwaveError(Exception):
    """Base class for all errors raised by this package."""


class NegativeRadicand(MemwaveError):
    """A square-root argument went negative (parameters outside the admissible range)."""


class ComplexRegime(MemwaveError):
    """Cube-root arguments left the real configuration (phi < psi); rejected, not branch-switched."""


class PreconditionViolated(MemwaveError):
    """An operation precondition that the caller must guarantee was violated."""


class OutOfRange(MemwaveError):
    """A parameter is outside its documented interval."""


class RegimeError(MemwaveError):
    """Operation requires the limiting kernel regime (eta = 3*beta/2)."""


class AuditFailure(MemwaveError):
    """A numerically certified inequality failed; carries the offending datum."""

    def __init__(self, message: str, datum=None):
        super().__init__(message)
        self.datum = datum


class MonotonicityFailure(MemwaveError):
    """A grid monotonicity / positivity sweep failed; carries the offending abscissa."""

    def __init__(self, message: str, abscissa=None):
        super().__init__(message)
        self.abscissa = abscissa


class PoleError(MemwaveError):
    """Kernel evaluated too close to its pole."""


class HypothesisError(MemwaveError):
    """One or more separated-exponent hypotheses failed; carries the violation list."""

    def __init__(self, violations):
        self.violations = list(violations)
        lines = "; ".join(str(v) for v in self.violations)
        super().__init__(f"{len(self.violations)} hypothesis violation(s): {lines}")


class GridTooCoarse(MemwaveError):
    """Sample grid cannot resolve the requested number of modes."""


class DegenerateExponents(MemwaveError):
    """Two mode exponents coincide; the coefficient system is singular."""


class RealityViolation(MemwaveError):
    """Recovered coefficients are not conjugate-consistent with a real solution."""


class NoUsableModes(MemwaveError):
    """No mode with a nonzero oscillatory coefficient is available."""


class DegenerateMode(MemwaveError):
    """A mode has vanishing oscillatory coefficient but a nonzero decaying one."""


class ThetaOutOfRange(MemwaveError):
    """Decay exponent theta must exceed 1/2."""


class ParseError(MemwaveError):
    """Config file could not be parsed; carries the line number."""

    def __init__(self, message: str, line: int):
        super().__init__(f"line {line}: {message}")
        self.line = line


class ValidationError(MemwaveError):
    """A named configuration field failed validation."""

    def __init__(self, field: str, message: str):
        super().__init__(f"{field}: {message}")
        self.field = field


class NotPositiveWarning(UserWarning):
    """The observability constant came out nonpositive (time horizon at or below threshold)."""
