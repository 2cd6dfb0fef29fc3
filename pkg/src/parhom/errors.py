"""Exception hierarchy.

Errors fall into three families that the command line maps onto exit codes:
input problems (1), failed theorem comparisons (2) and resource guardrails (3).
"""


class ParhomError(Exception):
    """Base class for all errors raised by parhom."""


class InputError(ParhomError):
    pass


class GuardrailError(ParhomError):
    pass


class MatrixTooLarge(GuardrailError):
    pass


class GroupTooLarge(GuardrailError):
    pass


class ComplexNotExactlyComposable(InputError):
    pass


class RingMismatch(InputError):
    pass


class InvalidCayleyTable(InputError):
    pass


class NotASubgroup(InputError):
    pass


class NotInB(InputError):
    pass


class InvalidSetAction(InputError):
    pass


class NonSaturatedDomain(InputError):
    pass


class NonFreeGlobalization(InputError):
    pass


class ParseError(InputError):
    pass


class ValidationError(InputError):
    pass


class PartialRepAxiomViolation(InputError):
    """Carries every failing instance as (s, t, axiom) triples in ``violations``."""

    def __init__(self, violations, message=None):
        self.violations = list(violations)
        if message is None:
            s, t, ax = self.violations[0]
            message = (f"{len(self.violations)} axiom violation(s); first: "
                       f"axiom {ax} at s={s}, t={t}")
        super().__init__(message)


class ConstructionFailed(ParhomError):
    pass


class TheoremViolation(ParhomError):
    """Two pipelines that should agree produced different answers."""

    def __init__(self, message, report=None):
        super().__init__(message)
        self.report = report
