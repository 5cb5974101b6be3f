"""
Exception hierarchy for negprob
Every error carries a human-readable detail and the CLI exit code it maps to
"""

from typing import Optional


class NegprobError(Exception):
    """Base error; exit_code plays the role of an HTTP status code"""

    exit_code = 2

    def __init__(self, detail: str):
        super().__init__(detail)
        self.detail = detail


class ParseError(NegprobError):
    """Malformed document, scalar literal or state specifier"""

    def __init__(self, detail: str, location: Optional[str] = None):
        if location:
            detail = f"{location}: {detail}"
        super().__init__(detail)
        self.location = location


class FieldMismatchError(NegprobError):
    """Arithmetic or system assembly across two different Scalar fields"""


class ExactFieldRequiredError(NegprobError):
    """Operation needs exact arithmetic but got the float field"""


class DimensionError(NegprobError):
    """Shapes, indices or sizes that do not fit together"""


class SpaceTooLargeError(DimensionError):
    """Sample space or product construction beyond the point cap"""


class InconsistentSpaceError(NegprobError):
    """Observation space violates the consistency requirement"""

    exit_code = 1

    def __init__(self, detail: str, violations: Optional[list] = None):
        super().__init__(detail)
        self.violations = violations or []


class UnknownFixtureError(NegprobError):
    """Fixture name not recognized"""


class NotAutomorphismError(NegprobError):
    """Permutation does not map the grounding system to itself"""


class NotProductSpaceError(NegprobError):
    """Space is not the product construction of a multi-test experiment"""


class StateError(NegprobError):
    """Quantum state or observable fails its invariants"""


class FrameError(NegprobError):
    """Malformed measurement frame"""


class DegenerateDirectionError(NegprobError):
    """Coefficients (a, b) = (0, 0)"""


class GridResolutionError(NegprobError):
    """Grid or ray count violates a Nyquist condition"""

    def __init__(self, detail: str, required: Optional[int] = None):
        if required is not None:
            detail = f"{detail} (minimum required: {required})"
        super().__init__(detail)
        self.required = required
