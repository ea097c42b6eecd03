"""Exception hierarchy.

Resource refusals (the brute-force oracles hitting their caps) and semantic
answers (an instance being YES or NO) are kept apart on purpose: a prover
that runs out of budget must never be mistaken for one facing a NO instance.
"""


class DcmError(Exception):
    """Base class for all errors raised by this package."""


class DegreeMismatch(DcmError, ValueError):
    pass


class ParseError(DcmError, ValueError):
    pass


class ResourceError(DcmError):
    """A computation refused to run because it would exceed a size cap."""


class OrderExceedsCap(ResourceError):
    def __init__(self, order: int, cap: int):
        super().__init__(f"group order {order} exceeds enumeration cap {cap}")
        self.order = order
        self.cap = cap


class StateSpaceTooLarge(ResourceError):
    def __init__(self, states: int, limit: int):
        super().__init__(f"{states} enumeration states exceed the limit {limit}")
        self.states = states
        self.limit = limit


class PreconditionError(DcmError):
    """An operation was invoked on an instance it is not defined for."""


class NotInDoubleCoset(PreconditionError):
    pass


class RequiresYesInstance(PreconditionError):
    pass


class RequiresNoInstance(PreconditionError):
    pass


class RestartCapExceeded(DcmError):
    def __init__(self, stage: int, cap: int):
        super().__init__(f"stage {stage} needed more than {cap} attempts")
        self.stage = stage
        self.cap = cap


class SizeMismatch(DcmError, ValueError):
    pass


class TransportError(DcmError):
    """The channel failed; distinct from the verifier rejecting."""


class InsufficientSample(DcmError, ValueError):
    pass
