"""Exception types shared across the toolkit.

The CLI and the HTTP service map these onto exit codes / status codes,
so raising the right class matters more than the message text.
"""


class AutgameError(Exception):
    """Base class for all toolkit errors."""


class GroupSpecError(AutgameError):
    """Malformed group-spec string or invalid Cayley-table file."""


class GroupValidationError(AutgameError):
    """A Cayley table violates a group law.

    Carries the name of the violated law and a witness triple so the
    failure is reproducible by hand.
    """

    def __init__(self, law: str, witness: tuple[int, ...], message: str):
        super().__init__(message)
        self.law = law
        self.witness = witness


class SizeLimitError(AutgameError):
    """A configured size guardrail would be exceeded."""


class UnknownVertexError(AutgameError):
    """A vertex ID is not present in the graph."""


class VerificationError(AutgameError):
    """A machine-checked construction invariant failed.

    `invariant` names the failed check; constructions never return
    unverified graphs silently.
    """

    def __init__(self, invariant: str, message: str):
        super().__init__(message)
        self.invariant = invariant


class GameError(AutgameError):
    """Illegal game operation (bad challenge index, exhausted rounds...)."""
