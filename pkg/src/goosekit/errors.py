"""Exception types shared across the toolkit."""


class GooseKitError(Exception):
    """Base class for all toolkit errors."""


class InvalidRuleId(GooseKitError):
    """Raised when a rule id outside 1..8 is requested."""


class FrameDecodeError(GooseKitError):
    """Raised when a captured frame cannot be decoded into a message.

    Carries the byte offset at which decoding failed.
    """

    def __init__(self, message: str, offset: int):
        super().__init__(f"{message} (at offset {offset})")
        self.offset = offset


class CorpusFormatError(GooseKitError):
    """Raised on malformed corpus CSV input; carries the 1-based line number."""

    def __init__(self, message: str, line_no: int):
        super().__init__(f"line {line_no}: {message}")
        self.line_no = line_no


class GenerationError(GooseKitError):
    """Raised when the generator exhausts its retry budget for a class."""

    def __init__(self, target: str, attempts: int):
        super().__init__(
            f"could not synthesize a window matching class {target!r} "
            f"after {attempts} attempts"
        )
        self.target = target
        self.attempts = attempts


class BackendError(GooseKitError):
    """Raised when a chat-completion backend fails after retries."""
