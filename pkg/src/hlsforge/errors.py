"""Exception types shared across the toolkit."""


class HlsForgeError(Exception):
    """Base class for all errors raised by this package."""


class ParseError(HlsForgeError):
    """Malformed source text. Carries the offending (line, col)."""

    def __init__(self, message, line=0, col=0):
        super().__init__(f"{line}:{col}: {message}")
        self.message = message
        self.line = line
        self.col = col


class UnsupportedConstruct(ParseError):
    """Syntactically valid C that falls outside the supported subset."""


class UnknownSite(HlsForgeError):
    """Pragma attachment site does not exist in the tree."""


class RuntimeTrap(HlsForgeError):
    """Functional simulation trapped (bad index, div by zero, uninitialized read)."""

    def __init__(self, kind, message, line=0, col=0):
        super().__init__(f"{kind} at {line}:{col}: {message}")
        self.kind = kind
        self.line = line
        self.col = col


class SignatureMismatch(HlsForgeError):
    """Two designs compared functionally do not share a signature."""


class NotFound(HlsForgeError):
    """Lookup key absent from a repository."""


class DuplicateSlice(HlsForgeError):
    """Candidate error slice duplicates an existing repository entry."""


class AgentSchemaViolation(HlsForgeError):
    """Agent response failed schema validation after all repair retries."""


class TransportFailure(HlsForgeError):
    """HTTP backend could not complete the request (timeout / network)."""


class MissingHole(HlsForgeError):
    """Prompt template hole left unfilled."""


class EditConflict(HlsForgeError):
    """Two structured edits target overlapping nodes."""


class AllCandidatesInvalid(HlsForgeError):
    """Every evaluator candidate failed schema validation."""


class InfeasibleUnderCaps(HlsForgeError):
    """No pragma plan fits the resource caps, even with all factors at 1."""

    def __init__(self, message, trace=None):
        super().__init__(message)
        self.trace = trace


class NoRefinementPossible(HlsForgeError):
    """Refinement rules have no move left (all factors at 1, still over cap)."""


class UnknownTripCount(HlsForgeError):
    """Cycle-accurate scheduling needs every trip count to be known."""


class MalformedReport(HlsForgeError):
    """External tool report text does not match the registered dialect."""


class NoEligibleSite(HlsForgeError):
    """Fault injection found no structural site for the requested error type."""


class EmptyResultSet(HlsForgeError):
    """Evaluation metrics need at least one case."""
