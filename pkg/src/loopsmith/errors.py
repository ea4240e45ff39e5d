"""Exception hierarchy shared across the toolkit."""


class LoopsmithError(Exception):
    pass


# --- scop-core ---

class MissingMarkers(LoopsmithError):
    """No (or unbalanced) #pragma scop / #pragma endscop pair."""


class MultipleRegions(LoopsmithError):
    """More than one marker pair in one source file."""


class ParseError(LoopsmithError):
    pass


class NonAffineBound(ParseError):
    pass


class UnsupportedConstruct(ParseError):
    pass


class UnknownParameter(ParseError):
    pass


class DomainTooLarge(LoopsmithError):
    """Exhaustive-scan fallback refused: iteration domain above the cap."""


# --- synthesizer ---

class Infeasible(LoopsmithError):
    """A parameter draw admits no legal loop bounds (expected, counted)."""


# --- retrieval ---

class EmptyCorpus(LoopsmithError):
    pass


class UnknownDoc(LoopsmithError):
    pass


# --- llm-client ---

class MissingSlot(LoopsmithError):
    pass


class NoCodeBlock(LoopsmithError):
    pass


class AuthError(LoopsmithError):
    pass


class RateLimited(LoopsmithError):
    pass


class ProviderTimeout(LoopsmithError):
    """Transport failure / exhausted fixture; surfaces as a failed attempt."""


# --- verifier / backend ---

class CompilerNotFound(LoopsmithError):
    """Environment error: the configured C compiler is not on the host."""


class CoverageToolUnavailable(LoopsmithError):
    pass


class BackendUnavailable(LoopsmithError):
    pass


class VerificationFailed(LoopsmithError):
    """An optimizer backend produced code that fails differential testing."""
