"""Exception hierarchy shared across the package.

Every error raised by chromapool derives from ChromapoolError so callers
(service layer, CLI) can map failures to stable error codes.
"""


class ChromapoolError(Exception):
    """Base class for all chromapool errors."""

    code = "internal"


class NotFoundError(ChromapoolError):
    """A referenced file or directory does not exist."""

    code = "not_found"


class ParseError(ChromapoolError):
    """A file (palette CSV, annotations JSONL, config, image) failed to parse."""

    code = "parse_error"


class ConfigError(ChromapoolError):
    """A configuration value violates its documented invariants."""

    code = "invalid_config"


class ProcessingError(ChromapoolError):
    """An operation received inputs it cannot process (empty mask,
    disjoint attentions, insufficient pixels, no illuminant evidence)."""

    code = "processing_error"
