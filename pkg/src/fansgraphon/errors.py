"""Exception types shared across the package."""


class ConfigError(ValueError):
    """Invalid or unknown configuration (bad spec id, malformed config file)."""


class ParseError(ValueError):
    """Malformed input data file; carries the offending line number."""

    def __init__(self, message: str, line: int | None = None):
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
        self.line = line
