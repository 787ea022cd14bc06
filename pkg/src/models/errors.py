class ConfigError(ValueError):
    """Raised for any invalid configuration, operator grammar or out-of-range parameter."""

    def __init__(self, message, key=None):
        self.key = key
        if key:
            message = f"{key}: {message}"
        super().__init__(message)


class ResultsWriteError(OSError):
    """Raised when results cannot be written to their destination."""

    def __init__(self, destination, reason):
        self.destination = str(destination)
        super().__init__(f"Cannot write results to {self.destination}: {reason}")
