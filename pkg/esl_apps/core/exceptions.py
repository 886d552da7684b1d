class EslError(Exception):
    """Base class for every error raised by esl_apps."""


class ConstructionError(EslError, ValueError):
    pass


class UsageError(EslError, ValueError):
    pass


class ConfigError(EslError, ValueError):
    def __init__(self, message, key=None):
        super().__init__(message)
        self.key = key


class SolverError(EslError, RuntimeError):
    pass


class RecordStoreError(EslError, OSError):
    def __init__(self, message, path=None, line_number=None):
        if line_number is not None:
            message = f"{path}:{line_number}: {message}"
        elif path is not None:
            message = f"{path}: {message}"
        super().__init__(message)
        self.path = path
        self.line_number = line_number


class VerificationError(EslError, AssertionError):
    def __init__(self, message, failures=None):
        super().__init__(message)
        self.failures = failures or []
