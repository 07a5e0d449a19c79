class InputError(Exception):
    """Invalid input data, file, or parameter (maps to CLI exit code 1)."""


class TrainingError(RuntimeError):
    """Training aborted, e.g. on non-finite loss or parameters."""
