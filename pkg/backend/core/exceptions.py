# backend/core/exceptions.py


class CliError(Exception):
    """Error reported on stderr that ends the command with exit_code"""

    exit_code = 1

    def __init__(self, message: str):
        super().__init__(message)
        self.message = message


class ParseError(CliError):
    exit_code = 2


class DomainInputError(CliError):
    exit_code = 3


class OutputPathError(CliError):
    exit_code = 4


class OverlapError(CliError):
    exit_code = 5

    def __init__(self, message: str, max_omega_scale: float):
        super().__init__(message)
        self.max_omega_scale = max_omega_scale


class NumericalError(CliError):
    """Series budget exhausted or another numerical failure"""

    exit_code = 6
