"""Exception hierarchy shared by the library and the CLI."""

from typing import Optional


class AInfError(Exception):
    """Base class for every error raised by this package"""


class InputError(AInfError, ValueError):
    """Malformed or inconsistent input data (CLI exit code 2)"""


class ConfigError(InputError):
    """Bad environment or flag value"""


class ParseError(InputError):
    """Category file could not be parsed; carries the position"""

    def __init__(self, message: str, position: Optional[str] = None):
        self.position = position
        if position:
            message = f"{message} (at {position})"
        super().__init__(message)


class MissingBlockError(InputError):
    """A command needs an optional file block that is absent"""

    def __init__(self, block: str, command: str):
        self.block = block
        super().__init__(f"command '{command}' requires a '{block}' block")


class NotDGError(InputError):
    """DG input violates an axiom; `axiom` names it"""

    def __init__(self, axiom: str, detail: str = ""):
        self.axiom = axiom
        super().__init__(f"{axiom}: {detail}" if detail else axiom)


class NotACycleError(AInfError):
    """Right-hand side of a boundary problem is not a cycle"""


class UnsolvableError(AInfError):
    """Assembled linear system is inconsistent"""


class PreconditionError(AInfError):
    """A construction was called on data violating its hypotheses"""


class IncompatibleFamilyError(AInfError):
    """A family of maps violates one of its compatibility systems"""

    def __init__(self, system: str, detail: str = ""):
        self.system = system
        super().__init__(f"incompatible family: {system}" + (f" ({detail})" if detail else ""))
