"""Exception hierarchy.

Every error carries a short machine-readable ``code`` so callers (and the
CLI exit-code mapping) can dispatch without parsing messages.
"""


class CoilcoreError(Exception):
    """Base class; ``code`` is a stable machine-readable identifier."""

    code = "error"

    def __init__(self, message, code=None):
        super().__init__(message)
        if code is not None:
            self.code = code


class DomainError(CoilcoreError, ValueError):
    """Invalid physical parameter or out-of-domain argument."""

    code = "domain"


class ConfigError(CoilcoreError, ValueError):
    """Inconsistent run configuration (not a netlist problem)."""

    code = "config"


class NetlistError(CoilcoreError, ValueError):
    """Netlist parse or validation failure.

    Parse codes: ``lexical``, ``unknown-kind``, ``bad-params``,
    ``duplicate-name``.  Validation codes: ``topology``,
    ``bad-capacitance``, ``missing-tran``, ``multi-inductive``
    (plus ``multiple-tran`` for repeated directives).
    """

    def __init__(self, message, code, line=None, column=None):
        loc = ""
        if line is not None:
            loc = f" (line {line}" + (f", column {column}" if column is not None else "") + ")"
        super().__init__(message + loc, code=code)
        self.line = line
        self.column = column


class SimulationError(CoilcoreError, RuntimeError):
    """Runtime failure inside a simulation or a measurement.

    Codes: ``divergence`` (non-finite state, carries ``time``),
    ``stiffness`` (coil-core loop denominator below floor),
    ``insufficient-data``, ``range``, ``shape``.
    """

    def __init__(self, message, code, time=None):
        super().__init__(message, code=code)
        self.time = time
