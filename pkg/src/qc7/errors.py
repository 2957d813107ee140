"""Exception types with stable CLI exit semantics.

StructuralError and ConfigError map to exit code 2 (usage/structure);
mathematical must-pass failures are reported, not raised, and map to exit
code 1 in the CLI layer.
"""


class QC7Error(Exception):
    pass


class StructuralError(QC7Error):
    """Dimension mismatches, malformed inputs, representation violations."""


class ConfigError(QC7Error):
    """Invalid run configuration."""


class UnsupportedDimensionError(QC7Error):
    """Operation audited only for quaternionic dimension n = 1."""


class ModelValidationError(QC7Error):
    """A model failed a named structure identity during construction."""

    def __init__(self, identity, detail=""):
        self.identity = identity
        super().__init__("model validation failed at %r%s"
                         % (identity, ": " + detail if detail else ""))


class EigenSolveError(QC7Error):
    """Eigensolver failed to certify within its iteration/tolerance budget."""

    def __init__(self, message, best_residual=None):
        self.best_residual = best_residual
        super().__init__(message)
