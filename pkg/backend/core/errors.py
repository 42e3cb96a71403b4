"""Exception hierarchy shared by every package.

Library code raises these; the CLI maps ``exit_code`` to the process exit
status and prints ``error: <kind>: <message>`` on a single line.
"""

from __future__ import annotations


class GrassmannError(Exception):
    exit_code = 2

    @property
    def kind(self) -> str:
        return type(self).__name__


class InputError(GrassmannError):
    """Invalid or inconsistent input (exit code 1)."""

    exit_code = 1


class NumericalError(GrassmannError):
    """The numbers did not cooperate (exit code 2)."""

    exit_code = 2


class ConfigError(InputError, ValueError):
    pass


# subspace
class AllZeroInput(InputError):
    pass


class AmbientMismatch(InputError):
    pass


class DimensionMismatch(InputError):
    pass


class HeterogeneousSet(InputError):
    pass


class NotOrthonormal(InputError):
    pass


# flagmean
class WeightMismatch(InputError):
    pass


class NonpositiveWeight(InputError):
    pass


class ComponentTooLarge(InputError):
    pass


# mds / chsa
class SizeMismatch(InputError):
    pass


class TooFewPoints(InputError):
    pass


class NoPositiveEigenvalues(NumericalError):
    pass


class SolverDivergence(NumericalError):
    pass


# pipeline
class MalformedHeader(InputError):
    pass


class PayloadSizeMismatch(InputError):
    pass


class UnsupportedDtype(InputError):
    pass


class NonFiniteCube(InputError):
    pass


class PatchLargerThanImage(InputError):
    pass


class RankExceedsAmbient(InputError):
    pass


class ClassTooSmall(InputError):
    def __init__(self, label: int, available: int, requested: int) -> None:
        super().__init__(
            f"class {label} has {available} labelled pixels, fewer than draw size {requested}"
        )
        self.label = label
        self.available = available
        self.requested = requested


# artifacts
class MalformedArtifact(InputError):
    pass
