"""Exception hierarchy.

Every error raised by the library derives from :class:`WaveMatError`, so
callers (and the CLI) can separate mathematical failures from programming
errors with a single ``except``.
"""


class WaveMatError(ValueError):
    """Base class for all library errors."""

    kind = "error"

    def payload(self):
        return {"error": self.kind, "message": str(self)}


class DimensionMismatch(WaveMatError):
    kind = "dimension mismatch"


class ZeroConstantTerm(WaveMatError):
    kind = "zero constant term"


class EvalAtZero(WaveMatError):
    kind = "evaluation at zero"


class NotParaunitary(WaveMatError):
    kind = "not paraunitary"


class DetNotMonomial(WaveMatError):
    kind = "determinant not monomial"


class CertificationError(WaveMatError):
    """A constructed object failed its own postcondition checks."""

    kind = "certification failed"


class OrderMismatch(CertificationError):
    kind = "order mismatch"


class NotInWM1(WaveMatError):
    kind = "not in WM1"

    def __init__(self, failures, permutation=None):
        self.failures = list(failures)
        # row index to swap with the last row, when that would repair the
        # "last row of A_N is zero" condition
        self.permutation = permutation
        msg = "; ".join(self.failures)
        if permutation is not None:
            msg += f" (hint: interchange rows {permutation} and last)"
        super().__init__(msg)

    def payload(self):
        out = super().payload()
        out["failures"] = self.failures
        if self.permutation is not None:
            out["swap_row"] = self.permutation
        return out


class NotPU1(WaveMatError):
    kind = "not in PU1"


class NotPositiveDefinite(WaveMatError):
    kind = "not positive definite"


class SingularMatrix(WaveMatError):
    kind = "singular matrix"


class SingularV1(SingularMatrix):
    kind = "singular V(1)"


class NoNonzeroConstant(WaveMatError):
    kind = "no nonzero constant"


class RankDefect(WaveMatError):
    kind = "rank defect"


class ConsecutiveOrthogonal(WaveMatError):
    kind = "consecutive orthogonal"

    def __init__(self, index):
        self.index = index
        super().__init__(f"directions {index} and {index + 1} are orthogonal")

    def payload(self):
        out = super().payload()
        out["index"] = self.index
        return out


class NotUnitRow(WaveMatError):
    kind = "not a unit row"


class OrderSlack(WaveMatError):
    kind = "order slack"


class ValueMismatch(WaveMatError):
    kind = "value mismatch"


class NotUnitary(WaveMatError):
    kind = "not unitary"
