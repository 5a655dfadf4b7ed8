"""Exception taxonomy shared by all nashkit modules.

Every error carries a machine-readable ``code`` (emitted in the CLI error
JSON) and the process exit code the CLI maps it to: 3 for precondition
violations, 4 for numerical failures and broken internal postconditions.
"""


class NashkitError(Exception):
    code = "Error"
    exit_code = 3


# -- precondition violations (CLI exit 3) -----------------------------------

class NotInvertible(NashkitError):
    code = "NotInvertible"


class NotNilpotent(NashkitError):
    code = "NotNilpotent"


class NotUnipotent(NashkitError):
    code = "NotUnipotent"


class NotHyperbolic(NashkitError):
    code = "NotHyperbolic"


class NotExponentialElement(NashkitError):
    code = "NotExponentialElement"


class NotAbelian(NashkitError):
    code = "NotAbelian"


class NotInAlgebra(NashkitError):
    code = "NotInAlgebra"


class NotThetaStable(NashkitError):
    code = "NotThetaStable"


class NotNilpotentAlgebra(NashkitError):
    code = "NotNilpotentAlgebra"


class NotSolvable(NashkitError):
    code = "NotSolvable"


class NotSplit(NashkitError):
    code = "NotSplit"


class NotPositiveRational(NashkitError):
    code = "NotPositiveRational"


class IrrationalSpectrum(NashkitError):
    code = "IrrationalSpectrum"


class ZeroPolynomial(NashkitError):
    code = "ZeroPolynomial"


class ExactModeRequired(NashkitError):
    code = "ExactModeRequired"


class NotSimultaneouslyDiagonalizable(NashkitError):
    code = "NotSimultaneouslyDiagonalizable"


# -- numerical failures (CLI exit 4) -----------------------------------------

class NumericalFailure(NashkitError):
    code = "NumericalFailure"
    exit_code = 4


class ClusterAmbiguity(NumericalFailure):
    """Two eigenvalue clusters sit too close to classify reliably."""

    code = "ClusterAmbiguity"


class PostconditionFailed(NashkitError):
    """An internal consistency check failed; signals a bug or degenerate input."""

    code = "PostconditionFailed"
    exit_code = 4


class LiftFailed(NashkitError):
    """A stage of the reductive-complement correction had no solution."""

    code = "LiftFailed"
    exit_code = 4
