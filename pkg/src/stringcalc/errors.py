"""Exception hierarchy shared by all modules."""


class StringCalcError(Exception):
    """Base class for all library errors."""


class UnknownBase(StringCalcError):
    """A wire type refers to a base symbol that is not declared."""


class TypeMismatch(StringCalcError):
    """Two ports with different wire types were asked to connect."""


class ZeroArity(StringCalcError):
    """A spider needs at least one leg."""


class InvalidDiagram(StringCalcError):
    """An operation received a diagram that fails validation."""


class ShapeMismatch(StringCalcError):
    """Two tensors or diagrams with incompatible shapes were compared."""


class ZeroNorm(StringCalcError):
    """Similarity of a zero tensor is undefined."""


class NotSquare(StringCalcError):
    """Tensor cannot be reshaped to a square matrix."""


class NotHermitian(StringCalcError):
    """Matrix is not Hermitian within tolerance."""


class MissingPayload(StringCalcError):
    """A box has no tensor payload in the model."""


class DimensionMismatch(StringCalcError):
    """A payload shape disagrees with the model's dimension table."""


class UnknownWord(StringCalcError):
    """A word has no lexicon entry."""


class PayloadMissing(StringCalcError):
    """A lexicon entry references a payload that was never supplied."""


class AmbiguousParse(StringCalcError):
    """More than one parse and no index to pick one."""


class NoParse(StringCalcError):
    """No pregroup reduction to the target type exists."""


class StateExplosion(StringCalcError):
    """Reachability search exceeded its visited-state cap."""


class VerificationFailure(StringCalcError):
    """A protocol check found a branch outside tolerance."""
