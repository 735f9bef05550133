"""Exception hierarchy shared by all modules."""


class WChebError(Exception):
    """Base class. ``reason`` is a short machine-readable tag."""

    reason = "error"

    def __init__(self, message="", **details):
        super().__init__(message)
        self.details = details


class ZeroPolynomial(WChebError):
    reason = "zero_polynomial"


class NonConvergence(WChebError):
    """Iteration stopped before reaching its tolerance.

    ``details['best']`` carries the best iterate when one exists.
    """

    reason = "non_convergence"


class UnsupportedSet(WChebError):
    reason = "unsupported_set"


class CapacityUnavailableExact(WChebError):
    reason = "capacity_unavailable_exact"


class PoleOnSet(WChebError):
    reason = "pole_on_set"


class HarmonicMeasureUnavailable(WChebError):
    reason = "harmonic_measure_unavailable"


class UndefinedAt(WChebError):
    reason = "weight_undefined"


class ReferenceDegenerate(WChebError):
    reason = "reference_degenerate"


class LinearSystemSingular(WChebError):
    reason = "linear_system_singular"


class RankDeficient(WChebError):
    reason = "rank_deficient"


class EmptyNorm(WChebError):
    reason = "empty_norm"


class AmbiguousCertificate(WChebError):
    reason = "ambiguous_certificate"


class NoCertificate(WChebError):
    reason = "no_certificate"


class ChainTooShort(WChebError):
    reason = "chain_too_short"


class W2HasZero(WChebError):
    reason = "w2_has_zero"


class RootOffSet(WChebError):
    reason = "root_off_set"


class IrregularOrigin(WChebError):
    reason = "irregular_origin"


class SchemaError(WChebError):
    reason = "schema_error"
