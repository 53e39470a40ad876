"""Exception hierarchy.

Every error carries a short machine-readable ``code`` used by the CLI.
"""


class ToledoError(Exception):
    code = "error"


class NonHyperbolicSurface(ToledoError):
    code = "non_hyperbolic_surface"


class UncertifiedMargin(ToledoError):
    code = "uncertified_margin"


class VerdictUnknown(ToledoError):
    code = "verdict_unknown"


class NotDominant(ToledoError):
    code = "not_dominant"


class BracketViolation(ToledoError):
    code = "bracket_violation"


class DimensionMismatch(ToledoError):
    code = "dimension_mismatch"


class NotLagrangian(ToledoError):
    code = "not_lagrangian"


class NotTransverse(ToledoError):
    code = "not_transverse"


class NearDegenerate(ToledoError):
    code = "near_degenerate"


class RefinementLimit(ToledoError):
    code = "refinement_limit"


class RelatorNotCentral(ToledoError):
    code = "relator_not_central"


class NumericalDrift(ToledoError):
    code = "numerical_drift"


class BadHyperbolization(ToledoError):
    code = "bad_hyperbolization"


class NonHyperbolicBoundary(ToledoError):
    code = "non_hyperbolic_boundary"


class MixedPresentations(ToledoError):
    code = "mixed_presentations"


class SameSignObstructions(ToledoError):
    code = "same_sign_obstructions"


class ParseError(ToledoError):
    code = "parse_error"


class SchemaError(ToledoError):
    code = "schema_error"


class RelatorViolation(ToledoError):
    code = "relator_violation"

    def __init__(self, message, residual=None):
        super().__init__(message)
        self.residual = residual
