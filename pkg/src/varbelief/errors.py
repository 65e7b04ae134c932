"""Exception hierarchy. Everything derives from ValueError so callers can catch broadly."""


class BeliefError(ValueError):
    pass


class SpaceMismatchError(BeliefError):
    """Two objects were built over different state spaces."""


class InconsistentScenarioError(BeliefError):
    """The update is undefined: the realized signal rules out every state."""


class DegenerateRegimeError(BeliefError):
    """Entropy taste mu >= 1; no exponential rule corresponds to these preferences."""


class UnidentifiedParametersError(BeliefError):
    """The regression design is singular, so (alpha, beta) cannot be recovered."""


class ScenarioValidationError(BeliefError):
    """A scenario or dataset file failed validation."""

    def __init__(self, field, message):
        self.field = field
        super().__init__(f"{field}: {message}")
