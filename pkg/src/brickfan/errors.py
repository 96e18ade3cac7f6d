"""Exception hierarchy. Every error carries a machine-readable category string."""


class WorkbenchError(Exception):
    category = "WorkbenchError"

    def __init__(self, message=""):
        super().__init__(message or self.category)


class NonAdmissibleRelation(WorkbenchError):
    category = "NonAdmissibleRelation"


class RadicalBoundExceeded(WorkbenchError):
    category = "RadicalBoundExceeded"


class ImproperIdeal(WorkbenchError):
    category = "ImproperIdeal"


class AlgebraMismatch(WorkbenchError):
    category = "AlgebraMismatch"


class ZeroModule(WorkbenchError):
    category = "ZeroModule"


class ZeroVector(WorkbenchError):
    category = "ZeroVector"


class NotSubrepresentation(WorkbenchError):
    category = "NotSubrepresentation"


class NotTauRigid(WorkbenchError):
    category = "NotTauRigid"


class NotIndecomposable(WorkbenchError):
    category = "NotIndecomposable"


class InputIsBrick(WorkbenchError):
    category = "InputIsBrick"


class SearchExhausted(WorkbenchError):
    category = "SearchExhausted"


class MutationFailed(WorkbenchError):
    category = "MutationFailed"


class TauRigidInput(WorkbenchError):
    category = "TauRigidInput"


class NotASink(WorkbenchError):
    category = "NotASink"


class NotASource(WorkbenchError):
    category = "NotASource"


class UnknownExample(WorkbenchError):
    category = "UnknownExample"
