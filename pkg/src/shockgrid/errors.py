"""Exception hierarchy shared by all shockgrid modules."""


class ShockgridError(Exception):
    """Base class for every error raised by this package."""


# taxonomy
class MalformedCode(ShockgridError, ValueError):
    pass


class SchemeMismatch(ShockgridError, ValueError):
    pass


class UnknownCode(ShockgridError, KeyError):
    def __str__(self):
        return str(self.args[0]) if self.args else "unknown code"


class NegativeEntry(ShockgridError, ValueError):
    pass


# shock engine
class BadThreshold(ShockgridError, ValueError):
    pass


class DimensionMismatch(ShockgridError, ValueError):
    pass


class AxisMisalignment(ShockgridError, ValueError):
    pass


class UnmappedIndustry(ShockgridError, KeyError):
    def __str__(self):
        return str(self.args[0]) if self.args else "unmapped industry"


# aggregation
class MissingWages(ShockgridError, ValueError):
    pass


class DegenerateInput(ShockgridError, ValueError):
    pass


# scenarios / epidemiology
class UnknownScenario(ShockgridError, KeyError):
    def __str__(self):
        return str(self.args[0]) if self.args else "unknown scenario"


class MalformedScenario(ShockgridError, ValueError):
    pass


class IncompleteCoverage(ShockgridError, ValueError):
    pass


class IncompleteCoverageWarning(UserWarning):
    pass


class BadShare(ShockgridError, ValueError):
    pass


class BadCount(ShockgridError, ValueError):
    pass


# pipeline
class SchemaError(ShockgridError, ValueError):
    pass


class IntegrityError(ShockgridError, ValueError):
    pass
