"""Exception types shared across the package."""


class MeandimError(Exception):
    """Base class for package-specific failures."""


class GroupMismatchError(MeandimError, ValueError):
    """Operands belong to different groups."""


class OutOfSupportError(MeandimError):
    """A query left the region where an explicit resolver is valid."""


class ScheduleError(MeandimError):
    """A tiling schedule cannot be extended consistently."""


class CapacityError(MeandimError):
    """A planning requirement cannot be met at any available level."""


class DepthError(MeandimError):
    """A value is not determined by the planned construction depth."""


class SizeGuardError(MeandimError):
    """A materialization request exceeds the in-memory size bound."""


class NotRealizedError(MeandimError):
    """A requested assignment falls outside the truncated code range (capped mode)."""


class DecodeError(MeandimError):
    """A pattern is inconsistent with every valid tiling configuration."""


class ConfigError(MeandimError, ValueError):
    """An experiment configuration is invalid."""
