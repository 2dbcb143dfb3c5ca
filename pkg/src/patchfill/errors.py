"""Exception types shared across the package."""


class PatchFillError(Exception):
    """Base class for all patchfill errors."""


class InputError(PatchFillError):
    """Invalid user-supplied input (bad dimensions, bad parameters, bad files)."""


class DimensionMismatchError(InputError):
    """Image and mask dimensions differ."""


class EmptyObjectRegionError(InputError):
    """The mask marks no object pixels."""


class ObjectCoversImageError(InputError):
    """The mask marks every pixel as object; nothing is left to copy from."""


class EmptyBorderError(PatchFillError):
    """Priority selection was asked for an empty fill front."""


class NoCandidateError(PatchFillError):
    """No valid source patch exists inside the search bounds."""
