"""Exception hierarchy shared by every module."""


class UltragraphError(Exception):
    """Base class for all errors raised by the package."""


class ModulusOverflow(UltragraphError):
    """A residue question was asked for a modulus the ultrafilter point cannot answer."""


class FormOverflow(UltragraphError):
    """An arithmetic result left the supported sequence forms."""


class PreconditionFailed(UltragraphError):
    """The object is outside the class a theorem or construction requires."""
