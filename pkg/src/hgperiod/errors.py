"""Exception hierarchy.  Every error carries a human-readable context string."""
from __future__ import annotations


class HGError(Exception):
    """Base class for all package errors."""


class ZeroForm(HGError):
    pass


class DuplicateHyperplane(HGError):
    pass


class NotEssential(HGError):
    pass


class EdgeNotInLattice(HGError):
    pass


class ConstantF0(HGError):
    pass


class NotGrowing(HGError):
    pass


class TThreshold(HGError):
    pass


class BijectionFailure(HGError):
    pass


class DegenerateFlag(HGError):
    pass


class PointOnHyperplane(HGError):
    pass


class OnSingularLocus(HGError):
    pass


class GammaPole(HGError):
    pass


class Unbounded(HGError):
    pass


class UnboundedBelow(HGError):
    pass


class NonIntegrable(HGError):
    pass


class MaxDepthExceeded(HGError):
    pass


class SchemaError(HGError):
    pass


class ParseError(HGError):
    pass
