"""Exceptions raised by the geometric routines."""


class GeometryError(ValueError):
    """Base class for refusals that come from the geometry, not bad input."""


class OutsideBigCell(GeometryError):
    """A frame spans a subspace in the cut locus of the origin."""


class UndefinedAction(GeometryError):
    """The fractional action sends the point out of the chart."""


class ArgUndefined(GeometryError):
    """No continuous argument of the kernel is available at this pair."""


class NotRegular(GeometryError):
    """A pair fails the regularity test (unique minimizing segment inside the chart).

    ``pair_class`` holds the :class:`~grasstri.geodesics.PairClass` that failed and
    ``index`` the position of the failing pair or triple when several are checked.
    """

    def __init__(self, message, pair_class=None, index=None):
        super().__init__(message)
        self.pair_class = pair_class
        self.index = index


class CutLocusError(NotRegular):
    """The endpoint lies in (or numerically at) the cut locus of the start point."""


class FillingLeavesChart(GeometryError):
    """The coned filling of a triangle leaves the big cell."""
