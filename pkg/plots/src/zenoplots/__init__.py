"""Figure rendering for simulator run directories."""

from .io import (
    MissingDataError,
    SnapshotStack,
    read_continuity,
    read_index,
    read_meta,
    read_series,
    read_snapshots,
    read_summary,
)
from .render import KINDS, FigureJob, render

__version__ = "0.1.0"
