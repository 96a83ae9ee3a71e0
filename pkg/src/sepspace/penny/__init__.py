"""Reachability in directed penny graphs."""

from .aux import AuxiliaryGraph, crossing_closure_check, edges_cross, maximal_planar_subgraph
from .disks import DiskSet, touching_pairs
from .pseudo import PseudoSeparator, build_pseudo_separator
from .reach import PennyStats, c_comp, penny_reach, reach_aux
from .subdivision import LineRecord, Rect, RectSubdivision, balanced_line, build_subdivision, revalidate_line

__all__ = ["DiskSet", "touching_pairs", "LineRecord", "Rect", "RectSubdivision", "balanced_line",
           "build_subdivision", "revalidate_line", "AuxiliaryGraph", "crossing_closure_check", "edges_cross",
           "maximal_planar_subgraph", "PseudoSeparator", "build_pseudo_separator", "PennyStats", "c_comp",
           "penny_reach", "reach_aux"]
