"""Exact-arithmetic curve-class lattices, Novikov series, degeneration
graphs and Gromov-Witten table transforms for flops and small transitions."""

from _gwsurgery import (  # noqa: F401
    CurveClass,
    EnumerationCaps,
    GeometryFile,
    GWTable,
    GwError,
    Lattice,
    LatticeMap,
    NovikovElement,
    Ring,
    RingElement,
    TripleRecord,
    analytic_continue,
    enumerate_blowup_triples,
    enumerate_conifold_triples,
    flop_involution_check,
    flop_transform,
    is_effective,
    isomorphic,
    load_geometry,
    load_gwtable,
    minimal_lift,
    multiple_cover_tail,
    new_gwtable,
    normal_form,
    nov_add,
    parse_geometry,
    parse_gwtable,
    parse_novikov,
    ring_multiply,
    substitute,
    three_point_function,
    transition_index_set,
    transition_threepoint_check,
    transition_transform,
    transition_transform_fiber_sum,
    triple_degree0,
    truncate,
    wallcrossing_check,
)

__all__ = [name for name in dir() if not name.startswith("_")]
