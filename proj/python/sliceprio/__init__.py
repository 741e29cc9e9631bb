"""Dependence-graph slicing, affected-component coupling, and regression
test prioritization."""

import json as _json

from ._core import (  # noqa: F401
    AccReport,
    ComputeError,
    DataError,
    DependenceGraph,
    Edge,
    FaultMatrix,
    HdSlice,
    Node,
    NodeAcc,
    NodeWeight,
    ParseError,
    PrioritizedSuite,
    RankedTest,
    TestCase,
    TestWeights,
    WeightMap,
    acc_raw,
    acc_report,
    anc_prioritize,
    apfd,
    assign_weights_kmeans,
    assign_weights_threshold,
    build_asg,
    hd_slice,
    induced_subgraph,
    inflow,
    kmeans_1d,
    load_graph,
    outflow,
    parse_coverage,
    parse_faults,
    parse_weight_injection,
    percent_detected_curve,
    prioritize,
    reachable,
    run_pipeline_json,
    test_weights,
    validate,
)


def run_pipeline(graph, criterion, coverage, **kwargs):
    """Full slice -> coupling -> weights -> prioritization run.

    Returns the machine-readable run report as a dict. Keyword arguments
    mirror the CLI flags: weights_mode, seed, permissive,
    exclude_containment, injected_weights, faults.
    """
    return _json.loads(run_pipeline_json(graph, criterion, coverage, **kwargs))
