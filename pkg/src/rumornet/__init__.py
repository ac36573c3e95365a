"""
rumornet
========

Push, pull and push-pull rumor spreading on configuration-model multigraphs,
the delayed random-graph push process with its tree-process coupling, and an
ensemble harness for checking growth constants at desk scale.
"""

from .broadcast import RunResult, run_protocol, run_pull, run_push, run_push_pull, time_to_fraction
from .confmodel import (
    CompleteGraph,
    Multigraph,
    StubSpace,
    complete_matching,
    is_simple,
    janson_simple_prob,
    match_uniform,
    new_stub_space,
    pairing_batch,
    sample_simple,
    uniform_pairing,
)
from .degseq import (
    DegreeSequence,
    ProtocolConstants,
    SequenceFamily,
    build_power_law,
    build_regular,
    c_D,
    c_d_regular,
    delta,
    protocol_constants,
    smoothness_report,
)
from .errors import *  # noqa: F401,F403

__version__ = "0.1.0"
