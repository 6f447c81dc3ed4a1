"""Latent state learning for time-varying graphs built from edge streams."""

from .features import (
    FeatureSeries,
    FeatureVector,
    average_clustering,
    average_degree,
    extract_features,
    local_clustering,
)
from .pipeline import RunConfig, run_pipeline
from .snapshots import (
    DecayConfig,
    DiscreteConfig,
    SnapshotGraph,
    decay_probability,
    discrete_snapshots,
    probabilistic_snapshots,
)
from .states import (
    StateModel,
    Standardization,
    TransitionMatrix,
    fit_state_space,
    kmeans,
    relabel_states,
    standardize,
    transition_matrix,
)
from .stream import EdgeStream, ParseError, TimedEdge, ValidationError, normalize, parse_edge_stream
from .synth import DetectionReport, Event, SynthConfig, evaluate_detection, generate_stream
from .trend import LinearFit, detrend, linear_fit

__version__ = "0.1.0"
