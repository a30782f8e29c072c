"""Permutation-validated correlation and causality networks for panels of short,
gappy daily series."""

from ._backend import BACKEND
from .causality import TEConfig, build_lagged_triple, granger_f, transfer_entropy
from .errors import (ConfigError, DataError, InputFileError, MarketnetError, ParseError,
                     UndefinedStatisticError, ValidationError)
from .ingest import Panel, SignalKind, build_panel, panel_from_records, parse_records
from .network import build_network, metrics
from .permval import EdgeMatrix, EdgeResult, PermutationConfig, permutation_z, validate_all_pairs
from .rankstats import PairedSample, kendall_tau, pearson_r, spearman_rho
from .similarity import combined_te_centrality, compare_networks, threshold_sweep
from .synth import SynthSpec, generate

__version__ = "0.1.0"
