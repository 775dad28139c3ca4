"""Clustering web hosts by binary URL-access patterns with ART1.

Pipeline: :mod:`logparse` (CLF log -> access counts) -> :mod:`features`
(binary pattern matrix) -> :mod:`art1` or :mod:`baselines` (clustering) ->
:mod:`quality` (inter/intra distances, compactness, separation).
"""

from .art1 import Art1Model, Art1Params, assign, train
from .baselines import KMeansParams, SomParams, kmeans_train, som_train
from .clustering import Clustering
from .errors import DataError
from .features import PatternMatrix, binarize, build_base_vector, read_matrix, write_matrix
from .logparse import AccessCounts, LogRecord, RecordFilter, aggregate, parse_log_line
from .quality import QualityReport, evaluate, rand_index
from .synth import gen_log, gen_planted

__version__ = "0.1.0"
