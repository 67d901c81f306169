"""affinet: affinity networks over weighted social graphs.

Build affinity matrices from a graph (best friend, best common friend,
machiavelli), mix them with constrained linear combinations, run
modularity-based community detection on the raw or transformed network,
and score partitions with modularity and NMI.
"""

from .affinity import (
    AffinityMatrix,
    AffinitySpec,
    CombinationParams,
    affinity_to_graph,
    best_common_friend,
    best_friend,
    build_affinity,
    combine,
    machiavelli,
    parse_affinity_spec,
    symmetrize,
)
from .community import (
    LouvainConfig,
    best_partition,
    girvan_newman,
    greedy_dendrogram,
    greedy_modularity,
    louvain,
)
from .betweenness import edge_betweenness
from .datasets import DATASET_NAMES, load_named_dataset
from .errors import (
    AffinetError,
    DomainError,
    IngestionError,
    ParseError,
    ValidationError,
)
from .experiments import (
    ALGORITHM_NAMES,
    DatasetBundle,
    SweepConfig,
    SweepRecord,
    admissible_grid,
    best_records,
    builtin_dataset,
    run_baseline,
    run_sweep,
    write_report,
)
from .graph import (
    NodeLabels,
    WeightedGraph,
    dump_edgelist,
    dump_gml,
    load_edgelist,
    load_gml,
)
from .metrics import ContingencyTable, entropy, modularity, mutual_information, nmi
from .partition import Dendrogram, Partition

__version__ = "0.1.0"
