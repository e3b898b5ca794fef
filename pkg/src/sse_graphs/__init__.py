"""Strong shift equivalence of finite graphs: witnesses, chains, conjugacies and
Cuntz-Krieger corner certificates."""

from .bipartite import (
    BipartiteInflation,
    PathBijection,
    build_bipartite,
    recover_side,
    tensor_decomposition_check,
)
from .ck import (
    CKElement,
    EmbeddingMap,
    certify_corner_embedding,
    check_relations,
    check_equal,
    embed,
    embedding_map,
    normal_form,
)
from .graph import (
    Edge,
    Graph,
    graph_from_matrix,
    hereditary_closure,
    is_regular_graph,
    paths_of_length,
    saturated_hereditary_closure,
    vertex_matrix,
)
from .matrix import Matrix, canonical_form, is_regular, multiply, trace_power
from .pipeline import certify
from .report import Report
from .search import (
    EsseWitness,
    SearchBounds,
    SseChain,
    Status,
    search_chain,
    search_esse,
    verify_chain,
    verify_esse,
)
from .shift import (
    BlockCode,
    allowed_words,
    apply_code,
    conjugacy_code,
    periodic_word_count,
    verify_conjugacy_window,
)

__version__ = "0.1.0"
