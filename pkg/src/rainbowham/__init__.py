"""Rainbow Hamiltonian paths in collections of bipartite graphs."""
from .core import (
    BipartiteGraph,
    ExtremalCertificate,
    FamilyKind,
    GraphCollection,
    Kind,
    Side,
    TransversalWitness,
    ValidationReport,
    Vertex,
    X,
    Y,
    collection_min_degree,
    degree,
    min_degree,
    validate_witness,
)

__all__ = [
    "BipartiteGraph",
    "ExtremalCertificate",
    "FamilyKind",
    "GraphCollection",
    "Kind",
    "Side",
    "TransversalWitness",
    "ValidationReport",
    "Vertex",
    "X",
    "Y",
    "collection_min_degree",
    "degree",
    "min_degree",
    "validate_witness",
]
