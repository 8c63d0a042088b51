"""Keyword search over relational data graphs kept on disk as clusters."""

from ._core import (
    Clustering,
    Database,
    Graph,
    IngestError,
    KeywordIndex,
    NoAnswerError,
    Store,
    StoreError,
    build_index,
    cluster,
    estimate_memory,
    load_database,
    query,
    search,
    synth,
    tokenize,
    write_store,
)

__all__ = [
    "Clustering",
    "Database",
    "Graph",
    "IngestError",
    "KeywordIndex",
    "NoAnswerError",
    "Store",
    "StoreError",
    "build_index",
    "cluster",
    "estimate_memory",
    "load_database",
    "query",
    "search",
    "synth",
    "tokenize",
    "write_store",
]
