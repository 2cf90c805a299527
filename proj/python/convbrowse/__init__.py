"""Conversational browsing over tabular catalogs."""

from ._convbrowse import (
    Catalog,
    ConfigurationError,
    ContractError,
    Error,
    IngestionError,
    ProtocolError,
    SearchIndex,
    Session,
    UnknownEntityError,
    UnrecognizedInputError,
    brute_force_min_turns,
    generate_synthetic_catalog,
    simulate,
    sweep,
    tokenize,
)

__all__ = [
    "Catalog",
    "ConfigurationError",
    "ContractError",
    "Error",
    "IngestionError",
    "ProtocolError",
    "SearchIndex",
    "Session",
    "UnknownEntityError",
    "UnrecognizedInputError",
    "brute_force_min_turns",
    "generate_synthetic_catalog",
    "simulate",
    "sweep",
    "tokenize",
]
