"""Knowledge-graph-backed analytics assistant.

Captures users, intents, constraints, evaluation requirements, workflows and
feedback in a typed triple store, and anticipates the next user input either
through a generalization ladder of query templates or through link prediction
over trained knowledge-graph embeddings.
"""

from .store import (
    Filter,
    Graph,
    ParseError,
    Pattern,
    StoreError,
    Term,
    TermError,
    Triple,
    TripleError,
    Var,
    iri,
    lit,
    load_ntriples,
    save_ntriples,
)
from .schema import Schema, Violation, bootstrap_schema
from .profiling import DatasetProfile, ProfileError, annotate_profile, profile_file
from .synth import SynthConfig, corpus_stats, synth_dataset_profiles, synthesize

__all__ = [
    "DatasetProfile",
    "Filter",
    "Graph",
    "ParseError",
    "Pattern",
    "ProfileError",
    "Schema",
    "StoreError",
    "SynthConfig",
    "Term",
    "TermError",
    "Triple",
    "TripleError",
    "Var",
    "Violation",
    "annotate_profile",
    "bootstrap_schema",
    "corpus_stats",
    "iri",
    "lit",
    "load_ntriples",
    "profile_file",
    "save_ntriples",
    "synth_dataset_profiles",
    "synthesize",
]

__version__ = "0.1.0"
