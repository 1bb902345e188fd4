"""Prime-spectrum properties and Krull dimensions of k-algebra constructions."""

import os as _os

_corpus = _os.path.join(_os.path.dirname(__file__), "corpus")
if _os.path.isdir(_corpus):
    _os.environ.setdefault("SPECTRA_CORPUS_DIR", _corpus)

from ._core import (  # noqa: E402
    REPORT_SCHEMA,
    ContradictionError,
    ParseError,
    SpectraError,
    analyze,
    big_d,
    canonical,
    check_poset,
    delta,
    dim_tensor_af_general,
    dim_tensor_af_pair,
    dim_tensor_fields,
    heights,
    list_fixtures,
    rules,
    run_fixture,
    saturated_chain_lengths,
)

__all__ = [
    "REPORT_SCHEMA",
    "ContradictionError",
    "ParseError",
    "SpectraError",
    "analyze",
    "big_d",
    "canonical",
    "check_poset",
    "delta",
    "dim_tensor_af_general",
    "dim_tensor_af_pair",
    "dim_tensor_fields",
    "heights",
    "list_fixtures",
    "rules",
    "run_fixture",
    "saturated_chain_lengths",
]
