"""Exact decisions for Cuntz-Pimsner algebras of vector bundles from K-theory data."""

from __future__ import annotations

from .classify import (BundleClass, DecisionReport, SpaceModel, Verdict, count_algebras,
                       decide_embedding, decide_iso_pn, decide_iso_Tn, decide_isomorphism,
                       decide_line_bundle, decide_suspension, trivialization_test)
from .equivrel import (are_equivalent, brute_force_equivalent, canonical_representatives,
                       count_classes, lemma_c_decide, reduce_to_representative)
from .ringcore import RingElement, RingPresentation, validate
from .spaces import builtin

__version__ = "0.1.0"

__all__ = [
    "BundleClass", "DecisionReport", "SpaceModel", "Verdict", "count_algebras",
    "decide_embedding", "decide_iso_pn", "decide_iso_Tn", "decide_isomorphism",
    "decide_line_bundle", "decide_suspension", "trivialization_test",
    "are_equivalent", "brute_force_equivalent", "canonical_representatives",
    "count_classes", "lemma_c_decide", "reduce_to_representative",
    "RingElement", "RingPresentation", "validate", "builtin", "__version__",
]
