"""
Weak extrinsic symmetric triples: derivations, central extensions,
automorphisms and classifier data.
"""

from app.services.weakext.automorphisms import (
    AutomorphismResult,
    assemble_automorphism,
    automorphism_check,
    automorphism_family,
)
from app.services.weakext.central import (
    CentralExtensionDatum,
    CentralExtensionResult,
    central_extension,
    is_full_extension,
)
from app.services.weakext.classifier import (
    ClassifierAction,
    ClassifierDatum,
    DecompositionResult,
    DecompositionWitness,
    act_on_classifier,
    check_witness,
    classify_omega,
    is_indecomposable_datum,
    pencil_normal_form,
    realize_classifier,
)
from app.services.weakext.derivations import DerivationSpace, derivation_space, out_and_h2

__all__ = [
    "AutomorphismResult",
    "assemble_automorphism",
    "automorphism_check",
    "automorphism_family",
    "CentralExtensionDatum",
    "CentralExtensionResult",
    "central_extension",
    "is_full_extension",
    "ClassifierAction",
    "ClassifierDatum",
    "DecompositionResult",
    "DecompositionWitness",
    "act_on_classifier",
    "check_witness",
    "classify_omega",
    "is_indecomposable_datum",
    "pencil_normal_form",
    "realize_classifier",
    "DerivationSpace",
    "derivation_space",
    "out_and_h2",
]
