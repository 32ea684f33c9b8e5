"""Generative models of slang word formation: blends, clippings,
reduplicatives."""

from ._core import (
    BlendBundle,
    ClipModel,
    MorphoforgeError,
    Phonologizer,
    RedupModel,
    apply_labels,
    encode_labels,
    levenshtein,
)

__all__ = [
    "BlendBundle",
    "ClipModel",
    "MorphoforgeError",
    "Phonologizer",
    "RedupModel",
    "apply_labels",
    "encode_labels",
    "levenshtein",
]
