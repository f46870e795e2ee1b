"""Generalized concatenated codes for PUF key generation."""

from ._core import (
    Codec,
    ParseError,
    UsageError,
    baseline_perr,
    clopper_pearson,
    codec_ids,
    derive_key,
    recover,
    simulate,
    sketch,
)

__all__ = [
    "Codec",
    "ParseError",
    "UsageError",
    "baseline_perr",
    "clopper_pearson",
    "codec_ids",
    "derive_key",
    "recover",
    "simulate",
    "sketch",
]
