"""Exact arithmetic in towers of real quadratic extensions."""

from .tower import (
    EmbeddingHandle,
    FieldElement,
    FieldTower,
    SignCertificate,
    adjoin_sqrt,
    arith,
    certified_sign,
    char_poly,
    enclose,
    galois_conjugate,
    is_algebraic_integer,
    is_square,
    make_base_field,
    rational_field,
    relative_norm,
    sign_count,
)

__all__ = [
    "EmbeddingHandle",
    "FieldElement",
    "FieldTower",
    "SignCertificate",
    "adjoin_sqrt",
    "arith",
    "certified_sign",
    "char_poly",
    "enclose",
    "galois_conjugate",
    "is_algebraic_integer",
    "is_square",
    "make_base_field",
    "rational_field",
    "relative_norm",
    "sign_count",
]
