"""Exact computation of the mass stratification of supersingular principally
polarised abelian threefolds: finite field towers, curve point enumeration,
closed-form masses, reduction-mod-p group oracles and automorphism groups.
"""

__version__ = "0.1.0"

from .fields import (  # noqa: F401
    FieldCtx,
    FieldElem,
    element_degree,
    frobenius,
    make_field,
    nth_roots,
    primitive_element,
)
