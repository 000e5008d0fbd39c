"""Cohomology of module triples on the group and Lie sides, and its transport."""
from .base import CohomologyGroup, HypothesisViolated, SizeBoundExceeded, hom_is_isomorphism
from .degree0 import coinvariant_span, h0, h0_co
from .group import (
    ExtensionGroup,
    GroupCochains,
    GroupExtensionData,
    baer_sum_group,
    cocycle_from_extension,
    extension_from_cocycle,
    h1_group,
    h2_group,
    h2_group_bruteforce,
    is_crossed_hom,
    split_cocycle,
)
from .lie import (
    IDENTITY_FAMILIES,
    LieCochains,
    LieExtension,
    baer_sum_lie,
    check_factor_system,
    h1_lie,
    h2_lie,
    h2_lie_bruteforce,
    is_derivation,
    lie_coboundary_pair,
    lie_ring_from_factor_system,
    tails_from_extension,
)
from .modext import ModuleExtension, baer_sum_module, module_extension_group, module_extension_lie
from .transport import CompareReport, baer_sum_classes, compare, in_scope, require, transport_along_morphism, transport_class


def h1(T):
    from ..triples import LieTriple

    return h1_lie(T) if isinstance(T, LieTriple) else h1_group(T)


def h2(T, **kw):
    from ..triples import LieTriple

    return h2_lie(T, **kw) if isinstance(T, LieTriple) else h2_group(T, **kw)
