"""Geodesic languages of finitely generated groups over symmetric generating
sets, piecewise-excluding verdicts with checkable certificates, and the
reproduction drivers for the constructions built on them."""

__version__ = "0.1.0"

from .words import (
    Alphabet,
    ForbiddenSet,
    GeolangError,
    Language,
    Letter,
    avoid_language,
    deletion_neighbors,
    format_word,
    invert_word,
    is_subsequence,
    minimal_forbidden_factors,
    minimal_forbidden_subsequences,
    parse_word,
)
from .groups import (
    BS12Engine,
    CapExceeded,
    ExtensionEngine,
    Fingerprint,
    FiniteGroupTable,
    GroupEngine,
    Presentation,
    ProductEngine,
    TableEngine,
    ZmSemidirectEngine,
    ZnC2Engine,
    check_homomorphism,
    coset_enumerate,
    direct_product,
    evaluate,
    fingerprint,
    presentation_engine,
    rho_normal_form,
)
from .geodesics import (
    DistanceMap,
    GenSet,
    GeodesicLanguage,
    ResourceCap,
    ball,
    geodesic_language,
    is_geodesic,
    validate_genset,
)
from .classify import (
    Inconclusive,
    NotPE,
    PE,
    PEVerdict,
    not_pe_from_conjugation,
    pe_check,
    pe_check_bounded,
)
from .witnesses import (
    QuotientSpec,
    build_quotient_spec,
    extension_genset,
    lift_witness,
    q8_survey,
    quotient_family_witness,
    table1_report,
    znc2_witness,
)

__all__ = [name for name in dir() if not name.startswith("_")]
