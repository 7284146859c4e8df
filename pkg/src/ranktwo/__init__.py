"""Exact-arithmetic toolkit for rank-two semifield spread sets of order q^6
and the linear sets they cut out in PG(3, q^3).

The usual flow: build a field tower with :func:`get_tower`, construct a
spread set from :mod:`ranktwo.families`, then ask for its linear set,
nuclei, and :func:`classify` report.  The packaged claim drivers live in
:mod:`ranktwo.checks`; ``python -m ranktwo.cli`` (or the ``ranktwo``
script) exposes everything from the shell.
"""

from ._version import __version__
from .checks import CLAIMS, verify_claim
from .classify import (
    KNOWN_SIGNATURES,
    ClassificationReport,
    classify,
    d_a_class_floor,
    find_weight5_plane,
    norms_frobenius_linked,
    signature_is_known,
)
from .errors import (
    CacheError,
    DomainError,
    FieldParameterError,
    ParameterError,
    RankTwoError,
    StructureError,
)
from .families import (
    d_a_transversals,
    d_ab_axis_lines,
    d_ab_transversals,
    lambda_bar,
    make_canonical,
    make_d_a,
    make_d_ab,
    make_f4a,
    make_s1,
    make_s2,
    valid_d_a_params,
    valid_d_ab_params,
)
from .field import FieldTower, build_tower, cached_tower, get_tower
from .linset import LinearSet, Pseudoregulus, build_pseudoregulus_linearset
from .spread import NucleiProfile, SpreadSet

__all__ = [
    "__version__",
    "CLAIMS",
    "CacheError",
    "ClassificationReport",
    "DomainError",
    "FieldParameterError",
    "FieldTower",
    "KNOWN_SIGNATURES",
    "LinearSet",
    "NucleiProfile",
    "ParameterError",
    "Pseudoregulus",
    "RankTwoError",
    "SpreadSet",
    "StructureError",
    "build_pseudoregulus_linearset",
    "build_tower",
    "cached_tower",
    "classify",
    "d_a_class_floor",
    "d_a_transversals",
    "d_ab_axis_lines",
    "d_ab_transversals",
    "find_weight5_plane",
    "get_tower",
    "lambda_bar",
    "make_canonical",
    "make_d_a",
    "make_d_ab",
    "make_f4a",
    "make_s1",
    "make_s2",
    "norms_frobenius_linked",
    "signature_is_known",
    "valid_d_a_params",
    "valid_d_ab_params",
    "verify_claim",
]
