"""Magnitude of finite positive definite metric spaces.

The magnitude of a finite metric space with positive definite zeta matrix
is computed three ways (weighting solve, Gram volume ratio, circumradius of
a similarity embedding).  The package also provides exact Gromov-Hausdorff
distances for small spaces, cluster types, and the counterexample families
along which magnitude fails to be continuous.
"""

from __future__ import annotations

from .core import (
    FiniteMetricSpace,
    MagnitudeReport,
    dumps,
    is_positive_definite,
    load,
    loads,
    magnitude_linalg,
    random_fpdms,
    validate_metric,
    zeta,
)
from .embedding import (
    CircumSphere,
    PointConfig,
    TriSimilarityReport,
    circumsphere,
    embed,
    hausdorff_distance,
    magnitude_from_radius,
    magnitude_from_volumes,
    nonflat_bound_check,
    phi,
    phi_inverse,
    recover_metric,
    tri_similarity_check,
    validate_embedding,
)
from .errors import FPDMSError
from .families import (
    FamilySpec,
    SweepRecord,
    expansion_audit,
    closed_form_audit,
    degeneracy_volume,
    family_limit_radius,
    family_points,
    family_sweep,
)
from .gh import (
    ClusterPartition,
    ClusterType,
    MapPair,
    Verdict,
    cluster_partition,
    cluster_type,
    gh_distance_exact,
    theorem_region,
    type_leq,
)
from .lemmas import add_point_rotation, amplify_type, push_apex_dilate

__version__ = "0.1.0"
