"""Finite-scale twisted inverse-semigroup actions and crossed products.

The package builds finite inverse semigroups from partial bijections or
tables, computes their congruence and cross-section theory, verifies the
three flavors of twisted actions clause by clause, and assembles
finite-dimensional crossed products together with decomposition and
isomorphism certificates.
"""

from .actions import (
    ActionView,
    BusbySmithAction,
    GreenTwistedAction,
    TwistedPartialAction,
    action_from_cross_section,
    canonical_action,
    cross_section_equivalence_witness,
    exel_to_partial,
    exterior_perturb,
    green_canonical,
    green_to_busby,
    is_conjugacy,
    is_exterior_equivalence,
    partial_to_exel,
    verify_busby_smith,
    verify_green,
    verify_twisted_partial,
)
from .congruence import (
    Congruence,
    congruence_from_normal_clifford,
    enumerate_normal_clifford,
    is_congruence,
    is_idempotent_separating,
    is_normal_clifford,
    kernel_normal_system,
    normal_clifford_from_congruence,
    quotient,
)
from .cross_section import (
    find_order_preserving,
    ftilde_cross_section,
    is_order_preserving,
)
from .crossed import (
    CrossedProductAlgebra,
    crossed_product,
    decompose_busby,
    decompose_green,
    green_crossed_product,
    left_regular_representation,
    rep_from_algebra_rep,
    semigroup_cstar_reports,
    verify_covariant,
    verify_explicit_iso,
)
from .delta import (
    DeltaSemigroup,
    busby_roundtrip_action,
    busby_to_green_sampled,
    sample_twisted_partial_action,
    sample_unitary_family,
)
from .errors import (
    CapExceededError,
    InputError,
    NotClosedError,
    StructureError,
    TwistcrossError,
    VerificationRefusal,
)
from .exel import ExelElement, ExelSemigroup, embed, multiply, star, to_canonical_string
from .fdalgebra import (
    AlgebraElement,
    BasisIdeal,
    FdStarAlgebra,
    PartialStarAutomorphism,
    ad_automorphism,
    compose_autos,
    cstar_dimension,
    group_algebra,
    ideal_identity,
    identity_automorphism,
    is_unitary_multiplier,
    jacobson_radical,
    multimatrix_algebra,
    semigroup_algebra,
)
from .partial_bijection import PartialBijection, compose, format_pb, natural_leq, parse_pb
from .semigroup import (
    FiniteInverseSemigroup,
    adjoin_unit,
    cyclic_group,
    generate,
    generate_partial_bijections,
    idempotents,
    is_ftilde,
    max_group_image,
    natural_order,
    restrict,
    symmetric_inverse_monoid,
    verify_inverse_semigroup,
)

__version__ = "0.1.0"
