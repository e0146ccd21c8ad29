"""Characteristic and hyperinvariant subspaces of nilpotent maps over GF(2)."""

from .classify import (
    AT_TOP,
    ChNotHinvEntry,
    ClassificationReport,
    EGSplit,
    ShodaWitness,
    baer_normal_form,
    check_decomposition,
    classification_report,
    classify_no_unrepeated,
    classify_two_generator,
    classify_two_unrepeated,
    construct_k_unrepeated,
    construct_thm12,
    extend_from_E,
    shoda,
    split_EG,
)
from .commutant import (
    aut_generators,
    characteristic_hull,
    endo_basis,
    enumerate_aut,
    generated_group,
    is_characteristic,
    is_hyperinvariant,
    is_invariant,
    largest_hyperinvariant_inside,
    orbit,
)
from .errors import (
    BudgetExceeded,
    CharspaceError,
    ConstraintViolation,
    MoreThanTwoUnrepeated,
    OrbitTooLarge,
    PreconditionError,
)
from .gf2la import BitMatrix, DimensionMismatch, Subspace
from .hinv_lattice import count_hinv, hinv_subspaces, lattice_tuples, w_subspace
from .nilmod import (
    INFINITY,
    NEG_INFINITY,
    ModuleSpace,
    SegreChar,
    build_module,
    exponent,
    height,
    indicator,
)

__version__ = "0.1.0"
