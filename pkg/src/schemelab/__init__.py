"""schemelab: a desk-scale laboratory for finite construction schemes."""

from .capture import (
    CaptureCertificate,
    CaptureSearch,
    DeltaSystemWitness,
    captured_set_levels,
    certify_capture,
    delta_system_root,
    find_captured_tuples,
    h_ideal_generator,
    is_captured,
    is_fully_captured,
    is_root_tail_tail,
    project,
    sq_bracket,
    sq_bracket_set,
)
from .finset import FinSet, set_below
from .gaps import (
    Pregap,
    SeparatingFunction,
    check_hausdorff_condition,
    check_interhausdorff,
    check_levelwise_even_odd,
    check_todorcevic_capture_laws,
    gap_table_csv,
    hausdorff_gap,
    is_biorthogonal,
    levelwise_diff,
    n_window,
    set_from_separating,
    todorcevic_restrict,
    validate_separating,
)
from .scheme import (
    TOP,
    Scheme,
    Violation,
    build_scheme,
    canonical_decomposition,
    closure,
    delta,
    norm,
    rho,
    rho_set,
    scheme_to_json,
    verify_axioms,
    xi,
)
from .typeseq import (
    LevelPartition,
    TypeSequence,
    enumerate_type_prefixes,
    goodness_report,
    make_type_prefix,
    partition_compatible_report,
    random_type_prefix,
)

__version__ = "0.1.0"
