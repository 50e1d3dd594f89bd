from .spline import (
    Partition,
    SplineSpace,
    ExtendedPartition,
    Atom,
    Grid,
    eval_cardinal_bspline,
    eval_bspline_knots,
    make_partition,
    partition_uplus,
    extended_partition,
    build_esep_basis,
    build_epkb_basis,
    build_basis,
    sample_atoms,
)
from .dictionary import (
    Dictionary,
    ScalingSystem,
    CertificationReport,
    FrameBounds,
    build_dictionary,
    union_decomposition,
    compute_scaling_system,
    eliminate_fine_atom,
    certify_span_equality,
    frame_bounds,
)
from .signals import SampledSignal, ChirpParams, gen_blocky, gen_chirp, metrics
from .pursuit import StopCriteria, PursuitState, project, oomp_select, backward_prune, approximate
from .config import RunConfig
from .config import predefined as predefined_presets
