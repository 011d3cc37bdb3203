"""Haplotype assembly by Riemannian trust-region optimization on the sphere.

The haplotype estimate is the sphere point minimizing a smoothed
negative-L1 read-consistency cost; the solver is a trust-region method
with truncated-CG subproblem solves, compared against an alternating
least-squares rank-one completion baseline on synthetic sweeps.
"""

from .altmin import AltMinConfig, AltMinResult, altmin_rank1
from .config_io import ExperimentConfig, parse_config, read_config
from .errors import (
    AntipodalError,
    BasePointMismatchError,
    CsvSchemaError,
    DegenerateInputError,
    DimensionMismatchError,
    HaprtrError,
    InstanceFormatError,
    NumericFailureError,
    ParameterError,
)
from .experiment import ExperimentRecord, run_experiment, run_trial, write_csv
from .geometry import (
    TangentVector,
    UnitVector,
    dist,
    exp_map,
    geodesic,
    inner,
    project_tangent,
    random_tangent,
    random_unit,
    retract,
    transport,
)
from .instance_io import format_instance, parse_instance, read_instance, write_instance
from .methods import METHODS, SolveOutcome, run_method, solve_with_altmin, solve_with_rtr
from .objective import (
    DEFAULT_EPSILON,
    DiagnosticConstants,
    HaplotypeObjective,
    ReadMatrix,
    cost,
    diagnostic_constants,
    euclidean_grad,
    hess_vec,
    masked_row_dot,
    riemannian_grad,
)
from .pipeline import (
    Haplotype,
    Instance,
    apply_sampling,
    decode,
    generate_instance,
    hd_ambiguous,
    mec,
    unrecoverable_sites,
)
from .plotting import plot_csv
from .trustregion import RtrConfig, RtrIteration, RtrTrace, rtr_minimize, solve_subproblem

__version__ = "0.1.0"
