"""Neutrosophic metric spaces: norms, constructions, axiom checks, topology and sequences."""

__version__ = "0.1.0"

from .errors import (
    Finding,
    KernelError,
    NmsError,
    NoSolutionError,
    NotApplicableError,
    PreconditionError,
    SearchFailure,
    UniverseError,
    UsageError,
    VerificationError,
)
from .norms import (
    NormKernel,
    NormPair,
    UnitValue,
    apply_tconorm,
    apply_tnorm,
    certify,
    diagonal_witness,
    get_kernel,
    tconorm_residual,
    tnorm_residual,
    verify_norm_axioms,
)
from .snn import SNN, snn_add, snn_included, snn_multiply, snn_power, snn_scale
from .space import (
    DegreesTriple,
    FiniteUniverse,
    NaturalsUniverse,
    NmsSpace,
    RealUniverse,
    evaluate,
    naturals_example,
    real_line,
    standard_from_metric,
    tabulated,
)
from .axioms import check_axioms, find_counterexample, replay_witness, witness_for
from .report import AxiomReport, Witness
