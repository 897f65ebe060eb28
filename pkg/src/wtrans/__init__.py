"""Transformation calculus for W-type multipartite entangled states.

The package has three layers:

* params / localops / protocols: the symbolic calculus on weight vectors,
  single-party operation validation, measurement-operator synthesis,
  convertibility decisions, and distillation.
* statevec: an exact state-vector oracle that recomputes everything from
  amplitudes, plus parameter extraction from arbitrary states.
* service / cli: a small HTTP facade over the library and a command-line
  client that runs it in process by default.
"""

from .errors import (
    DimensionMismatchError,
    DomainError,
    InfeasibleError,
    InvalidEnsembleError,
    InvalidParamVectorError,
    InvalidStateError,
    MalformedProtocolError,
    NotWTypeError,
    NumericError,
    UnreachableTargetError,
    UsageError,
    WTransError,
)
from .localops import (
    KrausOp,
    OutcomeEnsemble,
    OutcomeSpec,
    ValidationReport,
    apply_kraus_symbolic,
    solve_phase_closure,
    synthesize_kraus,
    validate_ensemble,
)
from .params import (
    BIPARTITE,
    PRODUCT,
    TRULY_MULTIPARTITE,
    EntClass,
    ParamVector,
    canonical,
    classify,
    concurrence_party,
    concurrence_subset,
    equivalent,
    pair_product,
    pair_product_from_concurrences,
    w_vector,
    x0,
)
from .protocols import (
    CONTINUE,
    FAIL,
    SUCCESS,
    ConversionWitness,
    ProductTargetWarning,
    Protocol,
    ProtocolStep,
    can_convert,
    compile_deterministic_protocol,
    compile_distillation_protocol,
    distill_bound,
)
from .selftest import run_selftest
from .statevec import (
    ExecutionReport,
    LeafRecord,
    LocalBasis,
    PureState,
    apply_basis,
    apply_local,
    build_state,
    concurrence_from_state,
    extract_params,
    find_product_in_kernel,
    one_hot_index,
    reduced_density,
    run_protocol,
)

__version__ = "0.1.0"

__all__ = [
    "WTransError", "UsageError", "DomainError", "NumericError",
    "DimensionMismatchError", "InvalidParamVectorError", "InvalidStateError",
    "InvalidEnsembleError", "NotWTypeError", "UnreachableTargetError",
    "InfeasibleError", "MalformedProtocolError",
    "ParamVector", "EntClass", "PRODUCT", "BIPARTITE", "TRULY_MULTIPARTITE",
    "w_vector", "x0", "classify", "canonical", "equivalent",
    "concurrence_party", "concurrence_subset", "pair_product",
    "pair_product_from_concurrences",
    "KrausOp", "OutcomeSpec", "OutcomeEnsemble", "ValidationReport",
    "validate_ensemble", "solve_phase_closure", "synthesize_kraus",
    "apply_kraus_symbolic",
    "Protocol", "ProtocolStep", "ConversionWitness", "ProductTargetWarning",
    "CONTINUE", "SUCCESS", "FAIL", "can_convert",
    "compile_deterministic_protocol", "distill_bound",
    "compile_distillation_protocol",
    "PureState", "LocalBasis", "ExecutionReport", "LeafRecord",
    "build_state", "apply_local", "apply_basis", "reduced_density",
    "concurrence_from_state", "find_product_in_kernel", "extract_params",
    "run_protocol", "one_hot_index",
    "run_selftest",
    "__version__",
]
