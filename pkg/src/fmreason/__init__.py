"""fmreason: backward failure-mode reasoning over dataflow system models.

Given a model of what a system computes and an observed deviation at one of
its outputs, derive the minimal Boolean expression over input/parameter
faults that can explain it, and cross-check every derived model against a
brute-force fault simulator.
"""

from .algebra import (
    And,
    Const,
    Direction,
    Expr,
    FALSE,
    Lit,
    Mode,
    Or,
    TRUE,
    any_mode,
    conj,
    direction_of_sign,
    disj,
    dnf_term_list,
    dual,
    eval_expr,
    invert,
    mode_of,
    normalize,
    simplify,
    to_dnf,
)
from .catalogue import (
    FailureScenario,
    Premise,
    cnf_model,
    dnf_model,
    koon_model,
    local_model,
    monotone_model,
    mul_certain_param,
    mul_single_fault,
    mul_value_dependent,
)
from .engine import (
    AnalysisResult,
    LoopBinding,
    TraceStep,
    backward_reason,
    break_loops,
    explain,
)
from .errors import (
    CatalogueError,
    DnfCapError,
    EngineError,
    FmrError,
    ImpactError,
    ModelFormatError,
    ModelValidationError,
    OracleError,
    TypeCompatibilityError,
    UnreachableEffectError,
    UnsupportedEffectError,
)
from .impact import ImpactQuery, baseline_from_model, compare_modes, impact
from .model import (
    Attrs,
    CauseMode,
    Component,
    Diagnostic,
    FeedbackEdge,
    Kind,
    Knowledge,
    KnowledgeContext,
    Sign,
    SystemModel,
    ValuePolicy,
    ValueType,
    Variable,
    detect_loops,
    parse_model,
    serialize,
    validate,
)
from .oracle import (
    FaultAssignment,
    GRID_A,
    GRID_B,
    GRID_C,
    SAMPLE_GRIDS,
    SampleGrid,
    TruthTable,
    Verdict,
    VerdictReport,
    render_truth_table,
    simulate,
    truth_table,
    verify_certain_cause,
    verify_minimum_conditions,
)
from ._kernels import BACKEND_NAME as KERNEL_BACKEND

__version__ = "0.1.0"
