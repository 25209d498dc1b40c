"""Workbench for Orc orchestrations, feature models, and modal
transition systems: parse and execute Orc programs (one interleaving
or all of them), enumerate feature-model products, decide the
MTS product relation, and compile feature models into Orc.
"""

from .errors import BoundExceeded
from .feature_model import (
    AltGroup, Excludes, Feature, FeatureModel, ModelBuilder, Requires,
    UnknownFeature, Violation, enumerate_products, is_valid,
    product_count, validate,
)
from .mts import (
    ActionMismatch, ClauseFailure, Lts, Mts, ProductCheck,
    derive_products, export_dot, is_product, modality, underlying_lts,
)
from .orc_ast import (
    SIGNAL, STOP, Asymmetric, DefCall, Definition, Emit, Otherwise,
    Parallel, Pending, Program, Sequential, Signal, SiteCall, SiteSpec,
    Stop, Var, free_vars, render_value, substitute,
)
from .orc_parser import (
    ParseDiagnostic, ParseError, SourceSpan, format_diagnostic,
    parse_expr, parse_feature_model, parse_lts, parse_mts,
    parse_program, render_expr, render_feature_model, render_lts,
    render_mts, render_program,
)
from .orc_semantics import (
    Bounds, Call, Deterministic, ExecState, ExploredLts, Internal,
    PendingCall, Publish, Return, SeededRandom, Tick, Trace, event_label,
    explore, initial_state, is_halted, lts_view, publication_sequences,
    publications, run, step,
)
from .variability_encoding import (
    EncodingPlan, MissingTrigger, PlanMismatch, UnsupportedGroupSize,
    default_plan, demand_response_choice_program,
    demand_response_program, encode, encode_alternative,
)

__version__ = "0.1.0"
