"""Decision procedures for the provability logics of HA, PA and their completions."""
from .engine import Base, Countermodel, DecisionResult, EngineConfig, Extension, Verdict, decide_base
from .formula import Formula, ParseError, ResourceError, parse, to_text
from .kripke import FrameProperty, KripkeModel, ModelError, check_frame
from .registry import (
    LogicId, ProvLogicId, Unsupported, classify_formula, decide, decide_pl, parse_pl,
    reduction_trace, witness_substitution, is_boxdown_substitution,
)
from .translate import TranslationKind, translate

__all__ = [
    "Base", "Countermodel", "DecisionResult", "EngineConfig", "Extension", "Verdict", "decide_base",
    "Formula", "ParseError", "ResourceError", "parse", "to_text",
    "FrameProperty", "KripkeModel", "ModelError", "check_frame",
    "LogicId", "ProvLogicId", "Unsupported", "classify_formula", "decide", "decide_pl", "parse_pl",
    "reduction_trace", "witness_substitution", "is_boxdown_substitution",
    "TranslationKind", "translate",
]
