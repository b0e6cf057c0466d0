"""Frame correspondents of modal formulae by second-order quantifier elimination.

Typical use::

    from sqema import parse_formula, run, verify_correspondence
    phi = parse_formula("dia box p -> box dia p")
    result = run(phi)
    print(result.local_fo)
    print(verify_correspondence(phi, result.local_fo, max_n=3))
"""
from .classify import ClassReport, DependencyDigraph, dependency_digraph, is_box_formula, \
    is_monadic_inductive, is_monadic_regular, is_sahlqvist
from .engine import EngineConfig, Equation, EquationSystem, FailureReason, Rule, SqemaResult, \
    TraceStep, run
from .fol import parse_fo, simplify_fo
from .formula import ClosureClass, ParseError, Polarity, closure_class, distribute_to_disjuncts, \
    is_pure, parse_formula, polarity_of, substitute, to_nnf
from .generate import FormulaClass, SizeBounds, gen_formula, random_modal
from .oracle import CorrespondenceReport, KripkeFrame, KripkeModel, enumerate_frames, eval_fo, \
    eval_modal, fo_equivalent, frame_valid_at, globally_satisfiable, verify_correspondence
from .simplify import simplify_aux
from .translation import VariablePool, correspondent_from_pure, standard_translation

__version__ = "0.1.0"

__all__ = [
    "ClassReport", "DependencyDigraph", "dependency_digraph", "is_box_formula",
    "is_monadic_inductive", "is_monadic_regular", "is_sahlqvist",
    "EngineConfig", "Equation", "EquationSystem", "FailureReason", "Rule",
    "SqemaResult", "TraceStep", "run", "parse_fo", "simplify_fo",
    "ClosureClass", "ParseError", "Polarity", "closure_class",
    "distribute_to_disjuncts", "is_pure", "parse_formula", "polarity_of",
    "substitute", "to_nnf", "FormulaClass", "SizeBounds", "gen_formula",
    "random_modal", "CorrespondenceReport", "KripkeFrame", "KripkeModel",
    "enumerate_frames", "eval_fo", "eval_modal", "frame_valid_at",
    "verify_correspondence", "fo_equivalent", "globally_satisfiable", "simplify_aux", "VariablePool",
    "correspondent_from_pure", "standard_translation",
]
