"""Weak monadic second-order logic over bounded-branching manifolds.

Submodules: `syntax` (AST and parser), `setform` (reduction to
set-variable-only form), `encoding` (assignments and their canonical
structure encodings), `atoms` (automata for the atomic formulas),
`compile` (formula-to-automaton compilation and decision procedures),
`lazy` (on-demand evaluation of compiled formulas), `modelcheck` (the
direct finite-structure evaluator), `from_automaton` (the reverse
automaton-to-formula encoding).
"""

from .syntax import (
    And,
    Eq,
    Exists,
    Forall,
    Iff,
    Imp,
    In,
    Not,
    Or,
    Pred,
    Sub,
    formula_to_sexp,
    free_vars,
    is_set_var,
    parse_formula,
)
from .encoding import Assignment, Encoding, Signature, decode, encode_assignment
from .setform import to_set_form
from .atoms import atom_automaton
from .modelcheck import model_check
from .compile import Compiled, compile_formula, decide_sentence, satisfiable
from .lazy import LazyCompiled, compile_lazy
from .from_automaton import automaton_to_formula

__all__ = [
    "And",
    "Eq",
    "Exists",
    "Forall",
    "Iff",
    "Imp",
    "In",
    "Not",
    "Or",
    "Pred",
    "Sub",
    "parse_formula",
    "formula_to_sexp",
    "free_vars",
    "is_set_var",
    "Assignment",
    "Encoding",
    "Signature",
    "encode_assignment",
    "decode",
    "to_set_form",
    "atom_automaton",
    "model_check",
    "Compiled",
    "compile_formula",
    "satisfiable",
    "decide_sentence",
    "LazyCompiled",
    "compile_lazy",
    "automaton_to_formula",
]
