"""Formula-to-automaton compilation by structural induction.

Atoms come from `atoms`; conjunction and disjunction align variable sets
by cylindrification and use the product/sum constructions; negation is
the relativized complement against the canonical-structure universe;
existential set quantification is alphabet projection followed by
padding normalization (a witness may live in padding the input structure
does not carry, so leaf rules gain pad-completed variants); universal
quantification dualizes.  First-order syntax is eliminated up front by
the set-form reduction.

Non-elementary blowup is intrinsic; constructions are guarded and raise
`ExplosionGuard` naming the offending subformula.
"""

from __future__ import annotations

from dataclasses import dataclass

from ..automata import (
    Automaton,
    accepts,
    complement,
    cylindrify,
    intersect,
    is_empty,
    powerset_alphabet,
    project,
    trim,
    union,
)
from ..errors import ExplosionGuard
from ..limits import DEFAULT_GUARD
from ..manifold import LabeledTM, complete, empty_pattern
from .atoms import atom_automaton
from .encoding import (
    Assignment,
    Encoding,
    Signature,
    canonical_universe,
    decode,
    encode_assignment,
)
from .setform import to_set_form_with_map
from .syntax import (
    And,
    Exists,
    Forall,
    Iff,
    Imp,
    Not,
    Or,
    Pred,
    Sub,
    formula_to_sexp,
    free_vars,
)
from .. import sexpr

__all__ = [
    "Compiled",
    "compile_formula",
    "normalize_padding",
    "satisfiable",
    "decide_sentence",
]


@dataclass(frozen=True)
class Compiled:
    """A compiled formula: automaton over variable-set labels + acceptance."""

    automaton: Automaton
    accepting: frozenset
    variables: tuple
    signature: Signature

    def accepts_encoding(self, encoding):
        return accepts(self.automaton, self.accepting, encoding.structure)

    def accepts_assignment(self, assignment):
        enc = encode_assignment(assignment, self.signature, self.variables)
        return self.accepts_encoding(enc)


def compile_formula(phi, sig, guard=None):
    """Compile to an automaton over the powerset of phi's free variables."""
    guard = guard or DEFAULT_GUARD
    psi, renaming = to_set_form_with_map(phi)
    aut, acc, variables = _compile_set(psi, sig, guard, {})
    if renaming:
        back = {v: k for k, v in renaming.items()}
        target_vars = tuple(sorted(back.get(v, v) for v in variables))
        big = powerset_alphabet(target_vars)
        pi = {
            sym: frozenset(back.get(v, v) for v in sym)
            for sym in aut.alphabet.symbols
        }
        aut = project(pi, aut, target=big)
        variables = target_vars
    return Compiled(aut, acc, variables, sig)


def _compile_set(f, sig, guard, memo):
    key = (f, sig)
    hit = memo.get(key)
    if hit is not None:
        return hit
    result = _compile_raw(f, sig, guard, memo)
    memo[key] = result
    return result


def _align(parts, variables, sig):
    big = powerset_alphabet(variables)
    out = []
    for aut, acc, own in parts:
        if own == variables:
            out.append((aut, acc))
        else:
            keep = set(own)
            pi = {sym: frozenset(sym & keep) for sym in big.symbols}
            out.append((cylindrify(pi, aut, big), acc))
    return out


def _compile_raw(f, sig, guard, memo):
    if isinstance(f, (Sub, Pred)):
        variables = tuple(sorted(free_vars(f)))
        aut, acc = atom_automaton(f, variables, sig)
        return aut, acc, variables
    if isinstance(f, And) or isinstance(f, Or):
        parts = [_compile_set(p, sig, guard, memo) for p in f.parts]
        variables = tuple(sorted(set().union(*(set(v) for _, _, v in parts))))
        aligned = _align(parts, variables, sig)
        aut, acc = aligned[0]
        combine = intersect if isinstance(f, And) else union
        for nxt, nxt_acc in aligned[1:]:
            aut, acc = combine(aut, acc, nxt, nxt_acc)
            _check_size(aut, guard, f)
        aut, acc = trim(aut, acc)
        return aut, acc, variables
    if isinstance(f, Imp):
        return _compile_set(Or((Not(f.left), f.right)), sig, guard, memo)
    if isinstance(f, Iff):
        both = And((Imp(f.left, f.right), Imp(f.right, f.left)))
        return _compile_set(both, sig, guard, memo)
    if isinstance(f, Not):
        aut, acc, variables = _compile_set(f.body, sig, guard, memo)
        universe = canonical_universe(variables, sig)
        try:
            aut, acc = complement(aut, acc, universe=universe, guard=guard)
        except ExplosionGuard as e:
            raise ExplosionGuard(e.estimate, e.limit, _describe(f)) from None
        aut, acc = trim(aut, acc)
        return aut, acc, variables
    if isinstance(f, Exists):
        aut, acc, variables = _compile_set(f.body, sig, guard, memo)
        if f.var not in variables:
            return aut, acc, variables
        remaining = tuple(v for v in variables if v != f.var)
        small = powerset_alphabet(remaining)
        pi = {sym: frozenset(sym - {f.var}) for sym in aut.alphabet.symbols}
        aut = project(pi, aut, target=small)
        aut = normalize_padding(aut, sig)
        aut, acc = trim(aut, acc)
        return aut, acc, remaining
    if isinstance(f, Forall):
        return _compile_set(Not(Exists(f.var, Not(f.body))), sig, guard, memo)
    raise TypeError(f"not a set-form formula: {f!r}")


def _check_size(aut, guard, f):
    if len(aut.states) > guard.max_states:
        raise ExplosionGuard(len(aut.states), guard.max_states, _describe(f))


def _describe(f):
    text = sexpr.unparse(formula_to_sexp(f))
    return text if len(text) <= 200 else text[:200] + "..."


def normalize_padding(a, sig):
    """Close a projected automaton under growth of blank canonical padding.

    A state is pad-reachable when some all-blank canonical structure can
    carry it at the root; any rule whose pattern is the complete shape
    labeled by pad-reachable states then gains an empty-pattern twin, so
    leaves may stand in for padding that a quantifier witness would need.
    """
    blank = frozenset()
    if blank not in a.alphabet:
        return a
    blank_bit = 1 << a.alphabet.index[blank]
    pad_shape = complete(a.dimension - 1, sig.n)
    pad = set()
    changed = True
    while changed:
        changed = False
        for pattern, per in a.groups.items():
            if pattern.shape.is_empty():
                grows = True
            elif pattern.shape.nodes == pad_shape.nodes:
                grows = all(v in pad for _, v in pattern.items)
            else:
                grows = False
            if grows:
                for q, mask in per.items():
                    if mask & blank_bit and q not in pad:
                        pad.add(q)
                        changed = True
    eps = empty_pattern(a.dimension - 1)
    grouped = {p: dict(per) for p, per in a.groups.items()}
    extra = {}
    for pattern, per in a.groups.items():
        if pattern.shape.nodes == pad_shape.nodes and all(
            v in pad for _, v in pattern.items
        ):
            for q, mask in per.items():
                extra[q] = extra.get(q, 0) | mask
    if extra:
        dest = grouped.setdefault(eps, {})
        for q, mask in extra.items():
            dest[q] = dest.get(q, 0) | mask
    return Automaton.of(a.dimension, a.n, a.alphabet, a.states, grouped)


def satisfiable(phi, sig, guard=None):
    """Non-emptiness of the compiled automaton, with a decoded witness."""
    compiled = compile_formula(phi, sig, guard=guard)
    empty, structure = is_empty(compiled.automaton, compiled.accepting)
    if empty:
        return False, None
    witness = decode(Encoding(structure, compiled.variables))
    return True, witness


def decide_sentence(phi, sig, guard=None):
    """Truth of a closed formula, read off the padded single-root encoding."""
    if free_vars(phi):
        raise ValueError("decide_sentence expects a sentence (no free variables)")
    compiled = compile_formula(phi, sig, guard=guard)
    enc = encode_assignment(Assignment.of(), sig, compiled.variables)
    return compiled.accepts_encoding(enc)
