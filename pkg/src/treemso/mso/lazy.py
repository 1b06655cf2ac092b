"""On-demand evaluation of compiled formulas.

The explicit compiler materializes subset automata whose transition
tables enumerate state labelings of the complete padding shape; at
branching bounds above 2 that table is astronomically large even when
each individual membership query is cheap.  This evaluator keeps the
compiled form symbolic: every connective is a node that can transition
a composite state descriptor across one structure node, so acceptance of
a given encoding needs a single bottom-up pass and nothing is ever
materialized.

Descriptors: atoms carry their achievable-state set; conjunction and
disjunction carry tuples of child descriptors (runs of independent
automata pair freely); negation shares its child's descriptor and flips
acceptance; existential quantification carries the set of child
descriptors achievable over labelings of the erased variables below the
node -- the one place where erased choices correlate across components.
Quantifiers whose variables are subset-guarded by an enclosing set can
skip padding virtualization; unguarded ones take their padding states
from a fixpoint over all-blank structures.
"""

from __future__ import annotations

import itertools

from ..manifold import LabeledTM, children, complete, empty, Address
from .atoms import atom_automaton
from .encoding import Signature, encode_assignment, is_canonical
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
    free_vars,
    is_set_var,
)

__all__ = ["LazyCompiled", "compile_lazy"]


class _Atom:
    def __init__(self, formula, sig):
        self.own = frozenset(free_vars(formula))
        self.aut, self.acc = atom_automaton(formula, sorted(self.own), sig)
        self._index = self.aut.alphabet.index

    def step(self, sigma, shape, kids):
        si = self._index[frozenset(sigma & self.own)]
        found = set()
        for pattern, per_state in self.aut.by_shape.get(shape, ()):
            labels = pattern.labels
            if all(labels[w] in kids[w] for w in labels):
                for q, mask in per_state.items():
                    if mask >> si & 1:
                        found.add(q)
        return frozenset(found)

    def accept(self, desc):
        return bool(desc & self.acc)


class _Junction:
    def __init__(self, parts, conjunctive):
        self.parts = parts
        self.conjunctive = conjunctive

    def step(self, sigma, shape, kids):
        slots = tuple(kids)
        out = []
        for i, part in enumerate(self.parts):
            sliced = {w: kids[w][i] for w in slots}
            out.append(part.step(sigma, shape, sliced))
        return tuple(out)

    def accept(self, desc):
        verdicts = (p.accept(d) for p, d in zip(self.parts, desc))
        return all(verdicts) if self.conjunctive else any(verdicts)


class _Negation:
    def __init__(self, part):
        self.part = part

    def step(self, sigma, shape, kids):
        return self.part.step(sigma, shape, kids)

    def accept(self, desc):
        return not self.part.accept(desc)


class _Projection:
    """One flattened block of existential set quantifiers."""

    def __init__(self, dropped, part, guarded, sig):
        self.dropped = frozenset(dropped)
        self.part = part
        self.guarded = guarded
        self.sig = sig
        self._extensions = [
            frozenset(c)
            for r in range(len(self.dropped) + 1)
            for c in itertools.combinations(sorted(self.dropped), r)
        ]
        self._memo = {}
        self._virtual = {}
        self._pads = None

    def step(self, sigma, shape, kids):
        key = (sigma, shape, tuple(sorted(kids.items(), key=lambda kv: kv[0].sort_key())))
        hit = self._memo.get(key)
        if hit is not None:
            return hit
        slots = shape.sorted_nodes
        found = set()
        for ext in self._extensions:
            lifted = sigma | ext
            for choice in itertools.product(*(sorted_kids(kids[w]) for w in slots)):
                found.add(self.part.step(lifted, shape, dict(zip(slots, choice))))
        if shape.is_empty() and not self.guarded:
            for ext in self._extensions:
                found |= self._virtual_states(sigma | ext)
        result = frozenset(found)
        self._memo[key] = result
        return result

    def _pad_descriptors(self):
        """Child descriptors achievable on all-blank canonical structures."""
        if self._pads is not None:
            return self._pads
        shape = complete(self.sig.d - 1, self.sig.n)
        eps = empty(self.sig.d - 1)
        pads = set()
        frontier = {
            self.part.step(ext, eps, {}) for ext in self._extensions
        }
        while frontier - pads:
            pads |= frontier
            frontier = set()
            slots = shape.sorted_nodes
            for labeling in itertools.product(id_sort(pads), repeat=len(slots)):
                for ext in self._extensions:
                    frontier.add(self.part.step(ext, shape, dict(zip(slots, labeling))))
        self._pads = pads
        return pads

    def _virtual_states(self, lifted):
        hit = self._virtual.get(lifted)
        if hit is not None:
            return hit
        pads = self._pad_descriptors()
        shape = complete(self.sig.d - 1, self.sig.n)
        slots = shape.sorted_nodes
        found = set()
        for labeling in itertools.product(id_sort(pads), repeat=len(slots)):
            found.add(self.part.step(lifted, shape, dict(zip(slots, labeling))))
        result = frozenset(found)
        self._virtual[lifted] = result
        return result

    def accept(self, desc):
        return any(self.part.accept(d) for d in desc)


def sorted_kids(kidset):
    return id_sort(kidset)


def id_sort(values):
    return sorted(values, key=repr)


def _conjuncts(f):
    return f.parts if isinstance(f, And) else (f,)


def _var_guarded(var, body):
    """A subset guard grounds the variable inside an enclosing set."""
    for part in _conjuncts(body):
        if isinstance(part, Sub) and part.a == var and part.b != var:
            return True
    if isinstance(body, Not) and isinstance(body.body, Imp):
        for part in _conjuncts(body.body.left):
            if isinstance(part, Sub) and part.a == var and part.b != var:
                return True
    return False


def _build(f, sig):
    if isinstance(f, (Sub, Pred)):
        return _Atom(f, sig)
    if isinstance(f, And):
        return _Junction([_build(p, sig) for p in f.parts], True)
    if isinstance(f, Or):
        return _Junction([_build(p, sig) for p in f.parts], False)
    if isinstance(f, Imp):
        return _build(Or((Not(f.left), f.right)), sig)
    if isinstance(f, Iff):
        return _build(And((Imp(f.left, f.right), Imp(f.right, f.left))), sig)
    if isinstance(f, Not):
        return _Negation(_build(f.body, sig))
    if isinstance(f, Forall):
        return _build(Not(Exists(f.var, Not(f.body))), sig)
    if isinstance(f, Exists):
        dropped = []
        body = f
        guarded = True
        while isinstance(body, Exists):
            if body.var in free_vars(body.body):
                dropped.append(body.var)
                guarded = guarded and _var_guarded(body.var, body.body)
            body = body.body
        if not dropped:
            return _build(body, sig)
        return _Projection(dropped, _build(body, sig), guarded, sig)
    raise TypeError(f"not a set-form formula: {f!r}")


class LazyCompiled:
    """Compiled form of a formula evaluated per structure, never expanded."""

    def __init__(self, phi, sig):
        self.signature = sig
        psi, renaming = to_set_form_with_map(phi)
        self.renaming = renaming
        self.set_variables = tuple(sorted(free_vars(psi)))
        back = {v: k for k, v in renaming.items()}
        self.variables = tuple(sorted(back.get(v, v) for v in self.set_variables))
        self.root = _build(psi, sig)

    def accepts_encoding(self, encoding):
        t = encoding.structure
        forward = dict(self.renaming)
        relabeled = t.relabel(lambda s: frozenset(forward.get(v, v) for v in s))
        return self._run(relabeled)

    def accepts_assignment(self, assignment):
        enc = encode_assignment(assignment, self.signature, self.variables)
        return self.accepts_encoding(enc)

    def _run(self, t):
        if t.shape.is_empty():
            return False
        if not is_canonical(t, self.signature):
            return False
        d = t.dimension
        desc = {}
        for s in sorted(t.shape.nodes, key=lambda x: -x.length):
            ch = children(t.shape, s)
            if d == 1:
                pairs = [(w, Address(1, s.path + 1)) for w in ch.nodes]
            else:
                pairs = [(w, Address(d, s.path + (w.path,))) for w in ch.nodes]
            kids = {w: desc[c] for w, c in pairs}
            desc[s] = self.root.step(t.label(s), ch, kids)
        return self.root.accept(desc[t.shape.root])


def compile_lazy(phi, sig):
    return LazyCompiled(phi, sig)
