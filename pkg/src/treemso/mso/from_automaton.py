"""Describing an automaton's language inside the logic.

The generated formula speaks about a domain set, one set per alphabet
symbol and (existentially hidden, domain-guarded) one set per state:
every domain node must be licensed by some rule, each rule's licensing
clause exhaustively inventories the node's child structure through the
predecessor relations, and the root must carry an accepting state.

Helpers build the two automata used to check the round trip: the lift of
a subject automaton to canonical encodings of its induced assignments,
and the recognizer of well-formed induced encodings.
"""

from __future__ import annotations

from ..automata import Automaton, powerset_alphabet, trim, pattern_shapes
from ..manifold import LabeledTM, complete, empty_pattern, pred
from .encoding import Assignment, Signature
from .syntax import And, Eq, Exists, Forall, Iff, Imp, In, Not, Or, Pred, Sub, conj, disj

__all__ = [
    "automaton_to_formula",
    "domain_var",
    "symbol_var",
    "state_var",
    "induced_assignment",
    "lifted_encoding_automaton",
    "proper_encoding_automaton",
]

DOMAIN = "XT"


def domain_var():
    return DOMAIN


def symbol_var(alphabet, symbol):
    return f"Xs{alphabet.index[symbol]}"


def state_var(index):
    return f"Xq{index}"


def _false(x):
    return Not(Eq(x, x))


def _guarded_exists(var, guard, body):
    return Exists(var, And((guard, body)))


def _succ_clause(x, y):
    """Immediate successor at dimension 1, defined from the literal order."""
    mid = And((In(DOMAIN, "u"), Pred(1, x, "u"), Pred(1, "u", y)))
    return And((Pred(1, x, y), Not(Exists("u", mid))))


def _license(a, rule_symbol, rule_state, pattern, state_names):
    """Clause satisfied at x exactly when this rule licenses x's assignment."""
    d = a.dimension
    sym_atom = In(symbol_var(a.alphabet, rule_symbol), "x")
    state_atom = In(state_names[rule_state], "x")
    slots = pattern.shape.sorted_nodes
    if not slots:
        leaf = Not(
            Exists("y", And((In(DOMAIN, "y"), Pred(d, "x", "y"))))
        )
        return And((sym_atom, state_atom, leaf))
    z = {w: f"z{k + 1}" for k, w in enumerate(slots)}
    clauses = []
    member = disj(tuple(Eq("y", z[w]) for w in slots))
    if d == 1:
        clauses.append(Iff(_succ_clause("x", "y"), member))
    else:
        clauses.append(Iff(Pred(d, "x", "y"), member))
        for rel in range(1, d):
            for w in slots:
                related = tuple(Eq("y", z[v]) for v in slots if pred(rel, w, v))
                left = Pred(rel, z[w], "y")
                clauses.append(Iff(left, disj(related)) if related else Not(left))
    inventory = Forall("y", Imp(In(DOMAIN, "y"), conj(tuple(clauses))))
    body_parts = [sym_atom, state_atom]
    body_parts.extend(In(state_names[pattern.labels[w]], z[w]) for w in slots)
    body_parts.append(inventory)
    body = conj(tuple(body_parts))
    for w in reversed(slots):
        body = _guarded_exists(z[w], In(DOMAIN, z[w]), body)
    return body


def automaton_to_formula(a, accepting):
    """A formula over domain/symbol sets equivalent to acceptance.

    States are hidden by existential set variables guarded to the domain;
    useless rules are trimmed first to keep the disjunction small.
    """
    a, accepting = trim(a, accepting)
    ordered_states = sorted(a.states, key=repr)
    state_names = {q: state_var(k) for k, q in enumerate(ordered_states)}
    licenses = [
        _license(a, symbol, q, pattern, state_names)
        for symbol, q, pattern in a.rules()
    ]
    licensed = disj(tuple(licenses)) if licenses else _false("x")
    root = Not(Exists("p", And((In(DOMAIN, "p"), Pred(a.dimension, "p", "x")))))
    accept = (
        disj(tuple(In(state_names[q], "x") for q in sorted(accepting, key=repr)))
        if accepting
        else _false("x")
    )
    per_node = And((licensed, Imp(root, accept)))
    body = Forall("x", Imp(In(DOMAIN, "x"), per_node))
    for q in reversed(ordered_states):
        body = Exists(state_names[q], And((Sub(state_names[q], DOMAIN), body)))
    return body


def induced_assignment(a, t):
    """The assignment a labeled structure induces for the formula's sets."""
    sets = {DOMAIN: frozenset(t.shape.nodes)}
    for symbol in a.alphabet.symbols:
        sets[symbol_var(a.alphabet, symbol)] = frozenset(
            addr for addr, v in t.items if v == symbol
        )
    return Assignment.of(sets=sets)


def encoding_variables(a):
    return tuple(sorted([DOMAIN] + [symbol_var(a.alphabet, s) for s in a.alphabet.symbols]))


PAD = "pad"


def lifted_encoding_automaton(a, accepting, sig):
    """Automaton accepting the canonical encodings of induced assignments
    of exactly the structures `a` accepts (with any padding extent)."""
    variables = encoding_variables(a)
    alphabet = powerset_alphabet(variables)
    pad_shape = complete(a.dimension - 1, sig.n)
    eps = empty_pattern(a.dimension - 1)
    all_pad = LabeledTM.of(pad_shape, {w: PAD for w in pad_shape.nodes})
    blank = frozenset()
    rules = [(blank, PAD, eps), (blank, PAD, all_pad)]
    for symbol, q, pattern in a.rules():
        sym = frozenset({DOMAIN, symbol_var(a.alphabet, symbol)})
        lifted = LabeledTM.of(
            pad_shape,
            {
                w: (("st", pattern.labels[w]) if w in pattern.shape.nodes else PAD)
                for w in pad_shape.nodes
            },
        )
        rules.append((sym, ("st", q), lifted))
        if pattern.shape.is_empty():
            rules.append((sym, ("st", q), eps))
    states = {PAD} | {("st", q) for q in a.states}
    aut = Automaton.of(a.dimension, sig.n, alphabet, states, rules)
    return aut, frozenset(("st", q) for q in accepting)


def proper_encoding_automaton(a, sig):
    """Recognizer of well-formed induced encodings: domain nodes carry the
    domain bit plus exactly one symbol bit, padding is blank, and the
    domain part of every child structure is hereditarily closed."""
    variables = encoding_variables(a)
    alphabet = powerset_alphabet(variables)
    pad_shape = complete(a.dimension - 1, sig.n)
    eps = empty_pattern(a.dimension - 1)
    node_syms = [
        frozenset({DOMAIN, symbol_var(a.alphabet, s)}) for s in a.alphabet.symbols
    ]
    blank = frozenset()
    rules = [
        (blank, "out", eps),
        (blank, "out", LabeledTM.of(pad_shape, {w: "out" for w in pad_shape.nodes})),
    ]
    for sub in pattern_shapes(a.dimension, sig.n):
        if len(sub) and not sub.nodes <= pad_shape.nodes:
            continue
        pattern = LabeledTM.of(
            pad_shape,
            {w: ("in" if w in sub.nodes else "out") for w in pad_shape.nodes},
        )
        for sym in node_syms:
            rules.append((sym, "in", pattern))
    for sym in node_syms:
        rules.append((sym, "in", eps))
    aut = Automaton.of(a.dimension, sig.n, alphabet, {"in", "out"}, rules)
    return aut, frozenset({"in"})
