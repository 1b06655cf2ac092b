"""Shared helpers: labeled-structure corpora, random automata, run oracles."""

import itertools
from functools import lru_cache

import pytest

from treemso.automata import Alphabet, Automaton, Run, pattern_shapes, run_is_licensed
from treemso.manifold import LabeledTM, enumerate_manifolds


def all_labelings(shape, symbols):
    slots = shape.sorted_nodes
    for combo in itertools.product(symbols, repeat=len(slots)):
        yield LabeledTM.of(shape, dict(zip(slots, combo)))


@lru_cache(maxsize=None)
def structure_corpus(d, n, symbols, max_nodes):
    """Every labeled structure with at most max_nodes nodes, size order."""
    out = []
    for shape in enumerate_manifolds(d, n, max_nodes):
        if shape.is_empty():
            continue
        out.extend(all_labelings(shape, symbols))
    return tuple(out)


def random_automaton(rng, d=3, n=2, symbols=("a", "b"), max_states=3, density=0.12):
    """A random bottom-up automaton with at least one leaf rule."""
    nq = rng.randint(1, max_states)
    states = tuple(range(nq))
    alphabet = Alphabet.of(symbols)
    rules = []
    for shape in pattern_shapes(d, n):
        slots = shape.sorted_nodes
        for labeling in itertools.product(states, repeat=len(slots)):
            pattern = LabeledTM.of(shape, dict(zip(slots, labeling)))
            for q in states:
                for s in symbols:
                    if rng.random() < density:
                        rules.append((s, q, pattern))
    if not any(r[2].shape.is_empty() for r in rules):
        empty = next(s for s in pattern_shapes(d, n) if s.is_empty())
        rules.append((rng.choice(symbols), rng.choice(states), LabeledTM.of(empty, {})))
    accepting = frozenset(q for q in states if rng.random() < 0.5) or frozenset({states[0]})
    return Automaton.of(d, n, alphabet, states, rules), accepting


def enumerate_runs(a, t):
    """All licensed runs of `a` on `t`, by exhaustive assignment search."""
    nodes = t.shape.sorted_nodes
    states = sorted(a.states, key=repr)
    for combo in itertools.product(states, repeat=len(nodes)):
        run = Run(t, tuple(zip(nodes, combo)))
        if run_is_licensed(a, run):
            yield run


def brute_accepts(a, accepting, t):
    if t.shape.is_empty():
        return False
    root = t.shape.root
    return any(r.states[root] in accepting for r in enumerate_runs(a, t))


# --- the hand-entered n=2 immediate-expansion relation table -----------------
#
# Alphabet P({X,Y}); states 0 (blank subtree), 1 (second element here),
# 2 (pair resolved), 3 (sink, "otherwise"); accepting {2}.

def _littletree(a, b, c):
    from treemso.manifold import Address, complete

    shape = complete(2, 2)
    return LabeledTM.of(
        shape,
        {Address(2, ()): a, Address(2, (0,)): b, Address(2, (1,)): c},
    )


def pred3_table_automaton():
    import itertools as _it

    from treemso.automata import powerset_alphabet
    from treemso.manifold import empty_pattern

    eps = empty_pattern(2)
    blank, xs, ys = frozenset(), frozenset({"X"}), frozenset({"Y"})
    listed = []
    for t in (eps, _littletree(0, 0, 0)):
        listed.append((blank, 0, t))
        listed.append((ys, 1, t))
    for t in (_littletree(1, 0, 0), _littletree(0, 1, 0), _littletree(0, 0, 1)):
        listed.append((xs, 2, t))
    for t in (_littletree(2, 0, 0), _littletree(0, 2, 0), _littletree(0, 0, 2)):
        listed.append((blank, 2, t))
    covered = {(sym, pat) for sym, _, pat in listed}
    rules = list(listed)
    alphabet = powerset_alphabet(("X", "Y"))
    for shape in pattern_shapes(3, 2):
        slots = shape.sorted_nodes
        for labeling in _it.product((0, 1, 2, 3), repeat=len(slots)):
            pattern = LabeledTM.of(shape, dict(zip(slots, labeling)))
            for sym in alphabet.symbols:
                if (sym, pattern) not in covered:
                    rules.append((sym, 3, pattern))
    aut = Automaton.of(3, 2, alphabet, {0, 1, 2, 3}, rules)
    return aut, frozenset({2})


def canonical_encodings(variables, sig, max_nodes):
    """Every canonical structure over P(variables) up to the node bound."""
    from treemso.automata import powerset_alphabet
    from treemso.mso.encoding import is_canonical

    symbols = powerset_alphabet(variables).symbols
    for shape in enumerate_manifolds(sig.d, sig.n, max_nodes):
        if shape.is_empty():
            continue
        probe = LabeledTM.of(shape, {p: frozenset() for p in shape.nodes})
        if not is_canonical(probe, sig):
            continue
        yield from all_labelings(shape, symbols)
