"""Automata for the atomic formulas over canonical encodings.

Each construction accepts exactly the canonical encodings of satisfying
assignments, with any padding extent, and rejects non-canonical shapes
by having no run on them.  Set-level `pred` atoms require both sets to
be singletons whose elements stand in the relation.  Variables outside
the atom are unconstrained: the automaton is built over the atom's own
variables and cylindrified into the requested variable set.
"""

from __future__ import annotations

from ..automata import Alphabet, Automaton, cylindrify, powerset_alphabet
from ..errors import UnsupportedDimension
from ..manifold import LabeledTM, complete, empty_pattern, pred
from .encoding import Signature
from .syntax import Pred, Sub

__all__ = ["atom_automaton"]

_BLANK, _B_MARK, _DONE, _A_MARK = 0, 1, 2, 3


def atom_automaton(atom, variables, sig):
    """Automaton over the powerset of `variables` for one atomic formula."""
    variables = tuple(sorted(variables))
    if isinstance(atom, Sub):
        own = tuple(sorted({atom.a, atom.b}))
        small, acc = _subset_automaton(atom.a, atom.b, own, sig)
    elif isinstance(atom, Pred):
        own = tuple(sorted({atom.a, atom.b}))
        if atom.i > sig.d:
            raise UnsupportedDimension(
                f"pred{atom.i} undefined at dimension {sig.d}"
            )
        if atom.a == atom.b:
            small, acc = _never_automaton(own, sig)
        elif sig.d == 1:
            small, acc = _pred_chain_automaton(atom.a, atom.b, own, sig)
        elif atom.i == sig.d:
            small, acc = _pred_major_automaton(atom.a, atom.b, own, sig)
        else:
            small, acc = _pred_embedded_automaton(atom, own, sig)
    else:
        raise TypeError(f"not an atomic formula: {atom!r}")
    if set(own) - set(variables):
        raise ValueError("atom variables must be included in the alphabet")
    if own == variables:
        return small, acc
    big = powerset_alphabet(variables)
    keep = set(own)
    pi = {sym: frozenset(sym & keep) for sym in big.symbols}
    return cylindrify(pi, small, big), acc


def _pad_pattern(sig, state):
    shape = complete(sig.d - 1, sig.n)
    return LabeledTM.of(shape, {w: state for w in shape.nodes})


def _one_marked(sig, mark, rest):
    shape = complete(sig.d - 1, sig.n)
    for spot in shape.sorted_nodes:
        yield LabeledTM.of(
            shape, {w: (mark if w == spot else rest) for w in shape.nodes}
        )


def _symbols(alphabet, want):
    """Symbols whose variable content equals `want`."""
    target = frozenset(want)
    return [s for s in alphabet.symbols if s == target]


def _never_automaton(own, sig):
    return (
        Automaton.of(sig.d, sig.n, powerset_alphabet(own), {_BLANK}, []),
        frozenset(),
    )


def _subset_automaton(a_name, b_name, own, sig):
    alphabet = powerset_alphabet(own)
    ok = [s for s in alphabet.symbols if a_name not in s or b_name in s]
    rules = []
    for sym in ok:
        rules.append((sym, _BLANK, empty_pattern(sig.d - 1)))
        rules.append((sym, _BLANK, _pad_pattern(sig, _BLANK)))
    aut = Automaton.of(sig.d, sig.n, alphabet, {_BLANK}, rules)
    return aut, frozenset({_BLANK})


def _pred_major_automaton(a_name, b_name, own, sig):
    """The related element of B lies in A's element's child structure."""
    alphabet = powerset_alphabet(own)
    blank, b_sym, a_sym = frozenset(), frozenset({b_name}), frozenset({a_name})
    rules = []
    for state, sym in ((_BLANK, blank), (_B_MARK, b_sym)):
        rules.append((sym, state, empty_pattern(sig.d - 1)))
        rules.append((sym, state, _pad_pattern(sig, _BLANK)))
    for pattern in _one_marked(sig, _B_MARK, _BLANK):
        rules.append((a_sym, _DONE, pattern))
    for pattern in _one_marked(sig, _DONE, _BLANK):
        rules.append((blank, _DONE, pattern))
    aut = Automaton.of(
        sig.d, sig.n, alphabet, {_BLANK, _B_MARK, _DONE}, rules
    )
    return aut, frozenset({_DONE})


def _pred_embedded_automaton(atom, own, sig):
    """Both elements sit in one child structure, related at dimension i."""
    alphabet = powerset_alphabet(own)
    blank = frozenset()
    a_sym, b_sym = frozenset({atom.a}), frozenset({atom.b})
    shape = complete(sig.d - 1, sig.n)
    rules = []
    for state, sym in ((_BLANK, blank), (_B_MARK, b_sym), (_A_MARK, a_sym)):
        rules.append((sym, state, empty_pattern(sig.d - 1)))
        rules.append((sym, state, _pad_pattern(sig, _BLANK)))
    for x in shape.nodes:
        for y in shape.nodes:
            if pred(atom.i, x, y):
                labels = {
                    w: (_A_MARK if w == x else _B_MARK if w == y else _BLANK)
                    for w in shape.nodes
                }
                rules.append((blank, _DONE, LabeledTM.of(shape, labels)))
    for pattern in _one_marked(sig, _DONE, _BLANK):
        rules.append((blank, _DONE, pattern))
    aut = Automaton.of(
        sig.d, sig.n, alphabet, {_BLANK, _B_MARK, _DONE, _A_MARK}, rules
    )
    return aut, frozenset({_DONE})


def _pred_chain_automaton(a_name, b_name, own, sig):
    """Dimension 1: scan right-to-left for B strictly past A, any gap."""
    alphabet = powerset_alphabet(own)
    blank, b_sym, a_sym = frozenset(), frozenset({b_name}), frozenset({a_name})
    point = complete(0, sig.n)

    def pt(state):
        return LabeledTM.of(point, {w: state for w in point.nodes})

    rules = [
        (blank, _BLANK, empty_pattern(0)),
        (blank, _BLANK, pt(_BLANK)),
        (b_sym, _B_MARK, empty_pattern(0)),
        (b_sym, _B_MARK, pt(_BLANK)),
        (blank, _B_MARK, pt(_B_MARK)),
        (a_sym, _DONE, pt(_B_MARK)),
        (blank, _DONE, pt(_DONE)),
    ]
    aut = Automaton.of(1, sig.n, alphabet, {_BLANK, _B_MARK, _DONE}, rules)
    return aut, frozenset({_DONE})
