"""Assignments and their canonical structure encodings.

A finite assignment (individuals and finite address sets) becomes a
labeled manifold over variable-set labels: the minimal hereditarily
closed structure covering every assigned address, with each nonempty
child structure padded to the complete shape for the signature's bound.
Decoding inverts this; two encodings of one assignment differ only in
padding extent.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from ..automata import Alphabet, Automaton, powerset_alphabet
from ..errors import BranchingExceeded, DecodeError, SortError, UnsupportedDimension
from ..manifold import (
    Address,
    LabeledTM,
    TreeManifold,
    children,
    complete,
    empty_pattern,
    root,
    validate,
)
from .syntax import is_set_var

__all__ = [
    "Signature",
    "Assignment",
    "Encoding",
    "encode_assignment",
    "decode",
    "is_canonical",
    "canonical_universe",
    "pad_once",
]


@dataclass(frozen=True)
class Signature:
    """Branching bound and dimension of the background structure."""

    n: int
    d: int = 3

    def __post_init__(self):
        if self.n < 1:
            raise ValueError("branching bound must be >= 1")
        if self.d not in (1, 2, 3):
            raise UnsupportedDimension(f"dimension {self.d}")


@dataclass(frozen=True)
class Assignment:
    """Values for first-order (address) and set (finite address set) vars."""

    fo: tuple = ()
    sets: tuple = ()

    @staticmethod
    def of(fo=None, sets=None):
        fo = dict(fo or {})
        sets = {k: frozenset(v) for k, v in (sets or {}).items()}
        for name in fo:
            if is_set_var(name):
                raise SortError(name, "first-order value bound to a set variable")
        for name in sets:
            if not is_set_var(name):
                raise SortError(name, "set value bound to a first-order variable")
        return Assignment(tuple(sorted(fo.items())), tuple(sorted(sets.items())))

    @property
    def fo_map(self):
        return dict(self.fo)

    @property
    def set_map(self):
        return dict(self.sets)

    def env(self):
        return {**dict(self.fo), **dict(self.sets)}

    def names(self):
        return tuple(sorted({k for k, _ in self.fo} | {k for k, _ in self.sets}))


@dataclass(frozen=True)
class Encoding:
    """A labeled manifold over variable-set labels plus its variable order."""

    structure: LabeledTM
    variables: tuple
    canonical: bool = True


def _component_limits(addr, n):
    """Every embedded component must live inside the complete padding shape."""
    d = addr.dimension
    if d == 1 or (d == 0):
        return True
    for comp in addr.path:
        if d == 2:
            if comp > n - 1:
                return False
        else:
            if len(comp) > n - 1 or any(k > n - 1 for k in comp):
                return False
            # entries of tree components are themselves bounded strings
    return True


def _hereditary_closure(addresses, d):
    from ..manifold import _closure_requirement

    todo = list(addresses)
    seen = set(todo)
    while todo:
        a = todo.pop()
        for i in range(1, d + 1):
            need = _closure_requirement(i, a)
            if need is not None and need not in seen:
                seen.add(need)
                todo.append(need)
    return seen


def encode_assignment(assignment, sig, variables=None):
    """Minimal canonical structure holding all assigned addresses."""
    if variables is None:
        variables = assignment.names()
    variables = tuple(variables)
    if not set(assignment.names()) <= set(variables):
        raise DecodeError("assignment mentions variables outside the encoding order")
    holders = {}
    for name, addr in assignment.fo:
        holders.setdefault(addr, set()).add(name)
    for name, addrs in assignment.sets:
        for addr in addrs:
            holders.setdefault(addr, set()).add(name)
    d = sig.d
    for addr in holders:
        if addr.dimension != d:
            raise UnsupportedDimension(f"{addr} is not {d}-dimensional")
        if not _component_limits(addr, sig.n):
            raise BranchingExceeded(f"{addr} exceeds branching bound {sig.n}")
    nodes = _hereditary_closure(set(holders) | {root(d)}, d)
    if d >= 2:
        pad_shape = complete(d - 1, sig.n)
        grown = set(nodes)
        for p in nodes:
            if any(len(q.path) == len(p.path) + 1 and q.path[: len(p.path)] == p.path
                   for q in nodes):
                for w in pad_shape.nodes:
                    grown.add(Address(d, p.path + (w.path,)))
        nodes = grown
    shape = validate(d, nodes)
    labels = {a: frozenset(holders.get(a, ())) for a in nodes}
    structure = LabeledTM.of(shape, labels)
    return Encoding(structure, variables, canonical=True)


def decode(encoding):
    """Invert an encoding: label classes become variable values."""
    classes = {v: set() for v in encoding.variables}
    for a, label in encoding.structure.items:
        for v in label:
            if v not in classes:
                raise DecodeError(f"label mentions unknown variable {v!r}")
            classes[v].add(a)
    fo = {}
    sets = {}
    for v, addrs in classes.items():
        if is_set_var(v):
            sets[v] = frozenset(addrs)
        else:
            if len(addrs) != 1:
                raise DecodeError(f"first-order variable {v!r} marks {len(addrs)} nodes")
            fo[v] = next(iter(addrs))
    return Assignment.of(fo, sets)


def is_canonical(structure, sig):
    """Every node's child structure is empty or the complete shape."""
    if structure.dimension != sig.d:
        return False
    if sig.d == 1:
        return True
    pad_shape = complete(sig.d - 1, sig.n)
    for p in structure.shape.nodes:
        ch = children(structure.shape, p)
        if not ch.is_empty() and ch.nodes != pad_shape.nodes:
            return False
    return True


def pad_once(encoding, sig, at=None):
    """Expand one leaf's child structure to the complete shape (a strictly
    larger encoding of the same assignment); None when nothing can grow."""
    t = encoding.structure
    d = sig.d
    leaves = sorted(
        (p for p in t.shape.nodes if children(t.shape, p).is_empty()),
        key=Address.sort_key,
    )
    if not leaves and t.shape.is_empty():
        return None
    if at is None:
        if not leaves:
            return None
        at = leaves[0]
    if d == 1:
        new = Address(1, max(a.path for a in t.shape.nodes) + 1)
        labels = dict(t.labels)
        labels[new] = frozenset()
    else:
        labels = dict(t.labels)
        for w in complete(d - 1, sig.n).nodes:
            labels[Address(d, at.path + (w.path,))] = frozenset()
    shape = validate(d, labels.keys())
    return Encoding(LabeledTM.of(shape, labels), encoding.variables, canonical=True)


def canonical_universe(variables, sig):
    """One-state automaton accepting exactly the canonical structures."""
    alphabet = powerset_alphabet(variables)
    q = "u"
    shapes = [empty_pattern(sig.d - 1)]
    if sig.d >= 2:
        pad_shape = complete(sig.d - 1, sig.n)
        shapes.append(LabeledTM.of(pad_shape, {w: q for w in pad_shape.nodes}))
    else:
        point = complete(0, sig.n)
        shapes.append(LabeledTM.of(point, {w: q for w in point.nodes}))
    full = alphabet.full_mask()
    grouped = {pattern: {q: full} for pattern in shapes}
    return Automaton.of(sig.d, sig.n, alphabet, {q}, grouped), frozenset({q})
