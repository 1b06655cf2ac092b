"""Bottom-up tree-manifold automata, uniformly over dimensions 1..3.

A d-dimensional automaton licenses state assignments: a node labeled
sigma whose child structure carries states per a (d-1)-dimensional
pattern may take state q whenever (sigma, q, pattern) is a transition.
Acceptance is a run whose root state lies in the accepting set.

Transitions are stored grouped: pattern -> state -> bitmask over the
alphabet.  Masks keep product/projection/cylindrification linear in the
number of groups rather than in the alphabet size, which matters once
alphabets are powersets of variable sets.  The public `rules()` iterator
and the serializers still present the flat (symbol, state, pattern) view.

Automata are immutable; the determinization handle memoizes its
transition function, and all operations are pure.
"""

from __future__ import annotations

import heapq
import itertools
import json as _json
from dataclasses import dataclass, field

from . import sexpr
from .errors import (
    AlphabetMismatch,
    BranchingExceeded,
    BranchingMismatch,
    DimensionMismatch,
    ExplosionGuard,
    NotSurjective,
    PartialMap,
)
from .limits import DEFAULT_GUARD
from .manifold import (
    Address,
    LabeledTM,
    TreeManifold,
    child_bound,
    children,
    complete,
    embed_bound,
    empty_pattern,
    enumerate_manifolds,
)

__all__ = [
    "Alphabet",
    "Automaton",
    "Run",
    "possible_states",
    "accepts",
    "find_run",
    "run_is_licensed",
    "determinize",
    "Determinized",
    "materialize",
    "union",
    "intersect",
    "complement",
    "project",
    "cylindrify",
    "is_empty",
    "equivalent",
    "trim",
    "pattern_shapes",
    "aut_to_sexp",
    "aut_from_sexp",
    "aut_to_json",
    "aut_from_json",
]


@dataclass(frozen=True)
class Alphabet:
    symbols: tuple
    _index: dict = field(default=None, compare=False, repr=False)

    @staticmethod
    def of(symbols):
        return Alphabet(tuple(symbols))

    @property
    def index(self):
        if self._index is None:
            object.__setattr__(self, "_index", {s: i for i, s in enumerate(self.symbols)})
        return self._index

    def __len__(self):
        return len(self.symbols)

    def __contains__(self, symbol):
        return symbol in self.index

    def full_mask(self):
        return (1 << len(self.symbols)) - 1

    def mask_of(self, symbols):
        m = 0
        for s in symbols:
            m |= 1 << self.index[s]
        return m

    def symbols_of(self, mask):
        out = []
        while mask:
            low = mask & -mask
            out.append(self.symbols[low.bit_length() - 1])
            mask ^= low
        return out


def powerset_alphabet(names):
    """Alphabet of variable sets; symbol index i has exactly the variables
    whose bit is set in i, bits assigned in sorted name order."""
    names = sorted(names)
    symbols = []
    for i in range(1 << len(names)):
        symbols.append(frozenset(n for b, n in enumerate(names) if i >> b & 1))
    return Alphabet.of(symbols)


@dataclass(frozen=True)
class Automaton:
    """dimension, branching bound, alphabet, states, grouped transitions."""

    dimension: int
    n: int
    alphabet: Alphabet
    states: frozenset
    table: tuple  # ((pattern, ((state, mask), ...)), ...) canonical
    _by_shape: dict = field(default=None, compare=False, repr=False)
    _groups: dict = field(default=None, compare=False, repr=False)

    @staticmethod
    def of(dimension, n, alphabet, states, transitions):
        """`transitions` is either an iterable of (symbol, state, pattern)
        rules or a mapping pattern -> {state: mask}."""
        states = frozenset(states)
        grouped = {}
        if isinstance(transitions, dict):
            for pattern, per_state in transitions.items():
                dest = grouped.setdefault(pattern, {})
                for q, mask in per_state.items():
                    dest[q] = dest.get(q, 0) | mask
        else:
            for symbol, q, pattern in transitions:
                if symbol not in alphabet:
                    raise AlphabetMismatch(f"symbol {symbol!r} not in alphabet")
                dest = grouped.setdefault(pattern, {})
                dest[q] = dest.get(q, 0) | (1 << alphabet.index[symbol])
        full = alphabet.full_mask()
        for pattern, per_state in grouped.items():
            if pattern.dimension != dimension - 1:
                raise DimensionMismatch(
                    f"pattern {pattern!r} is not {dimension - 1}-dimensional"
                )
            if embed_bound(pattern.shape) > n:
                raise BranchingExceeded(f"pattern {pattern!r} exceeds branching {n}")
            for _, v in pattern.items:
                if v not in states:
                    raise AlphabetMismatch(f"pattern label {v!r} is not a state")
            for q, mask in per_state.items():
                if q not in states:
                    raise AlphabetMismatch(f"state {q!r} not declared")
                if mask & ~full:
                    raise AlphabetMismatch("mask exceeds alphabet")
        table = tuple(
            (pattern, tuple(sorted(per_state.items(), key=lambda kv: _state_key(kv[0]))))
            for pattern, per_state in sorted(
                grouped.items(), key=lambda kv: _pattern_key(kv[0])
            )
        )
        return Automaton(dimension, n, alphabet, states, table)

    @property
    def groups(self):
        if self._groups is None:
            object.__setattr__(
                self, "_groups", {p: dict(per) for p, per in self.table}
            )
        return self._groups

    @property
    def by_shape(self):
        if self._by_shape is None:
            index = {}
            for pattern, per_state in self.table:
                index.setdefault(pattern.shape, []).append((pattern, dict(per_state)))
            object.__setattr__(self, "_by_shape", index)
        return self._by_shape

    def rules(self):
        """Expanded (symbol, state, pattern) view of the transition table."""
        for pattern, per_state in self.table:
            for q, mask in per_state:
                for symbol in self.alphabet.symbols_of(mask):
                    yield symbol, q, pattern

    def rule_count(self):
        return sum(
            mask.bit_count() for _, per in self.table for _, mask in per
        )

    def __repr__(self):
        return (
            f"Automaton(d={self.dimension}, n={self.n}, |Q|={len(self.states)}, "
            f"|sigma|={len(self.alphabet)}, groups={len(self.table)})"
        )


def _state_key(q):
    return (str(type(q)), repr(q))


def _pattern_key(p):
    return (len(p.shape), tuple((a.sort_key(), repr(v)) for a, v in p.items))


def _child_topology(t):
    """Per node: (symbol, child shape, tuple of (slot, child address))."""
    d = t.dimension
    out = {}
    for s in t.shape.nodes:
        ch = children(t.shape, s)
        if d == 1:
            pairs = tuple((w, Address(1, s.path + 1)) for w in ch.nodes)
        else:
            pairs = tuple((w, Address(d, s.path + (w.path,))) for w in ch.nodes)
        out[s] = (t.label(s), ch, pairs)
    return out


def _check_input(a, t):
    if t.dimension != a.dimension:
        raise DimensionMismatch(f"structure is {t.dimension}-dimensional")
    for _, v in t.items:
        if v not in a.alphabet:
            raise AlphabetMismatch(f"label {v!r} not in automaton alphabet")
    if child_bound(t.shape) > a.n:
        raise BranchingExceeded(f"structure exceeds branching bound {a.n}")


def possible_states(a, t):
    """Bottom-up assignment of the achievable state set to every node."""
    _check_input(a, t)
    topo = _child_topology(t)
    ps = {}
    for s in sorted(t.shape.nodes, key=lambda x: -x.length):
        sigma, ch_shape, pairs = topo[s]
        si = a.alphabet.index[sigma]
        found = set()
        for pattern, per_state in a.by_shape.get(ch_shape, ()):
            labels = pattern.labels
            if all(labels[w] in ps[c] for w, c in pairs):
                for q, mask in per_state.items():
                    if mask >> si & 1:
                        found.add(q)
        ps[s] = frozenset(found)
    return ps


def accepts(a, accepting, t):
    """True iff some run assigns the root a state in `accepting`."""
    if t.shape.is_empty():
        return False
    ps = possible_states(a, t)
    return bool(ps[t.shape.root] & frozenset(accepting))


@dataclass(frozen=True)
class Run:
    """A per-node state assignment over a labeled manifold."""

    structure: LabeledTM
    assignment: tuple  # canonical ((address, state), ...)

    @property
    def states(self):
        return dict(self.assignment)

    def root_state(self):
        return self.states[self.structure.shape.root]


def run_is_licensed(a, run):
    """Check every node's (label, state, state-labeled children) triple."""
    t = run.structure
    states = run.states
    topo = _child_topology(t)
    for s in t.shape.nodes:
        sigma, ch_shape, pairs = topo[s]
        pattern = LabeledTM.of(ch_shape, {w: states[c] for w, c in pairs})
        mask = a.groups.get(pattern, {}).get(states[s], 0)
        if not (mask >> a.alphabet.index[sigma] & 1):
            return False
    return True


def find_run(a, accepting, t):
    """Extract one accepting run (None if the structure is rejected)."""
    if t.shape.is_empty():
        return None
    ps = possible_states(a, t)
    rootq = sorted(ps[t.shape.root] & frozenset(accepting), key=_state_key)
    if not rootq:
        return None
    topo = _child_topology(t)
    assignment = {}

    def descend(s, q):
        assignment[s] = q
        sigma, ch_shape, pairs = topo[s]
        si = a.alphabet.index[sigma]
        for pattern, per_state in a.by_shape.get(ch_shape, ()):
            mask = per_state.get(q, 0)
            if not (mask >> si & 1):
                continue
            labels = pattern.labels
            if all(labels[w] in ps[c] for w, c in pairs):
                for w, c in pairs:
                    descend(c, labels[w])
                return
        raise AssertionError("inconsistent possible_states")

    descend(t.shape.root, rootq[0])
    return Run(t, tuple((s, assignment[s]) for s in t.shape.sorted_nodes))


# --- determinization -----------------------------------------------------------

class Determinized:
    """Lazy subset construction over (d-1)-dimensional patterns.

    `delta` is total: patterns outside the table map to the empty-set
    sink.  The memo table only grows and lookups are pure, so concurrent
    use yields identical results regardless of interleaving.
    """

    def __init__(self, automaton):
        self.automaton = automaton
        self._memo = {}

    def delta(self, symbol, det_pattern):
        a = self.automaton
        key = (symbol, det_pattern)
        hit = self._memo.get(key)
        if hit is not None:
            return hit
        si = a.alphabet.index[symbol]
        found = set()
        det_labels = det_pattern.labels
        for pattern, per_state in a.by_shape.get(det_pattern.shape, ()):
            labels = pattern.labels
            if all(labels[w] in det_labels[w] for w in det_labels):
                for q, mask in per_state.items():
                    if mask >> si & 1:
                        found.add(q)
        result = frozenset(found)
        self._memo[key] = result
        return result

    def run(self, t):
        """The unique subset-state per node; equals possible_states of the
        underlying automaton."""
        _check_input(self.automaton, t)
        topo = _child_topology(t)
        out = {}
        for s in sorted(t.shape.nodes, key=lambda x: -x.length):
            sigma, ch_shape, pairs = topo[s]
            det_pattern = LabeledTM.of(ch_shape, {w: out[c] for w, c in pairs})
            out[s] = self.delta(sigma, det_pattern)
        return out

    def accepts(self, accepting, t):
        if t.shape.is_empty():
            return False
        acc = frozenset(accepting)
        return bool(self.run(t)[t.shape.root] & acc)

    def lift(self, accepting, subset_states):
        acc = frozenset(accepting)
        return frozenset(s for s in subset_states if s & acc)


def determinize(a):
    return Determinized(a)


def pattern_shapes(dimension, n):
    """All shapes a pattern of a d-dimensional, n-bounded automaton may take."""
    cap = len(complete(dimension - 1, n)) if dimension >= 2 else 1
    return list(enumerate_manifolds(dimension - 1, n, cap))


def materialize(det, accepting, shapes=None, guard=None):
    """Explicit subset automaton over every pattern in the shape domain.

    Reachability-driven: only subset states discoverable from leaf
    patterns are enumerated, but delta is total over those labelings
    (the empty-set sink included).  Guarded against explosion.
    """
    guard = guard or DEFAULT_GUARD
    a = det.automaton
    if shapes is None:
        shapes = pattern_shapes(a.dimension, a.n)
    reachable = set()
    grouped = {}
    frontier = [frozenset()]
    reachable.add(frozenset())
    done_patterns = set()
    while frontier:
        estimate = len(a.alphabet) * sum(len(reachable) ** len(s) for s in shapes)
        if estimate > guard.max_transitions:
            raise ExplosionGuard(estimate, guard.max_transitions, "materialize")
        frontier = []
        snapshot = sorted(reachable, key=_state_key)
        for shape in shapes:
            slots = shape.sorted_nodes
            for labeling in itertools.product(snapshot, repeat=len(slots)):
                pattern = LabeledTM.of(shape, dict(zip(slots, labeling)))
                if pattern in done_patterns:
                    continue
                done_patterns.add(pattern)
                per_state = grouped.setdefault(pattern, {})
                for symbol in a.alphabet.symbols:
                    target = det.delta(symbol, pattern)
                    per_state[target] = per_state.get(target, 0) | (
                        1 << a.alphabet.index[symbol]
                    )
                    if target not in reachable:
                        reachable.add(target)
                        frontier.append(target)
                        if len(reachable) > guard.max_states:
                            raise ExplosionGuard(
                                len(reachable), guard.max_states, "materialize states"
                            )
    out = Automaton.of(a.dimension, a.n, a.alphabet, reachable, grouped)
    return out, det.lift(accepting, reachable)


# --- boolean closure ------------------------------------------------------------

def _require_compatible(a, b):
    if a.dimension != b.dimension:
        raise DimensionMismatch(f"{a.dimension} vs {b.dimension}")
    if a.n != b.n:
        raise BranchingMismatch(f"{a.n} vs {b.n}")
    if a.alphabet.symbols != b.alphabet.symbols:
        if set(a.alphabet.symbols) == set(b.alphabet.symbols):
            b = reindex(b, a.alphabet)
        else:
            raise AlphabetMismatch("alphabets differ; cylindrify first")
    return b


def reindex(a, alphabet):
    """Same automaton over the same symbol set in a different order."""
    if set(alphabet.symbols) != set(a.alphabet.symbols):
        raise AlphabetMismatch("reindex requires the same symbol set")
    remap = [alphabet.index[s] for s in a.alphabet.symbols]
    grouped = {
        pattern: {q: _remap_mask(mask, remap) for q, mask in per.items()}
        for pattern, per in a.groups.items()
    }
    return Automaton.of(a.dimension, a.n, alphabet, a.states, grouped)


def _remap_mask(mask, remap):
    out = 0
    while mask:
        low = mask & -mask
        out |= 1 << remap[low.bit_length() - 1]
        mask ^= low
    return out


def union(a, a_acc, b, b_acc):
    """Language union by disjoint sum of the two automata.

    The pairing construction used for intersection is unsound for union
    unless both operands are total, so the standard tagged-sum automaton
    is used instead.
    """
    b = _require_compatible(a, b)
    states = frozenset((0, q) for q in a.states) | frozenset((1, q) for q in b.states)
    grouped = {}
    for side, src in ((0, a), (1, b)):
        for pattern, per in src.groups.items():
            tagged = pattern.relabel(lambda q, side=side: (side, q))
            dest = grouped.setdefault(tagged, {})
            for q, mask in per.items():
                key = (side, q)
                dest[key] = dest.get(key, 0) | mask
    acc = frozenset((0, q) for q in a_acc) | frozenset((1, q) for q in b_acc)
    return Automaton.of(a.dimension, a.n, a.alphabet, states, grouped), acc


def intersect(a, a_acc, b, b_acc):
    """Product construction; patterns zip componentwise over equal shapes."""
    b = _require_compatible(a, b)
    grouped = {}
    states = set()
    for shape, a_entries in a.by_shape.items():
        b_entries = b.by_shape.get(shape)
        if not b_entries:
            continue
        slots = shape.sorted_nodes
        for pa, per_a in a_entries:
            for pb, per_b in b_entries:
                zipped = LabeledTM.of(
                    shape, {w: (pa.labels[w], pb.labels[w]) for w in slots}
                )
                dest = grouped.setdefault(zipped, {})
                for qa, ma in per_a.items():
                    for qb, mb in per_b.items():
                        m = ma & mb
                        if m:
                            key = (qa, qb)
                            dest[key] = dest.get(key, 0) | m
                            states.add(key)
                if not dest:
                    del grouped[zipped]
    for pattern in grouped:
        for _, v in pattern.items:
            states.add(v)
    acc = frozenset(
        (qa, qb) for qa in a_acc for qb in b_acc if (qa, qb) in states
    )
    aut = Automaton.of(a.dimension, a.n, a.alphabet, states, grouped)
    return trim(aut, acc)


def complement(a, accepting, universe=None, shapes=None, guard=None):
    """Determinize, flip acceptance, optionally relativize to a universe.

    `universe` is an (automaton, accepting) pair; when given, the subset
    automaton is materialized over the universe's pattern shapes only and
    the flipped automaton is intersected with it.
    """
    if shapes is None and universe is not None:
        shapes = sorted(
            {p.shape for p in universe[0].groups}, key=lambda s: len(s)
        )
    det = determinize(a)
    subset, _ = materialize(det, accepting, shapes=shapes, guard=guard)
    acc = frozenset(accepting)
    flipped = frozenset(s for s in subset.states if not (s & acc))
    if universe is None:
        return subset, flipped
    return intersect(subset, flipped, universe[0], universe[1])


# --- projection / cylindrification ----------------------------------------------

def project(pi, a, target=None):
    """Image automaton under an alphabet map (symbol-wise relabeling)."""
    for s in a.alphabet.symbols:
        if s not in pi:
            raise PartialMap(f"projection undefined on {s!r}")
    seen = []
    for s in a.alphabet.symbols:
        if pi[s] not in seen:
            seen.append(pi[s])
    if target is None:
        target = Alphabet.of(seen)
    else:
        if set(seen) != set(target.symbols):
            raise NotSurjective("projection is not onto the target alphabet")
    remap = [target.index[pi[s]] for s in a.alphabet.symbols]
    grouped = {
        pattern: {q: _remap_mask(mask, remap) for q, mask in per.items()}
        for pattern, per in a.groups.items()
    }
    return Automaton.of(a.dimension, a.n, target, a.states, grouped)


def cylindrify(pi, a, big):
    """Preimage automaton: each rule over sigma' is replaced by all rules
    over its pi-preimages in the larger alphabet `big`."""
    images = set()
    for s in big.symbols:
        if s not in pi:
            raise PartialMap(f"cylindrification undefined on {s!r}")
        images.add(pi[s])
    if images < set(a.alphabet.symbols):
        raise NotSurjective("map does not cover the source alphabet")
    for s in images:
        if s not in a.alphabet:
            raise AlphabetMismatch(f"image symbol {s!r} not in source alphabet")
    old_index = a.alphabet.index
    lift = [old_index[pi[s]] for s in big.symbols]
    grouped = {}
    for pattern, per in a.groups.items():
        grouped[pattern] = {
            q: _lift_mask(mask, lift) for q, mask in per.items()
        }
    return Automaton.of(a.dimension, a.n, big, a.states, grouped)


def _lift_mask(mask, lift):
    out = 0
    for j, i in enumerate(lift):
        if mask >> i & 1:
            out |= 1 << j
    return out


# --- emptiness and equivalence ----------------------------------------------------

def _min_symbol(a, mask):
    return a.alphabet.symbols[(mask & -mask).bit_length() - 1]


def is_empty(a, accepting):
    """Least-fixpoint emptiness with a minimal accepted witness.

    States are settled in order of their cheapest derivation (node count),
    so the returned witness has minimal size.  The witness is re-checked
    with `accepts` before being returned.
    """
    acc = frozenset(accepting)
    cost = {}
    choice = {}
    pending = []
    counter = itertools.count()
    waiting = {}  # state -> tuples it appears under
    for pattern, per in a.groups.items():
        for q, mask in per.items():
            entry = (q, pattern, mask)
            if pattern.shape.is_empty():
                heapq.heappush(pending, (1, next(counter), entry))
            else:
                for _, label in pattern.items:
                    waiting.setdefault(label, []).append(entry)

    def try_push(entry):
        q, pattern, mask = entry
        total = 1
        for _, label in pattern.items:
            c = cost.get(label)
            if c is None:
                return
            total += c
        if total < cost.get(q, float("inf")):
            heapq.heappush(pending, (total, next(counter), entry))

    while pending:
        total, _, entry = heapq.heappop(pending)
        q, pattern, mask = entry
        if q in cost and cost[q] <= total:
            continue
        if any(label not in cost for _, label in pattern.items):
            continue
        cost[q] = total
        choice[q] = (pattern, _min_symbol(a, mask))
        for other in waiting.get(q, ()):
            try_push(other)
        # tuples whose labels were already settled may now be cheaper
        # only through q, which try_push above covers.

    reached = [q for q in acc if q in cost]
    if not reached:
        return True, None
    best = min(reached, key=lambda q: (cost[q], _state_key(q)))
    root_path = 0 if a.dimension == 1 else ()

    def build(q):
        pattern, symbol = choice[q]
        labels = {root_path: symbol}
        for w, label in pattern.items:
            for p, v in build(label).items():
                grafted = p + 1 if a.dimension == 1 else (w.path,) + p
                labels[grafted] = v
        return labels

    labels = build(best)
    shape = TreeManifold.of(a.dimension, labels.keys())
    witness = LabeledTM.of(shape, {Address(a.dimension, p): v for p, v in labels.items()})
    assert accepts(a, acc, witness), "witness failed self-check"
    return False, witness


def trim(a, accepting):
    """Drop states that are uninhabited or cannot feed an accepting run."""
    inhabited = set()
    changed = True
    while changed:
        changed = False
        for pattern, per in a.groups.items():
            if all(v in inhabited for _, v in pattern.items):
                for q in per:
                    if q not in inhabited:
                        inhabited.add(q)
                        changed = True
    useful = set(q for q in accepting if q in inhabited)
    changed = True
    while changed:
        changed = False
        for pattern, per in a.groups.items():
            if any(q in useful for q in per) and all(
                v in inhabited for _, v in pattern.items
            ):
                for _, v in pattern.items:
                    if v not in useful:
                        useful.add(v)
                        changed = True
    grouped = {}
    for pattern, per in a.groups.items():
        if not all(v in useful for _, v in pattern.items):
            continue
        kept = {q: mask for q, mask in per.items() if q in useful}
        if kept:
            grouped[pattern] = kept
    out = Automaton.of(a.dimension, a.n, a.alphabet, useful, grouped)
    return out, frozenset(accepting) & frozenset(useful)


def equivalent(a, a_acc, b, b_acc, guard=None):
    """Language equality via emptiness of the symmetric difference."""
    b = _require_compatible(a, b)
    not_b, not_b_acc = complement(b, b_acc, guard=guard)
    not_a, not_a_acc = complement(a, a_acc, guard=guard)
    left = intersect(a, a_acc, not_b, not_b_acc)
    right = intersect(not_a, not_a_acc, b, b_acc)
    diff, diff_acc = union(left[0], left[1], right[0], right[1])
    empty_, witness = is_empty(diff, diff_acc)
    return empty_, witness


# --- serialization ---------------------------------------------------------------

def _sym_sexp(v):
    from .manifold import _label_to_sexp

    return _label_to_sexp(v)


def _sym_from_sexp(v):
    from .manifold import _label_from_sexp

    return _label_from_sexp(v)


def aut_to_sexp(a, accepting):
    from .manifold import ltm_to_sexp

    out = [
        "aut",
        sexpr.Keyword("d"),
        a.dimension,
        sexpr.Keyword("n"),
        a.n,
        sexpr.Keyword("sigma"),
        [_sym_sexp(s) for s in a.alphabet.symbols],
        sexpr.Keyword("states"),
        [_sym_sexp(q) for q in sorted(a.states, key=_state_key)],
        sexpr.Keyword("accept"),
        [_sym_sexp(q) for q in sorted(accepting, key=_state_key)],
    ]
    for symbol, q, pattern in a.rules():
        out.append(["rule", _sym_sexp(symbol), _sym_sexp(q), ltm_to_sexp(pattern)])
    return out


def aut_from_sexp(form):
    from .manifold import _plist, ltm_from_sexp

    if not (isinstance(form, list) and form and form[0] == "aut"):
        raise AlphabetMismatch(f"not an aut form: {form!r}")
    plist = _plist(form)
    d, n = plist["d"], plist["n"]
    alphabet = Alphabet.of(tuple(_sym_from_sexp(s) for s in plist["sigma"]))
    states = frozenset(_sym_from_sexp(q) for q in plist["states"])
    accepting = frozenset(_sym_from_sexp(q) for q in plist["accept"])
    rules = []
    for f in form:
        if isinstance(f, list) and f and f[0] == "rule":
            rules.append((_sym_from_sexp(f[1]), _sym_from_sexp(f[2]), ltm_from_sexp(f[3])))
    return Automaton.of(d, n, alphabet, states, rules), accepting


def aut_to_json(a, accepting):
    from .manifold import _addr_json, _label_json

    rules = [
        {
            "symbol": _label_json(symbol),
            "state": _label_json(q),
            "pattern": {
                "d": pattern.dimension,
                "nodes": [
                    {"addr": _addr_json(addr), "label": _label_json(v)}
                    for addr, v in pattern.items
                ],
            },
        }
        for symbol, q, pattern in a.rules()
    ]
    return _json.dumps(
        {
            "kind": "aut",
            "d": a.dimension,
            "n": a.n,
            "sigma": [_label_json(s) for s in a.alphabet.symbols],
            "states": [_label_json(q) for q in sorted(a.states, key=_state_key)],
            "accept": [_label_json(q) for q in sorted(accepting, key=_state_key)],
            "rules": rules,
        }
    )


def aut_from_json(text):
    from .manifold import _addr_from_json, _label_from_json, validate

    data = _json.loads(text)
    d, n = data["d"], data["n"]
    alphabet = Alphabet.of(tuple(_label_from_json(s) for s in data["sigma"]))
    states = frozenset(_label_from_json(q) for q in data["states"])
    accepting = frozenset(_label_from_json(q) for q in data["accept"])
    rules = []
    for r in data["rules"]:
        pd = r["pattern"]["d"]
        labels = {
            _addr_from_json(pd, e["addr"]): _label_from_json(e["label"])
            for e in r["pattern"]["nodes"]
        }
        pattern = LabeledTM.of(validate(pd, labels.keys()), labels)
        rules.append((_label_from_json(r["symbol"]), _label_from_json(r["state"]), pattern))
    return Automaton.of(d, n, alphabet, states, rules), accepting


def canonical_renamed(a, accepting):
    """Rename states to 0..k-1 in table order (subset states and product
    tuples do not serialize as atoms)."""
    naming = {}
    for pattern, per in a.table:
        for _, v in pattern.items:
            naming.setdefault(v, len(naming))
        for q, _ in per:
            naming.setdefault(q, len(naming))
    for q in sorted(a.states, key=_state_key):
        naming.setdefault(q, len(naming))
    grouped = {
        pattern.relabel(lambda q: naming[q]): {naming[q]: m for q, m in per.items()}
        for pattern, per in a.groups.items()
    }
    out = Automaton.of(a.dimension, a.n, a.alphabet, set(naming.values()), grouped)
    return out, frozenset(naming[q] for q in accepting)
