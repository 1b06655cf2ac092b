"""Tree manifolds of dimension 0..3: addresses, validity, labelings, metrics.

A d-dimensional tree manifold (d-TM) is a finite, hereditarily prefix-closed
set of nested addresses:

* d=0 -- a point (or nothing); used only as the pattern domain of
  string automata.
* d=1 -- a string domain: a downward-closed set of positions 0..m.
* d=2 -- a tree domain: Gorn addresses, prefix- and left-sibling-closed.
* d=3 -- each node expands into a (possibly empty) tree; addresses are
  sequences of tree addresses.

Addresses store naturals rather than unary strings; paths are ints at d=1
and nested tuples above.  All values are immutable and hashable, and every
operation here is a pure function.
"""

from __future__ import annotations

import itertools
import json as _json
from dataclasses import dataclass, field

from . import sexpr
from .errors import BadAddress, ClosureViolation, NodeAbsent, UnsupportedDimension

__all__ = [
    "Address",
    "TreeManifold",
    "LabeledTM",
    "validate",
    "children",
    "labeled_children",
    "depth",
    "levels",
    "branching_factor",
    "embed_bound",
    "child_bound",
    "complete",
    "enumerate_manifolds",
    "pred",
    "pred_immediate",
    "tm_to_sexp",
    "tm_from_sexp",
    "ltm_to_sexp",
    "ltm_from_sexp",
    "tm_to_json",
    "tm_from_json",
    "ltm_to_json",
    "ltm_from_json",
]

POINT_PATH = 0  # the single 0-dimensional address


def _check_path(dimension, path):
    if dimension == 0:
        if path != POINT_PATH:
            raise BadAddress(f"0-dimensional path must be {POINT_PATH}, got {path!r}")
        return
    if dimension == 1:
        if not isinstance(path, int) or isinstance(path, bool) or path < 0:
            raise BadAddress(f"1-dimensional path must be a natural, got {path!r}")
        return
    if not isinstance(path, tuple):
        raise BadAddress(f"{dimension}-dimensional path must be a tuple, got {path!r}")
    for component in path:
        _check_path(dimension - 1, component)


def _path_key(dimension, path):
    """Canonical order: by length, then lexicographically by component keys."""
    if dimension <= 1:
        return path
    return (len(path), tuple(_path_key(dimension - 1, c) for c in path))


@dataclass(frozen=True)
class Address:
    """A node address in a d-dimensional manifold.

    The path is a natural at d=1 (count of unary steps) and a tuple of
    (d-1)-dimensional paths at d>=2.  The empty path is the root at every
    dimension (0 at d=1, () above).
    """

    dimension: int
    path: object

    def __post_init__(self):
        if self.dimension not in (0, 1, 2, 3):
            raise BadAddress(f"dimension must be 0..3, got {self.dimension}")
        _check_path(self.dimension, self.path)

    @property
    def length(self):
        return self.path if self.dimension == 1 else len(self.path) if self.dimension >= 2 else 0

    def sort_key(self):
        return _path_key(self.dimension, self.path)

    def parent(self):
        """Immediate prefix at the major dimension, or None for the root."""
        d = self.dimension
        if d == 1:
            return Address(1, self.path - 1) if self.path > 0 else None
        if d >= 2 and self.path:
            return Address(d, self.path[:-1])
        return None

    def extend(self, component):
        """Append one (d-1)-dimensional component (the child at that slot)."""
        d = self.dimension
        if d == 1:
            return Address(1, self.path + 1)
        return Address(d, self.path + (component.path,))

    def last(self):
        """Final component as a (d-1)-dimensional Address."""
        if self.dimension < 2 or not self.path:
            raise BadAddress(f"{self} has no last component")
        return Address(self.dimension - 1, self.path[-1])

    def is_root(self):
        return self.length == 0

    def __repr__(self):
        return f"@{self.dimension}:{self.path}"


def root(dimension):
    if dimension == 0:
        return Address(0, POINT_PATH)
    return Address(1, 0) if dimension == 1 else Address(dimension, ())


def _closure_requirement(i, addr):
    """The one address whose absence breaks dimension-i closure at `addr`.

    Returns None when `addr` is a dimension-i root (nothing required).
    For i equal to the address dimension this is the major prefix; below
    that it rewrites the innermost components.
    """
    d = addr.dimension
    if i == d:
        if d == 1:
            return Address(1, addr.path - 1) if addr.path > 0 else None
        return Address(d, addr.path[:-1]) if addr.path else None
    # i < d: requirement acts on the last component
    if d == 1 or not addr.path:
        return None
    inner = _closure_requirement(i, Address(d - 1, addr.path[-1]))
    if inner is None:
        return None
    return Address(d, addr.path[:-1] + (inner.path,))


_TM_CACHE = {}


@dataclass(frozen=True)
class TreeManifold:
    """A validated, immutable d-TM.  Construct through `validate` or `of`."""

    dimension: int
    nodes: frozenset
    _sorted: tuple = field(default=None, compare=False, repr=False)

    @staticmethod
    def of(dimension, addresses):
        nodes = frozenset(
            a if isinstance(a, Address) else Address(dimension, a) for a in addresses
        )
        key = (dimension, nodes)
        cached = _TM_CACHE.get(key)
        if cached is not None:
            return cached
        tm = validate(dimension, nodes)
        _TM_CACHE[key] = tm
        return tm

    @property
    def sorted_nodes(self):
        if self._sorted is None:
            ordered = tuple(sorted(self.nodes, key=Address.sort_key))
            object.__setattr__(self, "_sorted", ordered)
        return self._sorted

    def __len__(self):
        return len(self.nodes)

    def __contains__(self, address):
        return address in self.nodes

    def is_empty(self):
        return not self.nodes

    @property
    def root(self):
        if not self.nodes:
            raise NodeAbsent("empty manifold has no root")
        return root(self.dimension)

    def __repr__(self):
        inner = ", ".join(str(a.path) for a in self.sorted_nodes)
        return f"TM{self.dimension}{{{inner}}}"


def empty(dimension):
    return TreeManifold.of(dimension, ())


def validate(dimension, addresses):
    """Check hereditary prefix closure and return the manifold.

    The check walks nodes in canonical order and, per node, dimensions
    1..d innermost-out, so the reported `ClosureViolation` identifies the
    first missing sibling/prefix in that order.
    """
    nodes = frozenset(
        a if isinstance(a, Address) else Address(dimension, a) for a in addresses
    )
    for a in nodes:
        if a.dimension != dimension:
            raise BadAddress(f"{a} does not have dimension {dimension}")
    for a in sorted(nodes, key=Address.sort_key):
        for i in range(1, dimension + 1):
            need = _closure_requirement(i, a)
            if need is not None and need not in nodes:
                raise ClosureViolation(need, i)
    return TreeManifold(dimension, nodes)


def children(tm, p):
    """Child structure of node `p`: the (d-1)-TM of slots expanding it."""
    if isinstance(p, Address):
        addr = p
    else:
        addr = Address(tm.dimension, p)
    if addr not in tm.nodes:
        raise NodeAbsent(f"{addr} not in manifold")
    d = tm.dimension
    if d == 0:
        raise UnsupportedDimension("points have no child structure")
    if d == 1:
        slots = (Address(0, POINT_PATH),) if Address(1, addr.path + 1) in tm.nodes else ()
        return TreeManifold.of(0, slots)
    plen = len(addr.path)
    slots = [
        Address(d - 1, q.path[-1])
        for q in tm.nodes
        if len(q.path) == plen + 1 and q.path[:plen] == addr.path
    ]
    return TreeManifold.of(d - 1, slots)


_LTM_CACHE = {}


@dataclass(frozen=True)
class LabeledTM:
    """A tree manifold with a total node->symbol labeling.

    `items` is the canonical (address, label) tuple; a plain dict view is
    cached for lookups.  Used both for subject structures (symbol labels)
    and automaton transition patterns (state labels).
    """

    shape: TreeManifold
    items: tuple
    _map: dict = field(default=None, compare=False, repr=False)

    @staticmethod
    def of(shape, labels):
        if not isinstance(shape, TreeManifold):
            raise BadAddress("shape must be a TreeManifold")
        mapping = {}
        for a, v in (labels.items() if isinstance(labels, dict) else labels):
            if not isinstance(a, Address):
                a = Address(shape.dimension, a)
            mapping[a] = v
        if set(mapping) != set(shape.nodes):
            missing = set(shape.nodes) - set(mapping)
            extra = set(mapping) - set(shape.nodes)
            raise NodeAbsent(f"labeling not total: missing={missing} extra={extra}")
        items = tuple((a, mapping[a]) for a in shape.sorted_nodes)
        key = (shape, items)
        cached = _LTM_CACHE.get(key)
        if cached is not None:
            return cached
        ltm = LabeledTM(shape, items)
        _LTM_CACHE[key] = ltm
        return ltm

    @property
    def labels(self):
        if self._map is None:
            object.__setattr__(self, "_map", dict(self.items))
        return self._map

    @property
    def dimension(self):
        return self.shape.dimension

    def label(self, address):
        try:
            return self.labels[address]
        except KeyError:
            raise NodeAbsent(f"{address} not in manifold") from None

    def __len__(self):
        return len(self.shape)

    def relabel(self, fn):
        return LabeledTM.of(self.shape, {a: fn(v) for a, v in self.items})

    def __repr__(self):
        inner = ", ".join(f"{a.path}:{v}" for a, v in self.items)
        return f"LTM{self.dimension}{{{inner}}}"


def empty_pattern(dimension):
    return LabeledTM.of(empty(dimension), {})


def labeled_children(lt, p):
    """Labeled child structure: slot w carries the label of p.(w)."""
    if not isinstance(p, Address):
        p = Address(lt.dimension, p)
    shape = children(lt.shape, p)
    d = lt.dimension
    if d == 1:
        labels = {s: lt.label(Address(1, p.path + 1)) for s in shape.nodes}
    else:
        labels = {s: lt.label(Address(d, p.path + (s.path,))) for s in shape.nodes}
    return LabeledTM.of(shape, labels)


# --- metrics ------------------------------------------------------------------

def depth(tm):
    """Length of the longest major-dimension chain below the root."""
    if not tm.nodes:
        return 0
    return max(a.length for a in tm.nodes)


def levels(tm):
    """Node count of the longest major chain (0 for the empty manifold)."""
    return 0 if tm.is_empty() else depth(tm) + 1


def branching_factor(tm):
    """Size bound of the embedded lower-dimensional structures.

    Calibrated so that the complete shapes have branching exactly n:
    at d=1 the string itself is measured (its node count); at d>=2 it is
    the largest levels/branching over all child structures.  The major
    chain of a 2- or 3-TM is not itself counted.
    """
    d = tm.dimension
    if d == 0:
        return 0
    if d == 1:
        return levels(tm)
    return max((embed_bound(children(tm, p)) for p in tm.nodes), default=0)


def embed_bound(tm):
    """Least n such that `tm` can appear as a child structure at bound n."""
    if tm.dimension == 0:
        return 0
    return max(levels(tm), branching_factor(tm))


def child_bound(tm):
    """Largest embed_bound over all child structures (run-time branching)."""
    if tm.dimension == 0:
        return 0
    return max((embed_bound(children(tm, p)) for p in tm.nodes), default=0)


def complete(d, n):
    """The complete n-branching d-TM for d<=2 (used as padding shapes).

    d=0 is the point; d=1 the n-position string; d=2 the n-level tree with
    n children at every internal node.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    if d == 0:
        return TreeManifold.of(0, (Address(0, POINT_PATH),))
    if d == 1:
        return TreeManifold.of(1, (Address(1, k) for k in range(n)))
    if d == 2:
        nodes = [()]
        frontier = [()]
        for _ in range(n - 1):
            frontier = [p + (k,) for p in frontier for k in range(n)]
            nodes.extend(frontier)
        return TreeManifold.of(2, (Address(2, p) for p in nodes))
    raise UnsupportedDimension("complete shapes are materialized only for d<=2")


# --- enumeration --------------------------------------------------------------

def _growth_points(tm):
    """Addresses whose addition keeps the manifold hereditarily closed."""
    d = tm.dimension
    if tm.is_empty():
        return [root(d)]
    if d == 0:
        return []
    if d == 1:
        return [Address(1, max(a.path for a in tm.nodes) + 1)]
    out = []
    for p in tm.nodes:
        for w in _growth_points(children(tm, p)):
            out.append(p.extend(w))
    return out


def _within_bound(tm, n):
    """Filter used by enumeration: top-level structures at d=3 bound only
    their embedded dimensions; at d<=2 the structure must itself embed."""
    if tm.dimension >= 3:
        return branching_factor(tm) <= n
    return embed_bound(tm) <= n


def enumerate_manifolds(d, n, max_nodes):
    """All d-TMs with branching within n and at most max_nodes nodes.

    Yields each shape exactly once, ordered by node count and then by the
    canonical order of the sorted address list.
    """
    current = {empty(d)}
    seen = set(current)
    for size in range(0, max_nodes + 1):
        batch = sorted(
            (tm for tm in current if len(tm) == size),
            key=lambda t: tuple(a.sort_key() for a in t.sorted_nodes),
        )
        yield from batch
        nxt = set()
        for tm in current:
            for a in _growth_points(tm):
                grown = TreeManifold.of(d, tm.nodes | {a})
                if grown not in seen and _within_bound(grown, n):
                    seen.add(grown)
                    nxt.add(grown)
        current = nxt
        if not current:
            return


# --- immediate predecessor relations -----------------------------------------

def pred(i, x, y):
    """Immediate predecessor at dimension i, literal reading.

    At the major dimension y extends x by exactly one component; below it
    the last components are rewritten.  At dimension 1 the displayed
    clause admits any positive step (right siblings at any distance);
    `pred_immediate` restricts that to a single step.
    """
    return _pred(i, x, y, immediate=False)


def pred_immediate(i, x, y):
    """Variant of `pred` with the dimension-1 step fixed to one unit."""
    return _pred(i, x, y, immediate=True)


def _pred(i, x, y, immediate):
    if not isinstance(x, Address) or not isinstance(y, Address):
        raise BadAddress("pred expects Address values")
    if x.dimension != y.dimension:
        return False
    d = x.dimension
    if i < 1 or i > d:
        raise UnsupportedDimension(f"relation {i} undefined at dimension {d}")
    if d == 1:
        return y.path == x.path + 1 if immediate else y.path > x.path
    if i == d:
        return len(y.path) == len(x.path) + 1 and y.path[: len(x.path)] == x.path
    if not x.path or not y.path or len(x.path) != len(y.path):
        return False
    if x.path[:-1] != y.path[:-1]:
        return False
    return _pred(i, Address(d - 1, x.path[-1]), Address(d - 1, y.path[-1]), immediate)


# --- serialization -------------------------------------------------------------

def address_to_sexp(a):
    if a.dimension <= 1:
        return a.path
    return [address_to_sexp(Address(a.dimension - 1, c)) for c in a.path]


def address_from_sexp(dimension, form):
    if dimension <= 1:
        if not isinstance(form, int):
            raise BadAddress(f"expected a natural, got {form!r}")
        return Address(dimension, form)
    if not isinstance(form, list):
        raise BadAddress(f"expected a list, got {form!r}")
    return Address(
        dimension, tuple(address_from_sexp(dimension - 1, c).path for c in form)
    )


def tm_to_sexp(tm):
    body = [address_to_sexp(a) for a in tm.sorted_nodes]
    return ["tm", sexpr.Keyword("d"), tm.dimension, ["nodes"] + body]


def tm_from_sexp(form):
    if not (isinstance(form, list) and form and form[0] == "tm"):
        raise BadAddress(f"not a tm form: {form!r}")
    d = _plist(form).get("d")
    nodes_form = next(f for f in form if isinstance(f, list) and f and f[0] == "nodes")
    return validate(d, (address_from_sexp(d, n) for n in nodes_form[1:]))


def _plist(form):
    out = {}
    it = iter(form)
    for item in it:
        if isinstance(item, sexpr.Keyword):
            out[item.name] = next(it)
    return out


def _label_to_sexp(v):
    if isinstance(v, frozenset):
        return ["vs"] + sorted(v)
    return v


def _label_from_sexp(v):
    if isinstance(v, list) and v and v[0] == "vs":
        return frozenset(v[1:])
    return v


def ltm_to_sexp(lt, heads=None):
    """`(ltm :d D :sigma (...) (node ADDR LABEL [:head]) ...)`"""
    sigma = sorted({_hashable_str(v) for _, v in lt.items})
    out = ["ltm", sexpr.Keyword("d"), lt.dimension, sexpr.Keyword("sigma"), sigma]
    for a, v in lt.items:
        entry = ["node", address_to_sexp(a), _label_to_sexp(v)]
        if heads is not None and a in heads:
            entry.append(sexpr.Keyword("head"))
        out.append(entry)
    return out


def _hashable_str(v):
    return "{" + ",".join(sorted(v)) + "}" if isinstance(v, frozenset) else v


def ltm_from_sexp(form, with_heads=False):
    if not (isinstance(form, list) and form and form[0] == "ltm"):
        raise BadAddress(f"not an ltm form: {form!r}")
    d = _plist(form).get("d")
    labels = {}
    heads = set()
    for f in form:
        if isinstance(f, list) and f and f[0] == "node":
            a = address_from_sexp(d, f[1])
            labels[a] = _label_from_sexp(f[2])
            if any(isinstance(x, sexpr.Keyword) and x.name == "head" for x in f[3:]):
                heads.add(a)
    shape = validate(d, labels.keys())
    lt = LabeledTM.of(shape, labels)
    return (lt, frozenset(heads)) if with_heads else lt


def _addr_json(a):
    return a.path if a.dimension <= 1 else _nested_list(a.path)


def _nested_list(path):
    return [p if isinstance(p, int) else _nested_list(p) for p in path]


def _addr_from_json(dimension, value):
    if dimension <= 1:
        return Address(dimension, value)
    return Address(dimension, _nested_tuple(value))


def _nested_tuple(value):
    return tuple(v if isinstance(v, int) else _nested_tuple(v) for v in value)


def tm_to_json(tm):
    return _json.dumps(
        {"kind": "tm", "d": tm.dimension, "nodes": [_addr_json(a) for a in tm.sorted_nodes]}
    )


def tm_from_json(text):
    data = _json.loads(text)
    return validate(data["d"], (_addr_from_json(data["d"], v) for v in data["nodes"]))


def _label_json(v):
    return {"vs": sorted(v)} if isinstance(v, frozenset) else v


def _label_from_json(v):
    return frozenset(v["vs"]) if isinstance(v, dict) and "vs" in v else v


def ltm_to_json(lt, heads=None):
    nodes = [
        {
            "addr": _addr_json(a),
            "label": _label_json(v),
            **({"head": True} if heads is not None and a in heads else {}),
        }
        for a, v in lt.items
    ]
    return _json.dumps({"kind": "ltm", "d": lt.dimension, "nodes": nodes})


def ltm_from_json(text, with_heads=False):
    data = _json.loads(text)
    d = data["d"]
    labels = {}
    heads = set()
    for entry in data["nodes"]:
        a = _addr_from_json(d, entry["addr"])
        labels[a] = _label_from_json(entry["label"])
        if entry.get("head"):
            heads.add(a)
    lt = LabeledTM.of(validate(d, labels.keys()), labels)
    return (lt, frozenset(heads)) if with_heads else lt
