"""Direct recursive evaluation over a finite structure.

Quantifiers range over the structure's node set (first-order) and its
finite powerset (set variables) -- exponential, so this is an oracle,
not a decision path.  First-order quantifiers must be domain-guarded
(`(E x (and (in G x) ...))` / `(A x (imp (in G x) ...))`); guarding is
what keeps finite evaluation faithful to the infinite background
structure, so unguarded ones are rejected.
"""

from __future__ import annotations

import itertools

from ..errors import UnguardedQuantifier
from ..manifold import LabeledTM, TreeManifold, pred
from .encoding import Assignment
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
    first_unguarded,
    free_vars,
    is_set_var,
)

__all__ = ["model_check"]


def model_check(phi, structure, assignment, require_guards=True):
    """Satisfaction of `phi` over the structure's nodes under `assignment`."""
    if require_guards:
        bad = first_unguarded(phi)
        if bad is not None:
            raise UnguardedQuantifier(bad)
    if isinstance(structure, LabeledTM):
        domain = structure.shape.nodes
    elif isinstance(structure, TreeManifold):
        domain = structure.nodes
    else:
        domain = frozenset(structure)
    env = assignment.env() if isinstance(assignment, Assignment) else dict(assignment)
    ordered = sorted(domain, key=lambda a: a.sort_key())
    info = {}

    def index(f):
        key = id(f)
        if key not in info:
            if isinstance(f, (And, Or)):
                for p in f.parts:
                    index(p)
            elif isinstance(f, (Imp, Iff)):
                index(f.left)
                index(f.right)
            elif isinstance(f, (Not, Exists, Forall)):
                index(f.body)
            info[key] = tuple(sorted(free_vars(f)))
        return info[key]

    index(phi)
    memo = {}

    def ev(f, env):
        fv = info[id(f)]
        key = (id(f), tuple(env[v] for v in fv))
        hit = memo.get(key)
        if hit is None:
            hit = _ev(f, env)
            memo[key] = hit
        return hit

    def _ev(f, env):
        if isinstance(f, Pred):
            a, b = env[f.a], env[f.b]
            if is_set_var(f.a):
                if len(a) != 1 or len(b) != 1:
                    return False
                a, b = next(iter(a)), next(iter(b))
            return pred(f.i, a, b)
        if isinstance(f, Eq):
            return env[f.a] == env[f.b]
        if isinstance(f, In):
            return env[f.elem] in env[f.set]
        if isinstance(f, Sub):
            return env[f.a] <= env[f.b]
        if isinstance(f, Not):
            return not ev(f.body, env)
        if isinstance(f, And):
            return all(ev(p, env) for p in f.parts)
        if isinstance(f, Or):
            return any(ev(p, env) for p in f.parts)
        if isinstance(f, Imp):
            return not ev(f.left, env) or ev(f.right, env)
        if isinstance(f, Iff):
            return ev(f.left, env) == ev(f.right, env)
        if isinstance(f, Exists):
            return any(ev(f.body, {**env, f.var: v}) for v in _range(f.var))
        if isinstance(f, Forall):
            return all(ev(f.body, {**env, f.var: v}) for v in _range(f.var))
        raise TypeError(f"not a formula: {f!r}")

    def _range(var):
        if is_set_var(var):
            return _subsets()
        return ordered

    def _subsets():
        for r in range(len(ordered) + 1):
            for combo in itertools.combinations(ordered, r):
                yield frozenset(combo)

    for f in _walk(phi):
        info.setdefault(id(f), tuple(sorted(free_vars(f))))
    return ev(phi, env)


def _walk(f):
    yield f
    if isinstance(f, (And, Or)):
        for p in f.parts:
            yield from _walk(p)
    elif isinstance(f, (Imp, Iff)):
        yield from _walk(f.left)
        yield from _walk(f.right)
    elif isinstance(f, (Not, Exists, Forall)):
        yield from _walk(f.body)
