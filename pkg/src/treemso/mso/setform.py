"""Reduction to formulas over set variables only.

The output uses only the predicates `sub` and set-level `pred`; each
first-order variable becomes a fresh set variable under an expanded
singleton guard, equality becomes mutual inclusion, and membership
becomes inclusion of the variable's singleton set.
"""

from __future__ import annotations

from ..errors import SortError
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
    all_var_names,
    free_vars,
    is_set_var,
    singleton_formula,
)


def to_set_form(phi):
    formula, _ = to_set_form_with_map(phi)
    return formula


def to_set_form_with_map(phi):
    """Also returns the first-order-name -> set-name renaming used."""
    used = set(all_var_names(phi))

    def fresh(base):
        name = "X" + base
        while name in used:
            name += "_"
        used.add(name)
        return name

    def guard(name):
        return singleton_formula(name, used)

    def go(f, env):
        if isinstance(f, Pred):
            if is_set_var(f.a):
                return f
            a, b = env[f.a], env[f.b]
            return And((guard(a), guard(b), Pred(f.i, a, b)))
        if isinstance(f, Eq):
            a, b = env[f.a], env[f.b]
            return And((Sub(a, b), Sub(b, a)))
        if isinstance(f, In):
            return Sub(env[f.elem], f.set)
        if isinstance(f, Sub):
            return f
        if isinstance(f, Not):
            return Not(go(f.body, env))
        if isinstance(f, And):
            return And(tuple(go(p, env) for p in f.parts))
        if isinstance(f, Or):
            return Or(tuple(go(p, env) for p in f.parts))
        if isinstance(f, Imp):
            return Imp(go(f.left, env), go(f.right, env))
        if isinstance(f, Iff):
            return Iff(go(f.left, env), go(f.right, env))
        if isinstance(f, Exists):
            if is_set_var(f.var):
                return Exists(f.var, go(f.body, env))
            name = fresh(f.var)
            body = go(f.body, {**env, f.var: name})
            return Exists(name, And((guard(name), body)))
        if isinstance(f, Forall):
            if is_set_var(f.var):
                return Forall(f.var, go(f.body, env))
            name = fresh(f.var)
            body = go(f.body, {**env, f.var: name})
            return Forall(name, Imp(guard(name), body))
        raise TypeError(f"not a formula: {f!r}")

    free_fo = sorted(v for v in free_vars(phi) if not is_set_var(v))
    renaming = {v: fresh(v) for v in free_fo}
    body = go(phi, dict(renaming))
    if renaming:
        guards = tuple(guard(renaming[v]) for v in free_fo)
        body = And(guards + (body,))
    _assert_set_only(body)
    return body, renaming


def _assert_set_only(f):
    if isinstance(f, Pred):
        if not (is_set_var(f.a) and is_set_var(f.b)):
            raise SortError(f.a, "set-form output contains a first-order atom")
        return
    if isinstance(f, Sub):
        return
    if isinstance(f, (Eq, In)):
        raise SortError(getattr(f, "a", getattr(f, "elem", "?")), "unreduced atom")
    if isinstance(f, Not):
        return _assert_set_only(f.body)
    if isinstance(f, (And, Or)):
        for p in f.parts:
            _assert_set_only(p)
        return
    if isinstance(f, (Imp, Iff)):
        _assert_set_only(f.left)
        _assert_set_only(f.right)
        return
    if isinstance(f, (Exists, Forall)):
        if not is_set_var(f.var):
            raise SortError(f.var, "set-form output binds a first-order variable")
        return _assert_set_only(f.body)
    raise TypeError(f"not a formula: {f!r}")
