"""Formula ASTs and the prefix S-expression reader.

Variables are plain names: lowercase initial = individual (first-order),
uppercase initial = finite-set.  The surface grammar:

    (and f ...) (or f ...) (not f) (imp f g) (iff f g)
    (E x f) (A x f) (Eset X f) (Aset X f)
    (pred1|pred2|pred3 a b)   -- same-sort arguments; set-level means both
                                 sets are singletons whose elements relate
    (eq x y) (in X x) (sub X Y)
    (empty X) (singleton X)   -- sugar, expanded at parse time

ASTs are frozen and hashable; parse errors carry source positions.
"""

from __future__ import annotations

from dataclasses import dataclass

from .. import sexpr
from ..errors import FormulaSyntaxError, SortError


def is_set_var(name):
    return bool(name) and name[0].isupper()


@dataclass(frozen=True)
class Pred:
    i: int
    a: str
    b: str


@dataclass(frozen=True)
class Eq:
    a: str
    b: str


@dataclass(frozen=True)
class In:
    set: str
    elem: str


@dataclass(frozen=True)
class Sub:
    a: str
    b: str


@dataclass(frozen=True)
class Not:
    body: object


@dataclass(frozen=True)
class And:
    parts: tuple


@dataclass(frozen=True)
class Or:
    parts: tuple


@dataclass(frozen=True)
class Imp:
    left: object
    right: object


@dataclass(frozen=True)
class Iff:
    left: object
    right: object


@dataclass(frozen=True)
class Exists:
    var: str
    body: object


@dataclass(frozen=True)
class Forall:
    var: str
    body: object


def conj(parts):
    parts = tuple(parts)
    return parts[0] if len(parts) == 1 else And(parts)


def disj(parts):
    parts = tuple(parts)
    return parts[0] if len(parts) == 1 else Or(parts)


def _expect_var(form, want_set, context):
    if not isinstance(form, str):
        raise FormulaSyntaxError(f"{context}: expected a variable, got {form!r}")
    if is_set_var(form) != want_set:
        raise SortError(form, f"{context}: {form!r} has the wrong sort")
    return form


def empty_formula(x, avoid=()):
    """Definable emptiness: every subset of X contains X."""
    y = _fresh_upper({x, *avoid})
    return Forall(y, Imp(Sub(y, x), Sub(x, y)))


def singleton_formula(x, avoid=()):
    """Definable singleton-ness via subsets: empty or the whole of X."""
    y = _fresh_upper({x, *avoid})
    return Forall(y, Imp(Sub(y, x), Or((empty_formula(y, {x, y, *avoid}), Sub(x, y)))))


def _fresh_upper(avoid):
    candidates = ("Y", "Z", "W", "V", "U")
    for c in candidates:
        if c not in avoid:
            return c
    base = "Y"
    while base in avoid:
        base += "_"
    return base


def parse_formula(text):
    """Parse the surface grammar into an AST."""
    return _build(sexpr.parse(text))


def _build(form):
    if not isinstance(form, list) or not form:
        raise FormulaSyntaxError(f"expected a formula, got {form!r}")
    head = form[0]
    args = form[1:]
    if head in ("pred1", "pred2", "pred3"):
        _arity(form, 2)
        a, b = args
        if not isinstance(a, str) or not isinstance(b, str):
            raise FormulaSyntaxError(f"pred arguments must be variables: {form!r}")
        if is_set_var(a) != is_set_var(b):
            raise SortError(b, "pred arguments must share a sort")
        return Pred(int(head[-1]), a, b)
    if head == "eq":
        _arity(form, 2)
        return Eq(_expect_var(args[0], False, "eq"), _expect_var(args[1], False, "eq"))
    if head == "in":
        _arity(form, 2)
        return In(_expect_var(args[0], True, "in"), _expect_var(args[1], False, "in"))
    if head == "sub":
        _arity(form, 2)
        return Sub(_expect_var(args[0], True, "sub"), _expect_var(args[1], True, "sub"))
    if head == "not":
        _arity(form, 1)
        return Not(_build(args[0]))
    if head == "and":
        if not args:
            raise FormulaSyntaxError("(and) needs at least one conjunct")
        return And(tuple(_build(a) for a in args))
    if head == "or":
        if not args:
            raise FormulaSyntaxError("(or) needs at least one disjunct")
        return Or(tuple(_build(a) for a in args))
    if head == "imp":
        _arity(form, 2)
        return Imp(_build(args[0]), _build(args[1]))
    if head == "iff":
        _arity(form, 2)
        return Iff(_build(args[0]), _build(args[1]))
    if head in ("E", "A"):
        _arity(form, 2)
        var = _expect_var(args[0], False, head)
        body = _build(args[1])
        return Exists(var, body) if head == "E" else Forall(var, body)
    if head in ("Eset", "Aset"):
        _arity(form, 2)
        var = _expect_var(args[0], True, head)
        body = _build(args[1])
        return Exists(var, body) if head == "Eset" else Forall(var, body)
    if head == "empty":
        _arity(form, 1)
        return empty_formula(_expect_var(args[0], True, "empty"))
    if head == "singleton":
        _arity(form, 1)
        return singleton_formula(_expect_var(args[0], True, "singleton"))
    raise FormulaSyntaxError(f"unknown operator {head!r}")


def _arity(form, k):
    if len(form) != k + 1:
        raise FormulaSyntaxError(f"{form[0]} expects {k} arguments, got {len(form) - 1}")


def formula_to_sexp(f):
    if isinstance(f, Pred):
        return [f"pred{f.i}", f.a, f.b]
    if isinstance(f, Eq):
        return ["eq", f.a, f.b]
    if isinstance(f, In):
        return ["in", f.set, f.elem]
    if isinstance(f, Sub):
        return ["sub", f.a, f.b]
    if isinstance(f, Not):
        return ["not", formula_to_sexp(f.body)]
    if isinstance(f, And):
        return ["and"] + [formula_to_sexp(p) for p in f.parts]
    if isinstance(f, Or):
        return ["or"] + [formula_to_sexp(p) for p in f.parts]
    if isinstance(f, Imp):
        return ["imp", formula_to_sexp(f.left), formula_to_sexp(f.right)]
    if isinstance(f, Iff):
        return ["iff", formula_to_sexp(f.left), formula_to_sexp(f.right)]
    if isinstance(f, Exists):
        return ["Eset" if is_set_var(f.var) else "E", f.var, formula_to_sexp(f.body)]
    if isinstance(f, Forall):
        return ["Aset" if is_set_var(f.var) else "A", f.var, formula_to_sexp(f.body)]
    raise TypeError(f"not a formula: {f!r}")


def free_vars(f):
    if isinstance(f, Pred):
        return frozenset({f.a, f.b})
    if isinstance(f, Eq):
        return frozenset({f.a, f.b})
    if isinstance(f, In):
        return frozenset({f.set, f.elem})
    if isinstance(f, Sub):
        return frozenset({f.a, f.b})
    if isinstance(f, Not):
        return free_vars(f.body)
    if isinstance(f, (And, Or)):
        out = frozenset()
        for p in f.parts:
            out |= free_vars(p)
        return out
    if isinstance(f, (Imp, Iff)):
        return free_vars(f.left) | free_vars(f.right)
    if isinstance(f, (Exists, Forall)):
        return free_vars(f.body) - {f.var}
    raise TypeError(f"not a formula: {f!r}")


def all_var_names(f):
    """Every name occurring anywhere, bound or free."""
    if isinstance(f, Pred):
        return {f.a, f.b}
    if isinstance(f, Eq):
        return {f.a, f.b}
    if isinstance(f, In):
        return {f.set, f.elem}
    if isinstance(f, Sub):
        return {f.a, f.b}
    if isinstance(f, Not):
        return all_var_names(f.body)
    if isinstance(f, (And, Or)):
        out = set()
        for p in f.parts:
            out |= all_var_names(p)
        return out
    if isinstance(f, (Imp, Iff)):
        return all_var_names(f.left) | all_var_names(f.right)
    if isinstance(f, (Exists, Forall)):
        return {f.var} | all_var_names(f.body)
    raise TypeError(f"not a formula: {f!r}")


def _conjuncts(f):
    return f.parts if isinstance(f, And) else (f,)


def fo_guard_of(f):
    """The set variable guarding a first-order quantifier body, or None.

    An existential body must conjoin (in G x); a universal body must be an
    implication whose antecedent conjoins it.
    """
    if isinstance(f, Exists):
        pool = _conjuncts(f.body)
    elif isinstance(f, Forall) and isinstance(f.body, Imp):
        pool = _conjuncts(f.body.left)
    else:
        return None
    for part in pool:
        if isinstance(part, In) and part.elem == f.var:
            return part.set
    return None


def first_unguarded(f):
    """First first-order quantified variable without a domain guard."""
    if isinstance(f, (Exists, Forall)):
        if not is_set_var(f.var) and fo_guard_of(f) is None:
            return f.var
        return first_unguarded(f.body)
    if isinstance(f, Not):
        return first_unguarded(f.body)
    if isinstance(f, (And, Or)):
        for p in f.parts:
            v = first_unguarded(p)
            if v is not None:
                return v
        return None
    if isinstance(f, (Imp, Iff)):
        return first_unguarded(f.left) or first_unguarded(f.right)
    return None
