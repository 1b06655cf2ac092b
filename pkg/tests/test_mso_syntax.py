import pytest

from treemso.errors import FormulaSyntaxError, SortError, UnguardedQuantifier
from treemso.mso.syntax import (
    And,
    Eq,
    Exists,
    Forall,
    Imp,
    In,
    Not,
    Or,
    Pred,
    Sub,
    first_unguarded,
    formula_to_sexp,
    free_vars,
    parse_formula,
)
from treemso import sexpr


def test_parse_closed_set_formula():
    f = parse_formula("(Eset X (sub X X))")
    assert f == Exists("X", Sub("X", "X"))
    assert free_vars(f) == frozenset()


def test_parse_closed_fo_formula():
    f = parse_formula("(E x (E y (pred3 x y)))")
    assert free_vars(f) == frozenset()


def test_free_vars_of_atom():
    assert free_vars(parse_formula("(pred3 x y)")) == {"x", "y"}


def test_sort_errors():
    with pytest.raises(SortError):
        parse_formula("(pred3 x Y)")
    with pytest.raises(SortError):
        parse_formula("(in x X)")
    with pytest.raises(SortError):
        parse_formula("(eq X Y)")
    with pytest.raises(SortError):
        parse_formula("(E X (sub X X))")


def test_syntax_errors_have_positions():
    with pytest.raises(FormulaSyntaxError):
        parse_formula("(and)")
    with pytest.raises(FormulaSyntaxError):
        parse_formula("(pred3 x")


def test_sugar_expands_to_core():
    f = parse_formula("(empty X)")
    assert isinstance(f, Forall)
    g = parse_formula("(singleton Y)")
    names = free_vars(g)
    assert names == {"Y"}


def test_round_trip_print_parse():
    texts = [
        "(and (sub X Y) (not (sub Y X)))",
        "(A x (imp (in X x) (E y (and (in X y) (pred1 x y)))))",
        "(iff (Eset Z (sub Z X)) (sub X X))",
    ]
    for text in texts:
        f = parse_formula(text)
        again = parse_formula(sexpr.unparse(formula_to_sexp(f)))
        assert again == f


def test_guard_detection():
    guarded = parse_formula("(E x (and (in X x) (pred3 x x)))")
    assert first_unguarded(guarded) is None
    unguarded = parse_formula("(E x (pred3 x x))")
    assert first_unguarded(unguarded) == "x"
    forall = parse_formula("(A y (imp (in D y) (eq y y)))")
    assert first_unguarded(forall) is None
    bad_forall = parse_formula("(A y (eq y y))")
    assert first_unguarded(bad_forall) == "y"
