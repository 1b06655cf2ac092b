import pytest

from conftest import canonical_encodings, pred3_table_automaton

from treemso.automata import accepts, equivalent, is_empty
from treemso.errors import UnsupportedDimension
from treemso.manifold import Address, pred
from treemso.mso.atoms import atom_automaton
from treemso.mso.encoding import Assignment, Signature, encode_assignment, pad_once
from treemso.mso.syntax import Pred, Sub

SIG = Signature(2, 3)


def a3(*path):
    return Address(3, tuple(tuple(c) for c in path))


def _classes(t):
    xs = frozenset(a for a, v in t.items if "X" in v)
    ys = frozenset(a for a, v in t.items if "Y" in v)
    return xs, ys


def test_pred3_atom_equals_hand_entered_table():
    table, table_acc = pred3_table_automaton()
    aut, acc = atom_automaton(Pred(3, "X", "Y"), ("X", "Y"), SIG)
    same, witness = equivalent(aut, acc, table, table_acc)
    assert same, f"distinguishing structure: {witness!r}"


def test_pred3_atom_on_paper_shaped_encoding():
    aut, acc = atom_automaton(Pred(3, "X", "Y"), ("X", "Y"), SIG)
    enc = encode_assignment(Assignment.of(sets={"X": [a3()], "Y": [a3(())]}), SIG)
    assert accepts(aut, acc, enc.structure)
    swapped = encode_assignment(Assignment.of(sets={"Y": [a3()], "X": [a3(())]}), SIG)
    assert not accepts(aut, acc, swapped.structure)


@pytest.mark.parametrize("i", [1, 2, 3])
def test_pred_atoms_agree_with_concrete_relation_on_encodings(i):
    aut, acc = atom_automaton(Pred(i, "X", "Y"), ("X", "Y"), SIG)
    for t in canonical_encodings(("X", "Y"), SIG, 7):
        xs, ys = _classes(t)
        expected = (
            len(xs) == 1 and len(ys) == 1 and pred(i, next(iter(xs)), next(iter(ys)))
        )
        assert accepts(aut, acc, t) == expected, (i, t)


def test_subset_atom_reflexive_accepts_every_canonical_encoding():
    aut, acc = atom_automaton(Sub("X", "X"), ("X", "Y"), SIG)
    for t in canonical_encodings(("X", "Y"), SIG, 7):
        assert accepts(aut, acc, t)


def test_subset_atom_checks_containment():
    aut, acc = atom_automaton(Sub("X", "Y"), ("X", "Y"), SIG)
    for t in canonical_encodings(("X", "Y"), SIG, 4):
        xs, ys = _classes(t)
        assert accepts(aut, acc, t) == (xs <= ys)


def test_pred_atom_same_variable_is_empty():
    aut, acc = atom_automaton(Pred(3, "X", "X"), ("X",), SIG)
    verdict, _ = is_empty(aut, acc)
    assert verdict


def test_pred_atom_rejects_above_dimension():
    with pytest.raises(UnsupportedDimension):
        atom_automaton(Pred(3, "X", "Y"), ("X", "Y"), Signature(2, 2))


def test_atoms_insensitive_to_padding():
    cases = [
        (Pred(3, "X", "Y"), Assignment.of(sets={"X": [a3()], "Y": [a3(())]})),
        (Pred(2, "X", "Y"), Assignment.of(sets={"X": [a3(())], "Y": [a3((0,))]})),
        (Pred(1, "X", "Y"), Assignment.of(sets={"X": [a3((0,))], "Y": [a3((1,))]})),
        (Sub("X", "Y"), Assignment.of(sets={"X": [a3()], "Y": [a3()]})),
    ]
    for atom, assignment in cases:
        aut, acc = atom_automaton(atom, ("X", "Y"), SIG)
        enc = encode_assignment(assignment, SIG)
        verdict = accepts(aut, acc, enc.structure)
        grown = enc
        for _ in range(3):
            grown = pad_once(grown, SIG)
            assert accepts(aut, acc, grown.structure) == verdict


def test_pred_atoms_at_dimension_2():
    sig = Signature(2, 2)
    a2 = lambda *p: Address(2, tuple(p))
    for i, xs, ys, expected in [
        (2, [a2()], [a2(0)], True),
        (2, [a2(0)], [a2()], False),
        (1, [a2(0)], [a2(1)], True),
        (1, [a2(1)], [a2(0)], False),
    ]:
        aut, acc = atom_automaton(Pred(i, "X", "Y"), ("X", "Y"), sig)
        enc = encode_assignment(Assignment.of(sets={"X": xs, "Y": ys}), sig)
        assert accepts(aut, acc, enc.structure) == expected


def test_pred1_atom_at_dimension_1_literal_gap():
    sig = Signature(1, 1)
    a1 = lambda k: Address(1, k)
    aut, acc = atom_automaton(Pred(1, "X", "Y"), ("X", "Y"), sig)
    near = encode_assignment(Assignment.of(sets={"X": [a1(0)], "Y": [a1(1)]}), sig)
    far = encode_assignment(Assignment.of(sets={"X": [a1(0)], "Y": [a1(3)]}), sig)
    wrong = encode_assignment(Assignment.of(sets={"X": [a1(2)], "Y": [a1(0)]}), sig)
    assert accepts(aut, acc, near.structure)
    assert accepts(aut, acc, far.structure)
    assert not accepts(aut, acc, wrong.structure)
