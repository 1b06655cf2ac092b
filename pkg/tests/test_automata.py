import random

import pytest

from conftest import all_labelings, brute_accepts, random_automaton, structure_corpus

from treemso import sexpr
from treemso.errors import (
    AlphabetMismatch,
    BranchingMismatch,
    DimensionMismatch,
    ExplosionGuard,
    NotSurjective,
    PartialMap,
)
from treemso.automata import (
    Alphabet,
    Automaton,
    accepts,
    aut_from_json,
    aut_from_sexp,
    aut_to_json,
    aut_to_sexp,
    canonical_renamed,
    complement,
    cylindrify,
    determinize,
    equivalent,
    find_run,
    intersect,
    is_empty,
    materialize,
    pattern_shapes,
    possible_states,
    project,
    run_is_licensed,
    trim,
    union,
)
from treemso.limits import GuardConfig
from treemso.manifold import Address, LabeledTM, TreeManifold, complete, empty_pattern, validate


def leaf3(symbol="a"):
    shape = validate(3, [Address(3, ())])
    return LabeledTM.of(shape, {Address(3, ()): symbol})


def single_rule_automaton():
    eps = empty_pattern(2)
    return (
        Automaton.of(3, 2, Alphabet.of(("a", "b")), {0}, [("a", 0, eps)]),
        frozenset({0}),
    )


def test_leaf_rule_possible_states():
    a, acc = single_rule_automaton()
    t = leaf3("a")
    assert possible_states(a, t)[t.shape.root] == {0}
    assert accepts(a, acc, t)
    assert not accepts(a, acc, leaf3("b"))


def test_accepts_matches_run_enumeration_on_small_structures():
    rng = random.Random(7)
    corpus = structure_corpus(3, 2, ("a", "b"), 4)
    for _ in range(12):
        a, acc = random_automaton(rng)
        for t in rng.sample(corpus, 25):
            assert accepts(a, acc, t) == brute_accepts(a, acc, t)


def test_possible_states_match_run_enumeration_per_node():
    # states at a node are exactly the root states of runs of the sub-structure
    rng = random.Random(3)
    corpus = structure_corpus(3, 2, ("a", "b"), 4)
    from conftest import enumerate_runs

    for _ in range(6):
        a, _ = random_automaton(rng)
        for t in rng.sample(corpus, 10):
            ps = possible_states(a, t)
            achievable = {s: set() for s in t.shape.nodes}
            for r in enumerate_runs(a, t):
                for s, q in r.assignment:
                    achievable[s].add(q)
            root = t.shape.root
            assert ps[root] == frozenset(achievable[root])


def test_find_run_is_licensed_and_accepting():
    rng = random.Random(11)
    corpus = structure_corpus(3, 2, ("a", "b"), 5)
    found = 0
    for _ in range(10):
        a, acc = random_automaton(rng)
        for t in rng.sample(corpus, 20):
            r = find_run(a, acc, t)
            if r is not None:
                found += 1
                assert run_is_licensed(a, r)
                assert r.root_state() in acc
    assert found > 0


def test_determinize_agrees_and_is_singleton():
    rng = random.Random(19)
    corpus = structure_corpus(3, 2, ("a", "b"), 5)
    for _ in range(15):
        a, acc = random_automaton(rng)
        det = determinize(a)
        for t in rng.sample(corpus, 20):
            assert det.accepts(acc, t) == accepts(a, acc, t)
            states = det.run(t)
            ps = possible_states(a, t)
            assert all(states[s] == ps[s] for s in t.shape.nodes)


def test_determinize_deterministic_input_lifts_to_singletons():
    a, acc = single_rule_automaton()
    det = determinize(a)
    t = leaf3("a")
    assert det.run(t)[t.shape.root] == frozenset({0})


def test_materialize_round_trip_language():
    rng = random.Random(23)
    corpus = structure_corpus(3, 2, ("a", "b"), 5)
    for _ in range(8):
        a, acc = random_automaton(rng)
        subset, subset_acc = materialize(determinize(a), acc)
        for t in rng.sample(corpus, 20):
            assert accepts(subset, subset_acc, t) == accepts(a, acc, t)
            # subset automaton assigns exactly one state per node
            ps = possible_states(subset, t)
            assert all(len(v) == 1 for v in ps.values())


def test_materialize_counts_for_string_patterns():
    # d=2 automaton with n=2: pattern domain is the 3 string shapes, so a
    # 2-state subset automaton has at most |Sigma| * (1 + 2 + 4) rules per
    # reachable-state count 2; with full reachability that bound is exact.
    alphabet = Alphabet.of(("a",))
    eps = empty_pattern(1)
    one = LabeledTM.of(validate(1, [Address(1, 0)]), {Address(1, 0): 0})
    a = Automaton.of(2, 2, alphabet, {0}, [("a", 0, eps), ("a", 0, one)])
    subset, _ = materialize(determinize(a), frozenset({0}))
    assert len(pattern_shapes(2, 2)) == 3
    per_sigma = sum(len(subset.states) ** len(s) for s in pattern_shapes(2, 2))
    assert subset.rule_count() <= len(alphabet) * per_sigma


def test_materialize_singleton_automaton_total():
    a, acc = single_rule_automaton()
    subset, subset_acc = materialize(determinize(a), acc)
    # delta is total: one rule per (symbol, pattern over reachable states)
    per = {}
    for symbol, q, pattern in subset.rules():
        per.setdefault((symbol, pattern), []).append(q)
    assert all(len(v) == 1 for v in per.values())


def test_materialize_explosion_guard():
    rng = random.Random(5)
    a, acc = random_automaton(rng, max_states=3)
    with pytest.raises(ExplosionGuard):
        materialize(determinize(a), acc, guard=GuardConfig(max_states=2, max_transitions=3))


def test_union_intersect_complement_language_level():
    rng = random.Random(31)
    corpus = structure_corpus(3, 2, ("a", "b"), 5)
    for _ in range(6):
        a, a_acc = random_automaton(rng)
        b, b_acc = random_automaton(rng)
        u, u_acc = union(a, a_acc, b, b_acc)
        i, i_acc = intersect(a, a_acc, b, b_acc)
        na, na_acc = complement(a, a_acc)
        for t in rng.sample(corpus, 15):
            va, vb = accepts(a, a_acc, t), accepts(b, b_acc, t)
            assert accepts(u, u_acc, t) == (va or vb)
            assert accepts(i, i_acc, t) == (va and vb)
            assert accepts(na, na_acc, t) == (not va)


def test_intersect_idempotent_and_double_complement():
    rng = random.Random(37)
    corpus = structure_corpus(3, 2, ("a", "b"), 5)
    for _ in range(4):
        a, acc = random_automaton(rng)
        ii, ii_acc = intersect(a, acc, a, acc)
        na, na_acc = complement(a, acc)
        nna, nna_acc = complement(na, na_acc)
        for t in rng.sample(corpus, 15):
            v = accepts(a, acc, t)
            assert accepts(ii, ii_acc, t) == v
            assert accepts(nna, nna_acc, t) == v


def test_de_morgan_on_bounded_structures():
    rng = random.Random(41)
    corpus = structure_corpus(3, 2, ("a", "b"), 4)
    a, a_acc = random_automaton(rng)
    b, b_acc = random_automaton(rng)
    u, u_acc = union(a, a_acc, b, b_acc)
    lhs, lhs_acc = complement(u, u_acc)
    na, na_acc = complement(a, a_acc)
    nb, nb_acc = complement(b, b_acc)
    rhs, rhs_acc = intersect(na, na_acc, nb, nb_acc)
    for t in rng.sample(corpus, 40):
        assert accepts(lhs, lhs_acc, t) == accepts(rhs, rhs_acc, t)


def test_dimension_and_branching_mismatch():
    a, a_acc = single_rule_automaton()
    other = Automaton.of(2, 2, Alphabet.of(("a", "b")), {0}, [("a", 0, empty_pattern(1))])
    with pytest.raises(DimensionMismatch):
        union(a, a_acc, other, frozenset({0}))
    bigger = Automaton.of(3, 3, Alphabet.of(("a", "b")), {0}, [("a", 0, empty_pattern(2))])
    with pytest.raises(BranchingMismatch):
        intersect(a, a_acc, bigger, frozenset({0}))
    disjoint = Automaton.of(3, 2, Alphabet.of(("x",)), {0}, [("x", 0, empty_pattern(2))])
    with pytest.raises(AlphabetMismatch):
        union(a, a_acc, disjoint, frozenset({0}))


def test_project_identity_and_containment():
    rng = random.Random(43)
    a, acc = random_automaton(rng)
    ident = {s: s for s in a.alphabet.symbols}
    assert project(ident, a).groups == a.groups
    assert cylindrify(ident, a, a.alphabet).groups == a.groups

    # cylindrify(project) over-approximates on bounded structures
    pi = {"a": "c", "b": "c"}
    image = project(pi, a)
    back = cylindrify(pi, image, a.alphabet)
    corpus = structure_corpus(3, 2, ("a", "b"), 4)
    for t in rng.sample(corpus, 60):
        if accepts(a, acc, t):
            assert accepts(back, acc, t)


def test_projection_maps_language_forward():
    rng = random.Random(47)
    a, acc = random_automaton(rng)
    pi = {"a": "c", "b": "c"}
    image = project(pi, a)
    corpus = structure_corpus(3, 2, ("a", "b"), 4)
    for t in rng.sample(corpus, 60):
        if accepts(a, acc, t):
            assert accepts(image, acc, t.relabel(lambda s: pi[s]))


def test_cylindrify_exact_preimage_contract():
    rng = random.Random(53)
    a, acc = random_automaton(rng, symbols=("c",))
    pi = {"a": "c", "b": "c"}
    big = Alphabet.of(("a", "b"))
    lifted = cylindrify(pi, a, big)
    corpus = structure_corpus(3, 2, ("a", "b"), 4)
    for t in rng.sample(corpus, 60):
        assert accepts(lifted, acc, t) == accepts(a, acc, t.relabel(lambda s: pi[s]))


def test_project_requires_total_map_and_surjectivity():
    a, _ = single_rule_automaton()
    with pytest.raises(PartialMap):
        project({"a": "x"}, a)
    with pytest.raises(NotSurjective):
        project({"a": "x", "b": "x"}, a, target=Alphabet.of(("x", "y")))
    with pytest.raises(NotSurjective):
        cylindrify({"a": "a", "b": "a"}, a, Alphabet.of(("a", "b")))


def test_is_empty_no_leaf_rules():
    shape = complete(2, 2)
    pattern = LabeledTM.of(shape, {w: 0 for w in shape.nodes})
    a = Automaton.of(3, 2, Alphabet.of(("a",)), {0}, [("a", 0, pattern)])
    verdict, witness = is_empty(a, frozenset({0}))
    assert verdict and witness is None


def test_is_empty_agrees_with_enumeration_and_witness_checks():
    rng = random.Random(59)
    corpus = structure_corpus(3, 2, ("a", "b"), 5)
    for _ in range(20):
        a, acc = random_automaton(rng)
        verdict, witness = is_empty(a, acc)
        brute_nonempty = any(accepts(a, acc, t) for t in corpus)
        if verdict:
            # nothing small accepted; exhaustive up to the corpus bound
            assert not brute_nonempty
        else:
            assert accepts(a, acc, witness)
            # minimal witness never repeats a state along a major chain
            assert max(x.length for x in witness.shape.nodes) + 1 <= len(a.states) + 1


def test_witness_is_minimal():
    rng = random.Random(61)
    corpus = structure_corpus(3, 2, ("a", "b"), 5)
    for _ in range(10):
        a, acc = random_automaton(rng)
        verdict, witness = is_empty(a, acc)
        if not verdict and len(witness) <= 5:
            smallest = min(
                (len(t) for t in corpus if accepts(a, acc, t)), default=None
            )
            assert smallest == len(witness)


def test_equivalent_self_and_materialized():
    rng = random.Random(67)
    for _ in range(5):
        a, acc = random_automaton(rng, max_states=2)
        assert equivalent(a, acc, a, acc)[0]
        subset, subset_acc = materialize(determinize(a), acc)
        ok, _ = equivalent(a, acc, subset, subset_acc)
        assert ok


def test_equivalent_detects_difference_with_witness():
    a, acc = single_rule_automaton()
    b = Automaton.of(3, 2, Alphabet.of(("a", "b")), {0}, [("b", 0, empty_pattern(2))])
    ok, witness = equivalent(a, acc, b, frozenset({0}))
    assert not ok
    assert accepts(a, acc, witness) != accepts(b, frozenset({0}), witness)


def test_trim_preserves_language():
    rng = random.Random(71)
    corpus = structure_corpus(3, 2, ("a", "b"), 4)
    for _ in range(8):
        a, acc = random_automaton(rng)
        small, small_acc = trim(a, acc)
        for t in rng.sample(corpus, 25):
            assert accepts(small, small_acc, t) == accepts(a, acc, t)


def test_serialization_round_trip():
    rng = random.Random(73)
    a, acc = random_automaton(rng, max_states=2)
    text = sexpr.unparse(aut_to_sexp(a, acc))
    back, back_acc = aut_from_sexp(sexpr.parse(text))
    assert back.groups == a.groups and back_acc == acc
    back2, acc2 = aut_from_json(aut_to_json(a, acc))
    assert back2.groups == a.groups and acc2 == acc


def test_canonical_renamed_language_preserved():
    rng = random.Random(79)
    a, acc = random_automaton(rng, max_states=2)
    subset, subset_acc = materialize(determinize(a), acc)
    renamed, renamed_acc = canonical_renamed(subset, subset_acc)
    corpus = structure_corpus(3, 2, ("a", "b"), 4)
    for t in rng.sample(corpus, 20):
        assert accepts(renamed, renamed_acc, t) == accepts(subset, subset_acc, t)
