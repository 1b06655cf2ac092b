"""treemso: decision procedures over bounded-branching tree manifolds.

The toolkit covers manifolds of dimension 1 (string domains), 2 (tree
domains) and 3 (nodes expanding into trees), bottom-up automata over them
with the full closure-operation suite, a compiler between weak monadic
second-order formulas and automata, derived head/spine/yield relations,
and a generalized tree-adjoining-grammar front-end whose string languages
are obtained as yields of definable dimension-3 sets.
"""

from .manifold import (
    Address,
    TreeManifold,
    LabeledTM,
    validate,
    children,
    labeled_children,
    depth,
    branching_factor,
    complete,
    enumerate_manifolds,
    pred,
    pred_immediate,
)

__all__ = [
    "Address",
    "TreeManifold",
    "LabeledTM",
    "validate",
    "children",
    "labeled_children",
    "depth",
    "branching_factor",
    "complete",
    "enumerate_manifolds",
    "pred",
    "pred_immediate",
]

__version__ = "0.1.0"
