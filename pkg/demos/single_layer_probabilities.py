"""
Single-layer nested logit: the classic two-level formula
=========================================================

Three alternatives, two nests: A = {1, 2} with lambda = 1/2, B = {3}.
All utilities are zero, so any deviation from the uniform 1/3 split is
pure correlation structure.
"""

from pathlib import Path

from nestlogit import choice_probs, choice_probs_single_layer, load_model, with_utilities

model = load_model(Path(__file__).parent / "models" / "single_layer.json")

# The closed form for root -> nests -> leaves and the general
# backward/forward recursion are two routes to the same numbers.
direct = choice_probs_single_layer(model)
nested = choice_probs(model)
print("leaf   closed form          recursion")
for leaf in model.tree.leaves:
    print(f"{leaf:5s}  {direct[leaf]:.15f}  {nested[leaf]:.15f}")

# With U = 0 the exact values are (2 - sqrt 2)/2, (2 - sqrt 2)/2 and
# sqrt(2) - 1: the correlated pair inside A cannibalize each other, so
# the lone alternative 3 takes more than a third of the market.
print()
print("alternative 3 share:", nested["3"], "(plain logit would give 1/3)")

# Raising alternative 3's utility shifts share toward it faster than a
# plain logit would, because 1 and 2 are close substitutes for each other
# but not for 3.
print()
print("U_3    P(1)      P(3)")
for u3 in (0.0, 0.5, 1.0, 2.0):
    shifted = choice_probs(with_utilities(model, {"3": u3}))
    print(f"{u3:4.1f}  {shifted['1']:.6f}  {shifted['3']:.6f}")
