"""
Nested logit as a mixed logit
=============================

On a single-layer tree the nested logit is a logit with random
intercepts: conditional on one positive stable factor per nest, choice
probabilities are a softmax, and averaging softmaxes over factor draws
recovers the nested probabilities. The estimator here equalizes the
conditional noise scales with one extra stable factor per leaf, so it
stays unbiased when nests carry different lambdas.
"""

from pathlib import Path

from nestlogit import SeededStream, choice_probs, load_model, mixed_logit_probs

model = load_model(Path(__file__).parent / "models" / "single_layer.json")
exact = choice_probs(model)

print("exact:", {leaf: round(p, 6) for leaf, p in exact.items()})
print()
print("draws    P(1) estimate        P(3) estimate")
for k in (100, 1_000, 10_000, 100_000):
    est = mixed_logit_probs(model, SeededStream(123), k)
    print(
        f"{k:6d}   {est['1'].value:.6f} +- {est['1'].std_error:.6f}"
        f"  {est['3'].value:.6f} +- {est['3'].std_error:.6f}"
    )
print()
print("exact    {:.6f}             {:.6f}".format(exact["1"], exact["3"]))
