"""Building a nondeterministic causal model and enumerating its solutions."""

# %%
from nscm import MultiFunction, Nscm, Signature, intervene, refine, solutions, validate_model
from nscm.catalog import BINARY

# A treatment X defaults to 1. Recovery Y may or may not happen, whatever X is.
sig = Signature((), ("X", "Y"), {"X": BINARY, "Y": BINARY})
model = Nscm.build(sig, [
    MultiFunction.constant("X", "1"),
    MultiFunction.from_rule(sig, "Y", ["X"], lambda X: {"0", "1"}),
])
print("graph edges:", sorted(model.graph.edges))
print("diagnostics:", validate_model(model))

# %%
# Nondeterminism shows up as several solutions for one context.
for s in solutions(model, {}):
    print("solution:", s)

# %%
# An intervention replaces X's equation with a constant.
for s in solutions(intervene(model, {"X": "0"}), {}):
    print("under X<-0:", s)

# %%
# Refining at an actual world keeps the equations' choices fixed where the world used them.
# Intervening afterwards is how counterfactuals are read.
actual = {"X": "1", "Y": "0"}
after = intervene(refine(model, actual), {"X": "0"})
print("counterfactual X<-0 from", actual, "->", solutions(after, {}))
