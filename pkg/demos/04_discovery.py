"""Recovering a model from the outcomes of all experiments."""

# %%
from nscm import build_model, default_model, generate_possibilities, infer_gs
from nscm.catalog import late_preemption, treatment

# The possibility set records, for each context and intervention, every state that can occur.
S = generate_possibilities(treatment())
print(S.statistics())

# %%
# X->Y is invisible here: Y ranges over both values no matter what X is.
print("inferred edges:", sorted(infer_gs(S).edges))
print("default model Y table:", default_model(S).equations["Y"].table)

# %%
# Supplying a larger graph still reproduces the same experiments.
rebuilt = build_model(S, treatment().graph)
print("same possibilities over X->Y:", generate_possibilities(rebuilt).records == S.records)

# %%
# A deterministic model is recovered exactly.
lp = late_preemption()
print("late preemption recovered:", default_model(generate_possibilities(lp)).equations == lp.equations)
