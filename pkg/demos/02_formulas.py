"""Parsing and evaluating modal causal formulas at three levels."""

# %%
from nscm import eval_full, eval_model, eval_partial, format_formula, parse_formula
from nscm.catalog import late_preemption, treatment, LATE_PREEMPTION_WORLD

m = treatment()
phi = parse_formula("<X<-0> Y=1", m.signature)
print("formula:", format_formula(phi))

# %%
# Full setting: a context plus an actual world.
print("at X=1,Y=0:", eval_full(m, {"X": "1", "Y": "0"}, phi))
# Partial setting: only the context is known; a box quantifies over every solution.
print("in the empty context:", eval_partial(m, {}, phi))
# Model level: every context.
print("everywhere:", eval_model(m, parse_formula("[X<-0] Y=1", m.signature)))

# %%
# Late preemption: Billy's rock would have shattered the bottle had Suzy not thrown.
lp = late_preemption()
for text in ("[ST<-0] BS=1", "[ST<-0, BT<-0] BS=0", "BH=0 & [ST<-0] BH=1"):
    print(f"{text:28} {eval_full(lp, LATE_PREEMPTION_WORLD, parse_formula(text, lp.signature))}")
