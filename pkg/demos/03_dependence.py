"""Counterfactual dependence, and why ancestry does not imply it."""

# %%
from nscm import cf_depends_star, depends_on, directly_depends, is_ancestor
from nscm.catalog import ancestor_counterexample, late_preemption, treatment, LATE_PREEMPTION_WORLD

m = treatment()
w = cf_depends_star(m, {"X": "1", "Y": "0"}, "X", "1", "Y", "0")
print("Y=0 depends on X=1 in world X=1,Y=0:", w.to_json())

# %%
# In late preemption the bottle does not depend on Suzy's throw: Billy is a backup.
lp = late_preemption()
print("BS depends on ST at the actual world:", cf_depends_star(lp, LATE_PREEMPTION_WORLD, "ST", "1", "BS", "1"))
# Holding Billy's throw fixed at 0 reveals the dependence.
print("BS depends on ST under some intervention:", depends_on(lp, "ST", "BS").to_json()["base_intervention"])
print("BS directly depends on BH:", bool(directly_depends(lp, "BH", "BS")))

# %%
# Z picks the sign of X, and Y is |X|. Z is an ancestor of Y, yet Y never depends on Z.
c = ancestor_counterexample()
print("Z ancestor of Y:", is_ancestor(c.graph, "Z", "Y"))
print("Y depends on Z:", depends_on(c, "Z", "Y"))
