"""Actual causation by dependence in a simplified model."""

# %%
from nscm import CauseQuery, actual_cause, explain, render_explanation
from nscm.catalog import late_preemption, suzy_accuracy, LATE_PREEMPTION_WORLD, SUZY_ACCURACY_WORLD

lp = late_preemption()
query = CauseQuery(lp, LATE_PREEMPTION_WORLD, ("ST", "1"), ("BS", "1"))
print(render_explanation(explain(query)))

# %%
# Billy's throw is not a cause: no simplification makes the bottle depend on it.
print("BT=1 causes BS=1:", bool(actual_cause(CauseQuery(lp, LATE_PREEMPTION_WORLD, ("BT", "1"), ("BS", "1")))))

# %%
# Suzy not throwing is not a cause of the shattering either, even with her accuracy in the model.
acc = suzy_accuracy()
result = actual_cause(CauseQuery(acc, SUZY_ACCURACY_WORLD, ("ST", "0"), ("BS", "1")), prune=False)
print("ST=0 causes BS=1:", bool(result), "witnesses:", len(result.witnesses))
