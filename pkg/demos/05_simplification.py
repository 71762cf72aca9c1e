"""Graph and structural simplifications, and interventional extension."""

# %%
from nscm import (
    enumerate_graph_simplifications,
    is_interventional_extension,
    is_setting_simplification,
    structural_simplify,
)
from nscm.catalog import late_preemption, LATE_PREEMPTION_WORLD
from nscm.simplification import simplification_of

lp = late_preemption()
options = enumerate_graph_simplifications(lp.graph)
print(len(options), "graph simplifications keep every ancestor relation")

# %%
# Dropping BH->BS makes BS forget Billy: with Suzy's rock absent, BS may be 0 or 1.
cut = structural_simplify(lp, simplification_of(lp.graph, [("BH", "BS")]))
print("BS table:", cut.equations["BS"].table)

# %%
# The simplified model allows everything the original did, and more.
print("cut extends lp:", is_interventional_extension(lp, cut))
print("lp extends cut:", is_interventional_extension(cut, lp))

# %%
# A setting simplification must still be a structural simplification once both models are
# refined at the actual world.
keep = [gs.sorted_removed() for gs in options
        if is_setting_simplification(lp, structural_simplify(lp, gs), LATE_PREEMPTION_WORLD)]
print("setting simplifications at the actual world:", keep)
