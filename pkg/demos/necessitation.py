# %% [markdown]
# # Two notions of validity
#
# A formula can be valid in every model yet fail after some announcement.
# Validity over full models only (tvalid) therefore does not support
# announcement necessitation: from a valid phi it does not follow that
# [!psi] phi is valid. Validity over every domain (pvalid) does.

# %%
from palkit import formula as F
from palkit import scenarios as S
from palkit.checker import Countermodel, Mode

# %%
verdicts = S.necessitation_pitfall(2)
for mode, v in verdicts.items():
    print(f"{mode.value}: {v.status}")

cm = verdicts[Mode.TVALID]
assert isinstance(cm, Countermodel) and cm.recheck()
m = cm.model
print("countermodel with", m.n, "worlds, failing at", m.labels[cm.world])
for name, den in sorted(cm.env.items()):
    print(f"?{name}:")
    for line in den.listing(m.labels):
        print("   ", line)
