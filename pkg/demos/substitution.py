# %% [markdown]
# # When uniform substitution breaks
#
# Validities about atoms can fail once the atom is replaced by an arbitrary
# formula, because announcing a formula can change its own truth value.
# Atoms are stable under announcements; epistemic formulas are not.
#
# Each principle is checked twice: as an atomic instance, and with a
# schematic variable that ranges over every possible meaning (a truth value
# per domain and world).

# %%
from palkit import formula as F
from palkit import scenarios as S
from palkit.checker import Countermodel, Mode, SearchBounds, bounded_valid

# %%
for key, text in S.SUBSTITUTION_PRINCIPLES:
    print(key, text)

report = S.substitution_suite(SearchBounds(3))
print(report.table())

# %% [markdown]
# Some schematic rows need three worlds. With two worlds any refutation would
# need two distinct worlds to survive the announcement, so the formula would
# be true everywhere and the refutation collapses. The exhaustive search
# confirms this, and the lazy search finds a three world countermodel.

# %%
for key, text in S.SUBSTITUTION_PRINCIPLES:
    v = report.entries[[e.name for e in report.entries].index(f"{key} schematic")].verdict
    if isinstance(v, Countermodel) and v.model.n == 3:
        two = bounded_valid(F.parse(text), SearchBounds(2), Mode.PVALID)
        print(f"{key}: at 2 worlds {two.status}; countermodel at world "
              f"{v.model.labels[v.world]} of a 3 world model")

# %% [markdown]
# The Moore sentence is the classic case: announcing that p is true but
# not known makes it false.

# %%
moore = report.entries[-1]
print("phi :=", S.MOORE)
print(moore.formula)
print("  ", moore.verdict.status, "with",
      moore.verdict.model.n, "worlds")
