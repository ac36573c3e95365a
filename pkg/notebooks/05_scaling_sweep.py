"""
Scaling sweeps
==============

Seeded ensembles over n, mean T_eps per n, and a least-squares slope against
ln n. Any row of the CSV can be replayed from its (n index, trial index).
"""

# %%
import math

from rumornet.degseq import SequenceFamily, c_D
from rumornet.harness import ExperimentConfig, run_ensemble, run_trial

cfg = ExperimentConfig(SequenceFamily.regular(1024, 5), "push", (0.01, 0.05),
                       tuple(2 ** k for k in range(10, 15)), trials=10, master_seed=7)
res = run_ensemble(cfg)

# %% slope of mean T_0.01 against ln n, next to c_D
fit = res.fits[0.01]
print("slope", round(fit.slope, 3), "ci", [round(x, 3) for x in fit.ci], "c_D", round(c_D(4), 4))

# %% replay a single row
rec = res.records[7]
print(rec == run_trial(cfg, cfg.n_list.index(rec.n), rec.trial))

# %% power law: T_eps / ln n per n
pl = ExperimentConfig(SequenceFamily.power_law(1024, 3.5, 3), "push", (0.05,),
                      tuple(2 ** k for k in range(10, 15)), trials=10, master_seed=8)
for n, t in run_ensemble(pl).means(0.05):
    print(n, round(t / math.log(n), 3))

# %% CSV head
print("\n".join(res.to_csv().splitlines()[:4]))
