"""
Delayed push with lazy stub matching
====================================

One DRP run on a 4-regular configuration, with its phase boundaries, the
twin and pool accounting, and the per-round table.
"""

# %%
import numpy as np

from rumornet import build_regular, protocol_constants
from rumornet.drp import DrpOverrides, PhaseSchedule, run_drp

seq = build_regular(2 ** 14, 4)
print(protocol_constants(seq).to_json())

# %% the phase schedule: tree height, per-level delays and the seed target
sched = PhaseSchedule.for_n(seq.n, 0.1, 0.05, c=10.0)
print(sched.height, sched.level_delays[:3], sched.seed_target)

# %% a full run; alpha is overridden because the default constants are tiny
rep = run_drp(seq, eps=0.05, overrides=DrpOverrides(alpha=0.1), seed=3)
print("t1, t2, t3 =", rep.t1, rep.t2, rep.t3, " coupling broken:", rep.coupling_broken)
print(rep.audit.to_json())
print("twin balance", rep.audit.twin_balance(), " pool balance", rep.audit.pool_balance())

# %% every phase-2 round informs exactly as many vertices as the tree creates
for r in rep.audit.rounds[:8]:
    print(r)

# %% the per-round table
print("\n".join(rep.rows_csv().splitlines()[:5]))
phases = np.array([row[1] for row in rep.rows])
print({p: int((phases == p).sum()) for p in (1, 2, 3)})
