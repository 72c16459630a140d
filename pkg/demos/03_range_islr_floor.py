"""Range-only design (eta = 0) under unit modulus reaches the Mt - 1 floor.

Mt = 4 transmitters cannot do better than 10*log10(3) = 4.77 dB of scaled
range ISLR; continuous phases get there, and an 8-PSK alphabet lands within
a few hundredths of a dB.
"""

import numpy as np

from mimo_islr import AngleScenario, ConstraintSpec, RunConfig, run

mt, n = 4, 32
floor = 10 * np.log10(mt - 1)
for spec in (ConstraintSpec.continuous(), ConstraintSpec.discrete(8), ConstraintSpec.discrete(2)):
    cfg = RunConfig(mt, n, AngleScenario.default_scene(mt, n), spec, eta=0.0, seed=1)
    rec = run(cfg)
    print(f"{spec.kind.value:17s} L={spec.alphabet_size}: range ISLR {rec.range_islr_db:.4f} dB "
          f"(floor {floor:.4f}) after {rec.sweeps_used} sweeps [{rec.stop_reason}]")

# The history shows the monotone descent sweep by sweep.
for sweep, f, sp, rg in rec.history[:5]:
    print(f"  sweep {sweep}: f = {f:.6f}, range {rg:.3f} dB")
