"""Build a two-stage point over {1, 2}, look at where the marks go, then erase them again."""

import random

import numpy as np

from xiongsets.construction import Budget, ConstructionParams, build_delta, check_stage_densities, endpoint_densities
from xiongsets.symbolic import gamma_erase, periodic

rng = random.Random(0)
x = [rng.randint(1, 2) for _ in range(131)]
z = [rng.randint(1, 2) for _ in range(127)]

# four self-maps per stage, four blocks: small enough to read the whole layout
params = ConstructionParams(2, 2, Budget(4, 4), periodic(z, 2), periodic(x, 2))
ledger = build_delta(params)

for L in ledger.stages:
    print(f"stage {L.n}: A1={L.A1}  B={L.B}  maps={L.width}  blocks={L.blocks}  end={L.end}")
    print("   z copies at", L.first_group(), "and", L.second_group())
    print("   first anchors", [L.r(1, j) for j in range(1, min(L.width, 4) + 1)])

print("segments in the ledger:", len(ledger))
print("total length:", ledger.total_length)

# marks are sparse: the density at each stage end keeps dropping
for L, d in zip(ledger.stages, endpoint_densities(ledger)):
    print(f"density of marks up to {L.end}: {d} ~ {float(d):.2e}")

for row in check_stage_densities(ledger):
    print(f"stage {row['stage']} case {row['case']}: sup {float(row['sup']):.3e} < {float(row['bound']):.3e}",
          "ok" if row["ok"] else "VIOLATED")

# removing every marked position gives back x, symbol for symbol
free = ledger.stage(2).cursor_end
out = gamma_erase(ledger.marks, ledger.point(), free)
print(f"erased {ledger.mark_count(ledger.stage(2).end)} marks, {free} symbols left;",
      "identity holds" if np.array_equal(out.symbols, np.resize(np.asarray(x), free)) else "identity FAILS")

# the ledger is plain JSON with positions as decimal strings
text = ledger.dumps()
print("ledger JSON size:", len(text), "bytes")
