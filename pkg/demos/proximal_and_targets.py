"""Orbit checks on a constructed point: returns to z along multiples, and steering finite words to targets."""

import random

from xiongsets.chaos import Member, TargetSpec, find_target_block, proximal_check, verify_target_time
from xiongsets.construction import Budget, ConstructionParams, build_delta
from xiongsets.symbolic import FunctionSource, periodic

# a z that differs at the two anchors j*A1 + 1 for j = 1, 2
z = FunctionSource(lambda p: 1 + (p * p // 7) % 2, 2)
x = periodic([1, 2, 2, 1, 1], 2)

ledger = build_delta(ConstructionParams(2, 3, Budget(2, 1), z, x))
for k in (1, 2, 3):
    rep = proximal_check(ledger.point(), z, k, k)
    print(f"stage {k}: distances along j*A1 = {[str(d) for d in rep.distances]}, bound {rep.bound}")

# copying the same z-segment at every j breaks the j = 2 distance
literal = build_delta(ConstructionParams(2, 3, Budget(2, 1), z, x, paper_literal_zsegments=True))
for k in (2, 3):
    rep = proximal_check(literal.point(), z, 2, k)
    print(f"single-segment layout, stage {k}: {[str(d) for d in rep.distances]}", "ok" if rep.passed else "fails")

# targeting: every member word is sent to its targets at times q, 2q, ...
full = build_delta(ConstructionParams(2, 1, None, periodic([1, 2], 2), periodic([2, 1], 2)))
L = full.stage(1)
rng = random.Random(3)
for _ in range(5):
    d = rng.randint(1, 3)
    spec = TargetSpec(d, [Member((1, 1), [(rng.randint(1, 2),) for _ in range(d)]),
                          Member((2, 2), [(rng.randint(1, 2),) for _ in range(d)])])
    i, q = find_target_block(spec, 1, full)
    ok = verify_target_time(q, spec, full, 1).passed
    print(f"d={d}: block {i}, q has {q.bit_length()} bits, verified={ok}, q+1 == r(i,1): {q + 1 == L.r(i, 1)}")
