# Why believe the saturation effect survives in graphs that are not exactly
# dandelions?  Because of a monotone coupling: run the original system and a
# simplified one on the *same* randomness, and check after every event that
# each original queue sits at or above its image in the simplified system.
# If the simplified system's shared servers blow up, the original's must too.
#
# The pipeline of simplifications (cut foreign edges, slow arrivals, speed
# servers, pad private degrees) only ever lowers queues, and this script
# verifies that claim the hard way: event by event, across seeds.
import numpy as np

from skewnet import (
    CompatGraph,
    DandelionSpec,
    DecreaseArrival,
    EdgeSimplify,
    SimConfig,
    SkewParams,
    apply_pipeline,
    coupled_simulate,
    dandelion,
    dandelion_reduction,
)

# Four regular dispatchers around one shared server, plus an intruder whose
# edges reach into two of their neighborhoods; real graphs are full of such
# overlaps, and the reduction has to cut them away safely.
base = dandelion(DandelionSpec(n=4, boundary=1, central=1, arrival=0.9))
g = CompatGraph(
    edges=base.edges + ((4, 0), (4, 2)),
    arrival_rate=np.full(5, 0.9),
    service_rate=np.ones(5),
)

ops, component = dandelion_reduction(g, [0], [0, 1, 2, 3], SkewParams(3, 0.9, 1.0))
g2, smap = apply_pipeline(g, ops)
print(f"pipeline of {len(ops)} ops: {g.n_servers} servers -> {g2.n_servers}, "
      f"dandelion on centers {component.centers}")

for name, pipeline in [
    ("cut one intruder edge", [EdgeSimplify(4, 0)]),
    ("halve one arrival rate", [DecreaseArrival(0, 0.45)]),
    ("full reduction", ops),
]:
    events = violations = 0
    for seed in range(20):
        _, _, rep = coupled_simulate(g, pipeline, SimConfig(
            horizon=1e9, warmup_fraction=0.0, seed=seed, max_events=5000))
        events += rep.events
        violations += rep.violations
    print(f"{name:<24} {events} coupled events, {violations} dominance violations")

print("\nZero violations means every simplified queue stayed below its")
print("original counterpart on every sample path, so lower bounds proved")
print("on the simplified graph transfer to the original.")
