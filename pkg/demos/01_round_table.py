#!/usr/bin/env python3
"""Warm-up on the round table, where everything is exact.

The map acts on exterior points: draw both tangent lines, roll the circle
that touches the table at the leading tangency point and the trailing
tangent line, and cut the far common tangent.  On a circle this is a rigid
rotation, so periodic orbits are regular circumscribed polygons and every
quantity has a closed form to compare against.
"""
import numpy as np

from outerlength import ChordConfig, billiard, circle, find_periodic, rotation_number

table = circle()

print("== one chord at gap pi/2 ==")
state = ChordConfig(0.0, np.pi / 2)
print("chord vertex:", billiard.vertex_point(table, state), "(expect [1, 1])")
center, radius = billiard.auxiliary_circle(table, state)
print(f"auxiliary circle: center {center.round(12)}, radius {radius:.12f} (expect 1)")

print("\n== the map is a rotation ==")
M = np.array([2.0, 0.0])
image = billiard.cartesian_step(table, M)
angle = np.arctan2(image[1], image[0])
print(f"M = (2, 0) maps to {image.round(10)}; rotation by {angle:.10f}")
print(f"expected rotation: 2*pi/3 = {2 * np.pi / 3:.10f}")

print("\n== orbits close on regular polygons ==")
for n, w in ((4, np.pi / 2), (5, 2 * np.pi / 5), (6, np.pi / 3)):
    rec = billiard.orbit(table, ChordConfig(0.0, w), n)
    print(f"gap 2*pi/{round(2 * np.pi / w)}: {n} steps return within "
          f"{rec.closure_residual:.2e}")

print("\n== extremal circumscribed polygons ==")
for n, expected in ((3, 6 * np.sqrt(3)), (4, 8.0), (6, 12 / np.sqrt(3) * np.sqrt(3))):
    orb = find_periodic(table, n)
    print(f"n={n}: perimeter {orb.perimeter:.12f} "
          f"(gradient residual {orb.residual:.1e})")
print("expected: 6*sqrt(3) =", 6 * np.sqrt(3), "and 8 for the square")

print("\n== rotation number equals gap / 2*pi ==")
w = 1.1
rho = rotation_number(table, ChordConfig(0.0, w), iters=200)
print(f"gap {w}: rotation number {rho:.12f} vs {w / (2 * np.pi):.12f}")
