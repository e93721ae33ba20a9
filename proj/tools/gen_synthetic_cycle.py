#!/usr/bin/env python3
"""Writes the bundled stop-and-go drive cycle (time_s,speed_mps at 0.1 s).

Each pulse ramps 0 -> 12 m/s, cruises, brakes back to 0 and dwells at a stop.
Pulse timings vary deterministically so the cycle is not a pure repetition.
"""
import sys

DT = 0.1
PEAK = 12.0
# (accel m/s^2, cruise s, decel m/s^2, dwell s)
PULSES = [
    (1.0, 20.0, 1.2, 8.0),
    (0.8, 35.0, 1.0, 12.0),
    (1.2, 10.0, 1.5, 6.0),
    (1.0, 25.0, 1.2, 10.0),
    (0.9, 15.0, 1.3, 15.0),
    (1.1, 30.0, 1.1, 8.0),
    (1.0, 18.0, 1.4, 9.0),
    (0.8, 40.0, 1.0, 12.0),
]


def profile():
    speeds = [0.0]
    for accel, cruise, decel, dwell in PULSES:
        v = 0.0
        while v < PEAK:
            v = min(PEAK, v + accel * DT)
            speeds.append(v)
        for _ in range(round(cruise / DT)):
            speeds.append(PEAK)
        while v > 0.0:
            v = max(0.0, v - decel * DT)
            speeds.append(v)
        for _ in range(round(dwell / DT)):
            speeds.append(0.0)
    return speeds


def main(path):
    speeds = profile()
    with open(path, "w", newline="\n") as out:
        out.write("time_s,speed_mps\n")
        for i, v in enumerate(speeds):
            out.write(f"{i * DT:.1f},{v:.6f}\n")


if __name__ == "__main__":
    main(sys.argv[1] if len(sys.argv) > 1 else "data/cycles/synthetic_stop_and_go.csv")
