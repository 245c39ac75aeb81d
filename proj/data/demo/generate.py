"""Writes the bundled demo scenario (deterministic, no dependencies)."""
import json
import math

ROWS, COLS, CELL = 40, 60, 25.0

elevation, land_cover, obstacles = [], [], []
for r in range(ROWS):
    for c in range(COLS):
        ridge = 30.0 * math.exp(-((c - 42) ** 2) / (2 * 6.0 ** 2)) * (0.6 + 0.4 * math.sin(r / 7.0))
        hill = 18.0 * math.exp(-((r - 8) ** 2 + (c - 12) ** 2) / (2 * 5.0 ** 2))
        elevation.append(round(100.0 + ridge + hill, 3))
        if r in (19, 20, 21):
            cls = 1  # road
        elif 28 <= r <= 34 and 10 <= c <= 22:
            cls = 2  # forest
        elif 3 <= r <= 10 and 35 <= c <= 50:
            cls = 3  # scrub
        elif 24 <= r <= 26 and 40 <= c <= 46:
            cls = 4  # marsh
        else:
            cls = 0
        land_cover.append(cls)
        lake = 5 <= r <= 9 and 20 <= c <= 27
        wall = c == 50 and 26 <= r <= 33
        obstacles.append(1 if (lake or wall) else 0)

terrain = {
    "rows": ROWS,
    "cols": COLS,
    "cell_size_m": CELL,
    "origin": [0.0, 0.0],
    "geo_anchor": [39.5, -8.3],
    "elevation": elevation,
    "land_cover": land_cover,
    "obstacles": obstacles,
}

def disk(cr, cc, radius):
    cells = []
    for dr in range(-radius, radius + 1):
        for dc in range(-radius, radius + 1):
            if dr * dr + dc * dc <= radius * radius:
                cells.append([cr + dr, cc + dc, 1.0])
    return cells

threats = {
    "threats": [
        {"id": "SAM-1", "R_m": 600.0, "phi": 0.2, "p": 2.0, "impact": 0.8, "prior": {"cells": disk(20, 30, 2)}},
        {"id": "OBS-2", "R_m": 200.0, "phi": 0.4, "p": 1.5, "impact": 0.6, "prior": {"cells": [[32, 45, 1.0]]}},
    ]
}

mobility = {
    "class_speed": {"0": 5.0, "1": 8.0, "2": 2.5, "3": 3.5, "4": 1.5},
    "slope_factor": [[-0.5, 0.6], [-0.25, 0.9], [-0.1, 1.0], [0.0, 1.0], [0.1, 0.9], [0.25, 0.6], [0.5, 0.3]],
    "max_slope": 0.5,
    "ascent_window": 4,
    "ascent_threshold": 0.6,
}

def mission(mode, slack=0.5):
    return {"start": [20, 2], "goal": [20, 57], "mode": mode, "formation_width_m": 0.0, "replan_slack": slack}

files = {
    "terrain.json": terrain,
    "threats.json": threats,
    "mobility.json": mobility,
    "scenario.json": {"terrain": terrain, "threats": threats["threats"], "mobility": mobility},
    "mission_fast.json": mission({"type": "Balanced", "alpha": 1.0}),
    "mission_safe.json": mission({"type": "Balanced", "alpha": 0.0}),
    "mission_balanced.json": mission({"type": "Balanced", "alpha": 0.5}),
    "mission_ceiling.json": mission({"type": "FastWithinRisk", "max_risk": 0.2}),
    "mission_budget.json": mission({"type": "SafeWithinTime", "budget_s": 400.0}),
}
for name, doc in files.items():
    with open(name, "w") as f:
        json.dump(doc, f, indent=1)
        f.write("\n")

# Pop-up threat on the northern detour the min-risk plan takes.
event = {
    "at_index": 10,
    "timestamp_s": 60.0,
    "threats": [{"id": "POPUP-1", "R_m": 150.0, "phi": 0.3, "p": 2.0, "impact": 0.9, "prior": {"cells": [[1, 34, 1.0]]}}],
}
with open("event.json", "w") as f:
    json.dump(event, f, indent=1)
    f.write("\n")
