#!/usr/bin/env python3
"""Writes the bundled scenario documents (scenarios/desk20.json, scenarios/warehouse73.json).

Both maps are grids: pick targets along the top edge of the shelf area, place
targets along the bottom edge, corridors down both sides.
"""
import json
import pathlib

ROOT = pathlib.Path(__file__).resolve().parent.parent
HOURS = ["08:00", "09:00", "10:00", "11:00", "12:00", "13:00", "14:00", "15:00", "16:00", "17:00", "18:00", "23:59"]


def grid_arcs(points, spacing):
    by_pos = {(round(x / spacing), round(y / spacing)): wid for wid, (x, y) in points.items()}
    arcs = []
    for (i, j), wid in sorted(by_pos.items()):
        for di, dj in ((1, 0), (0, 1)):
            other = by_pos.get((i + di, j + dj))
            if other:
                arcs.append([wid, other])
    return arcs


def normalise(weights, ids):
    total = sum(weights.get(w, 0.0) for w in ids)
    probs = {w: round(weights.get(w, 0.0) / total, 12) for w in ids if weights.get(w, 0.0) > 0}
    # put the rounding remainder on the largest entry so the sum is exact
    top = max(probs, key=probs.get)
    probs[top] = round(probs[top] + 1.0 - sum(probs.values()), 12)
    return probs


def slot_list(ids, profiles, pick, place, service, tasks):
    slots = []
    for k in range(11):
        name = f"S{k + 1}"
        slot = {"id": name, "start": HOURS[k], "end": HOURS[k + 1], "occupancy": normalise(profiles[k], ids)}
        if k == 10:
            slot["task"] = {"kind": "coverage"}
            slot["workers"] = 0
        elif k == 5:
            slot["task"] = {"kind": "service", "pick": service[0], "place": service[1]}
            slot["task_count"] = tasks
        else:
            slot["task"] = {"kind": "pick_place", "pick": pick, "place": place}
            slot["task_count"] = tasks
        slots.append(slot)
    return slots


def profiles_for(ids, shelves_west, shelves_east, canteen, entrance, offices, corridors):
    def base(weight=0.2):
        return {w: weight for w in ids}

    def add(p, group, weight):
        for w in group:
            p[w] = p.get(w, 0.0) + weight
        return p

    shelves = shelves_west + shelves_east
    arrival = add(add(add(base(), entrance, 3.0), corridors, 1.0), offices, 1.5)
    work = add(add(base(), shelves, 3.0), offices, 1.0)
    west = add(add(base(), shelves_west, 4.0), shelves_east, 1.5)
    east = add(add(base(), shelves_east, 4.0), shelves_west, 1.5)
    lunch = add(add(base(0.1), canteen, 8.0), corridors, 0.5)
    leaving = add(add(add(base(), entrance, 2.5), corridors, 1.0), shelves, 1.0)
    off = base(1.0)
    return [arrival, work, west, east, work, lunch, east, work, west, leaving, off]


def desk20():
    s = 2.0
    rows = [
        [("O1", "office"), ("T1", "shelf"), ("T2", "shelf"), ("T3", "shelf"), ("TO", "toilet")],
        [("WN", "corridor"), ("M1", "shelf"), ("M2", "shelf"), ("M3", "shelf"), ("EC", "corridor")],
        [("WS", "corridor"), ("M4", "shelf"), ("M5", "shelf"), ("M6", "shelf"), ("CA", "canteen")],
        [("EN", "entrance"), ("B1", "shelf"), ("B2", "shelf"), ("B3", "shelf"), ("CH", "charging")],
    ]
    points, waypoints = {}, []
    for r, row in enumerate(rows):
        for c, (wid, label) in enumerate(row):
            x, y = c * s, (len(rows) - 1 - r) * s
            points[wid] = (x, y)
            waypoints.append({"id": wid, "x": x, "y": y, "radius": 0.95, "label": label})
    ids = [w["id"] for w in waypoints]
    profiles = profiles_for(ids, ["M1", "M4", "M2"], ["M3", "M6", "M5"], ["CA"], ["EN"], ["O1"],
                            ["WN", "WS", "EC"])
    return {
        "name": "desk20",
        "workers": 20,
        "waypoints": waypoints,
        "arcs": grid_arcs(points, s),
        "stations": {"goals": ["T1", "T3", "B1", "B3", "EN", "TO"], "charging": "CH"},
        "slots": slot_list(ids, profiles, ["T1", "T3"], ["B1", "B3"], (["EN"], ["TO"]), 50),
    }


def warehouse73():
    s = 1.5
    points, waypoints = {}, []

    def put(wid, col, row, label):
        x, y = col * s, row * s
        points[wid] = (x, y)
        waypoints.append({"id": wid, "x": x, "y": y, "radius": 0.7, "label": label})

    put("HALL", -1, 0, "entrance")
    # west rooms (col 0), west corridor (col 1), shelves cols 2-6, east corridor col 7, east rooms col 8
    west_rooms = ["EN", "O1", "O2", "O3", "O4", "O5", "O6"]
    for row, wid in enumerate(west_rooms):
        put(wid, 0, row, "entrance" if wid == "EN" else "office")
    east_rooms = [("CH", "charging"), ("CA1", "canteen"), ("CA2", "canteen"), ("CA3", "canteen"), ("CA4", "canteen"),
                  ("TO1", "toilet"), ("TO2", "toilet")]
    for row, (wid, label) in enumerate(east_rooms):
        put(wid, 8, row, label)
    for row in range(7):
        put(f"WC{row}", 1, row, "corridor")
        put(f"EC{row}", 7, row, "corridor")
    for col in range(2, 7):
        put(f"B{col - 1}", col, 0, "shelf")
        put(f"T{col - 1}", col, 6, "shelf")
        for row in range(1, 6):
            put(f"M{row}{col - 1}", col, row, "shelf")
    for col in range(0, 9):
        put(f"N{col}", col, 7, "corridor")
    ids = [w["id"] for w in waypoints]
    assert len(ids) == 73, len(ids)
    west = [f"M{r}{c}" for r in range(1, 6) for c in (1, 2)]
    east = [f"M{r}{c}" for r in range(1, 6) for c in (4, 5)]
    centre = [f"M{r}3" for r in range(1, 6)]
    profiles = profiles_for(ids, west + centre, east, ["CA1", "CA2", "CA3", "CA4"], ["EN", "HALL"],
                            [f"O{i}" for i in range(1, 7)], [f"WC{r}" for r in range(7)] + [f"EC{r}" for r in range(7)])
    return {
        "name": "warehouse73",
        "workers": 50,
        "waypoints": waypoints,
        "arcs": grid_arcs(points, s),
        "stations": {"goals": ["T1", "T3", "T5", "B1", "B3", "B5", "EN", "CA2"], "charging": "CH"},
        "slots": slot_list(ids, profiles, ["T1", "T3", "T5"], ["B1", "B3", "B5"], (["EN"], ["CA2"]), 200),
    }


def main():
    out = ROOT / "scenarios"
    out.mkdir(exist_ok=True)
    for doc in (desk20(), warehouse73()):
        (out / f"{doc['name']}.json").write_text(json.dumps(doc, indent=1) + "\n")
        print(f"{doc['name']}: {len(doc['waypoints'])} waypoints, {len(doc['arcs'])} arcs")


if __name__ == "__main__":
    main()
