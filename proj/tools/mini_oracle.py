#!/usr/bin/env python3
"""Independent recomputation of the mini-fixture valuation.

Reads the raw GTFS text files, the geo caches and the trained model file and
recomputes fleet size, energy, emissions, health cost and both TCOs with plain
Python. The result is checked into tests/data and compared against the C++
report in the test suite.

usage: mini_oracle.py <fixtures dir> <out json>
"""

import csv
import datetime as dt
import json
import math
import sys
from fractions import Fraction
from pathlib import Path

ROUTES = ["201", "202"]
PASSENGERS = 20.0
AVG_TEMP = 11.0
LOW_TEMP = -5.0

BOSTON = dict(
    c_kwh=0.098, r_kwh=-0.001, c_dc=8.0, r_dc=0.0, c_fuel=2.546, r_fuel=0.007,
    ebus=750000.0, dbus=485000.0, charger_unit=27549.0, charger_install=17692.0,
    om_e=0.64, om_d=0.88, om_charger=500.0, residual=0.15, rd=0.035, years=12,
    km_to_mi=0.621371, w2t_diesel=310.0, t2w_diesel=10.21, w2t_e=0.2369, pm=0.583,
    intake=25.8, effect=260.110, vsl=6.267, charger_kw=50.0, charge_h=5.0, eta_c=0.95,
    battery_kwh=352.0,
)


def rows(path):
    with open(path, newline="", encoding="utf-8-sig") as f:
        return list(csv.DictReader(f))


def seconds(t):
    h, m, s = (int(x) for x in t.split(":"))
    return h * 3600 + m * 60 + s


def service_days(feed):
    days = {}
    weekday_cols = ["monday", "tuesday", "wednesday", "thursday", "friday", "saturday", "sunday"]
    for r in rows(feed / "calendar.txt"):
        start = dt.datetime.strptime(r["start_date"], "%Y%m%d").date()
        end = dt.datetime.strptime(r["end_date"], "%Y%m%d").date()
        d = start
        s = days.setdefault(r["service_id"], set())
        while d <= end:
            if r[weekday_cols[d.weekday()]] == "1":
                s.add(d)
            d += dt.timedelta(days=1)
    for r in rows(feed / "calendar_dates.txt"):
        d = dt.datetime.strptime(r["date"], "%Y%m%d").date()
        s = days.setdefault(r["service_id"], set())
        if r["exception_type"] == "1":
            s.add(d)
        else:
            s.discard(d)
    return days


def load_trips(feed):
    trips = {r["trip_id"]: dict(r, events=[]) for r in rows(feed / "trips.txt")}
    for r in rows(feed / "stop_times.txt"):
        trips[r["trip_id"]]["events"].append((int(r["stop_sequence"]), r["stop_id"], seconds(r["arrival_time"])))
    for t in trips.values():
        t["events"].sort()
        kept = []
        for ev in t["events"]:
            if kept and kept[-1][2] == ev[2]:
                continue
            kept.append(ev)
        t["filtered"] = kept
        t["cycle"] = t["events"][-1][2] - t["events"][0][2]
    return trips


def model_ee(model, p, temp, grade):
    x = (p, temp, grade)
    total = model["intercept"]
    for f in model["features"]:
        a, b, c = f["exponents"]
        mono = x[0] ** a * x[1] ** b * x[2] ** c
        total += f["coefficient"] * (mono - f["mean"]) / f["scale"]
    return total


def ceil_count(x):
    r = round(x)
    if abs(x - r) <= 1e-9 * max(1.0, x):
        return int(r)
    return math.ceil(x)


def main():
    root = Path(sys.argv[1])
    feed = root / "mini_feed"
    model = json.loads((root / "mini" / "model.json").read_text())
    dist = {(r["from_stop"], r["to_stop"]): float(r["distance_km"]) for r in rows(root / "mini_geo" / "distances.csv")}
    elev = {r["stop_id"]: float(r["elevation_m"]) for r in rows(root / "mini_geo" / "elevations.csv")}
    days = service_days(feed)
    trips = load_trips(feed)
    p = BOSTON

    counts = {}
    for t in trips.values():
        if t["route_id"] in ROUTES:
            for d in days[t["service_id"]]:
                counts[d] = counts.get(d, 0) + 1
    day = min(counts, key=lambda d: (-counts[d], d))

    out = {"representative_day": day.strftime("%Y%m%d"), "routes": {}}
    for route in ROUTES:
        rtrips = [t for t in trips.values() if t["route_id"] == route]
        on_day = [t for t in rtrips if day in days[t["service_id"]]]

        buses = 0
        for direction in ("0", "1"):
            arrivals = {}
            for t in on_day:
                if t["direction_id"] != direction:
                    continue
                for _, stop, time in t["filtered"]:
                    arrivals.setdefault(stop, []).append((time, t["cycle"]))
            if not arrivals:
                continue
            best = None
            for stop, arr in arrivals.items():
                arr.sort()
                for (t0, _), (t1, c1) in zip(arr, arr[1:]):
                    if t1 > t0:
                        ratio = Fraction(c1, t1 - t0)
                        best = ratio if best is None or ratio > best else best
            buses += 1 if best is None else math.ceil(best)

        clusters = {}
        for t in rtrips:
            key = (t["direction_id"], tuple(s for _, s, _ in t["filtered"]))
            clusters.setdefault(key, []).append(t)

        speeds, day_km, daily_energy, cold_energy, day_trips = [], 0.0, [], [], []
        for (_, seq), ctrips in clusters.items():
            pairs = list(zip(seq, seq[1:]))
            length = sum(dist[pr] for pr in pairs)
            mean_cycle_min = sum(t["cycle"] for t in ctrips) / len(ctrips) / 60.0
            speeds.append(length / mean_cycle_min * 60.0)

            def trip_energy(temp):
                e = 0.0
                for a, b in pairs:
                    grade = math.asin((elev[b] - elev[a]) / (1000.0 * dist[(a, b)]))
                    e += model_ee(model, PASSENGERS, temp, grade) * dist[(a, b)]
                return e

            n = sum(1 for t in ctrips if day in days[t["service_id"]])
            day_km += n * length
            if n:
                daily_energy.append(n * trip_energy(AVG_TEMP))
                cold_energy.append(n * trip_energy(LOW_TEMP))
                day_trips.append(n)
        speed = sum(speeds) / len(speeds)
        vkt = day_km * 365.0
        e_day = sum(daily_energy)
        e_year = e_day * 365.0
        chargers = ceil_count(e_day / (p["charger_kw"] * p["charge_h"] * p["eta_c"]))
        total_day_trips = sum(day_trips)
        feasible = all(
            cold < p["battery_kwh"] * ceil_count(buses * n / total_day_trips) for cold, n in zip(cold_energy, day_trips)
        )

        af = (1 - (1 + p["rd"]) ** -p["years"]) / p["rd"]
        disc = (1 + p["rd"]) ** -p["years"]
        miles = vkt * p["km_to_mi"]

        energy = sum(p["c_kwh"] * (1 + p["r_kwh"]) ** y * e_year / p["eta_c"] for y in range(1, 13))
        demand = sum(p["c_dc"] * chargers * p["charger_kw"] * (1 + p["r_dc"]) ** y * 12 for y in range(1, 13))
        om_e = p["om_e"] * buses * miles + p["om_charger"] * chargers
        capex_e = p["ebus"] * buses + (p["charger_unit"] + p["charger_install"]) * chargers
        salvage_e = -(p["residual"] * p["ebus"] * buses + p["residual"] * p["charger_unit"] * chargers)
        tco_e = capex_e + af * om_e + energy + demand + disc * salvage_e

        mph = speed * p["km_to_mi"]
        fe = -0.0032 * mph * mph + 0.2143 * mph + 0.9726
        gallons = miles / fe
        fuel = sum(p["c_fuel"] * (1 + p["r_fuel"]) ** y * gallons for y in range(1, 13))
        om_d = p["om_d"] * buses * miles
        tco_d = p["dbus"] * buses + af * om_d + fuel - disc * p["residual"] * p["dbus"] * buses

        co2_d = vkt * p["w2t_diesel"] / 1e6 + gallons * p["t2w_diesel"] / 1000.0
        co2_e = e_day * p["w2t_e"] * 365.0 / 1000.0
        pm_g = vkt * p["pm"]
        health = p["intake"] * 1e-6 * pm_g / 1000.0 * p["effect"] * p["vsl"] * 1e6

        out["routes"][route] = {
            "buses_total": buses,
            "chargers": chargers,
            "feasible": feasible,
            "route_speed_kmh": speed,
            "annual_vkt_km": vkt,
            "annual_energy_kwh": e_year,
            "electric_tco_npv_usd": tco_e,
            "diesel_tco_npv_usd": tco_d,
            "diesel_fuel_economy_mpg": fe,
            "electric_co2_t_yr": co2_e,
            "diesel_co2_t_yr": co2_d,
            "pm25_g_yr": pm_g,
            "health_usd_yr": health,
        }

    Path(sys.argv[2]).write_text(json.dumps(out, indent=2, sort_keys=True) + "\n")


if __name__ == "__main__":
    main()
