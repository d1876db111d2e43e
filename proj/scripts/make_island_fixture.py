#!/usr/bin/env python3
"""Regenerates the synthetic island fixture under data/island/.

The fixture is a small two-feeder island system with four diesel units at
the power station, wind/solar/battery investment candidates and three load
points. Year series are synthetic but shaped like measured data: winter-
peaking demand with a double daily peak, storm/calm wind regimes, and
seasonal solar with cloudy spells. Everything is seeded, so rerunning the
script reproduces the committed files byte for byte.
"""

import math
import os
import random

DAYS = 365
OUT = os.path.join(os.path.dirname(__file__), "..", "data", "island")

rng = random.Random(20130101)


def day_regimes():
    """Wind regime, cloud factor and demand wobble per day."""
    regimes = []
    for d in range(DAYS):
        r = rng.random()
        if r < 0.07:
            wind = ("calm", rng.uniform(0.6, 1.6))
        elif r < 0.30:
            wind = ("storm", rng.uniform(9.3, 12.0))
        else:
            wind = ("normal", rng.uniform(3.2, 7.8))
        c = rng.random()
        if c < 0.45:
            cloud = rng.uniform(0.80, 1.00)
        elif c < 0.75:
            cloud = rng.uniform(0.45, 0.80)
        else:
            cloud = rng.uniform(0.08, 0.40)
        wobble = rng.uniform(0.93, 1.07)
        regimes.append((wind, cloud, wobble))
    return regimes


def make_series():
    regimes = day_regimes()
    load, wind, solar = [], [], []
    for d in range(DAYS):
        (wind_kind, wind_level), cloud, wobble = regimes[d]
        seasonal = 1.0 + 0.28 * math.cos(2.0 * math.pi * (d + 10) / DAYS)
        sun_season = 0.52 + 0.42 * math.cos(2.0 * math.pi * (d - 172) / DAYS)
        for h in range(24):
            diurnal = (0.60
                       + 0.16 * math.sin(2.0 * math.pi * (h - 7) / 24.0)
                       + 0.10 * math.sin(4.0 * math.pi * (h - 6) / 24.0))
            load.append(760.0 * seasonal * diurnal * wobble)

            if wind_kind == "calm":
                v = max(0.0, wind_level + rng.uniform(-0.5, 0.5))
                v = min(v, 2.8)  # stays below cut-in even at hub height
            elif wind_kind == "storm":
                v = max(9.0, wind_level + rng.uniform(-0.8, 0.8))
            else:
                v = max(0.0, wind_level
                        + 1.1 * math.sin(2.0 * math.pi * (h - 14) / 24.0)
                        + rng.uniform(-0.9, 0.9))
            wind.append(v)

            if 6 <= h <= 18:
                sun = math.sin(math.pi * (h - 6) / 12.0)
                solar.append(max(0.0, 1000.0 * sun_season * cloud * sun))
            else:
                solar.append(0.0)

    peak = max(load)
    load = [v * 1252.0 / peak for v in load]  # island peak load in kW
    return load, wind, solar


def write_series(name, values):
    with open(os.path.join(OUT, name), "w") as f:
        for v in values:
            f.write(f"{v:.6f}\n")


def write_tables():
    with open(os.path.join(OUT, "nodes.csv"), "w") as f:
        f.write("id,is_slack,vmin,vmax\n")
        f.write("station,1,0.94,1.06\n")
        f.write("harbour,0,0.94,1.06\n")
        f.write("town,0,0.94,1.06\n")
        f.write("longis,0,0.94,1.06\n")
        f.write("airport,0,0.94,1.06\n")

    with open(os.path.join(OUT, "lines.csv"), "w") as f:
        f.write("from,to,r,x,pmax,qmax,smax\n")
        f.write("station,harbour,0.0080,0.0160,3000,2200,3600\n")
        f.write("harbour,town,0.0100,0.0200,3000,2200,3600\n")
        f.write("station,longis,0.0090,0.0180,3000,2200,3600\n")
        f.write("longis,airport,0.0120,0.0240,3000,2200,3600\n")

    header = ("type,id,node,technology,profile_key,capacity,pmax,qmin,qmax,"
              "marginal_cost,annualized_cost,peak,power_factor,"
              "curtail_penalty,emax,emin,e_ini_frac,pc_max,pd_max,eta_c,eta_d\n")
    rows = []
    for i in range(1, 5):
        rows.append(f"diesel,d{i},station,,,,450,-350,350,0.1962,,,,,,,,,,,")
    for i in range(1, 4):
        rows.append(f"res,w{i},station,wind,wind,1800,,-900,900,0,,,,,,,,,,,")
    for i in range(1, 4):
        rows.append(f"res,s{i},longis,solar,solar,1800,,-900,900,0,,,,,,,,,,,")
    for i in range(1, 3):
        rows.append(f"battery,b{i},harbour,,,,,-600,600,,,,,,7200,720,0.5,"
                    f"1800,1800,0.95,0.95")
    rows.append("demand,l1,harbour,,load,,,,,,,500,0.95,1.962,,,,,,,")
    rows.append("demand,l2,town,,load,,,,,,,400,0.95,1.962,,,,,,,")
    rows.append("demand,l3,airport,,load,,,,,,,352,0.95,1.962,,,,,,,")
    with open(os.path.join(OUT, "assets.csv"), "w") as f:
        f.write(header)
        f.write("\n".join(rows) + "\n")


CASE_TEMPLATE = """{{
  "name": "island-{name}",
  "files": {{"nodes": "nodes.csv", "lines": "lines.csv", "assets": "assets.csv"}},
  "series": [
    {{"key": "load", "kind": "load", "path": "load.csv"}},
    {{"key": "solar", "kind": "irradiance", "path": "solar.csv"}},
    {{"key": "wind", "kind": "windspeed", "path": "wind.csv"}}
  ],
  "candidates": [{cands}],
  "curtailment_mode": "binary",
  "res_curtail_penalty_per_kwh": 0.0,
  "year_days": 365,
  "base_mva": 1.0,
  "wind_curve": {{"cut_in": 4, "rated_speed": 12, "cut_out": 25,
                 "rated_power_kw": 1800, "hub_height_m": 80,
                 "measurement_height_m": 10, "shear_exponent": 0.142857}},
  "solar_model": {{"efficiency": 0.10, "area_m2": 20000, "rated_power_kw": 1800}},
  "finance": {{"interest_rate": 0.053,
              "capital_cost_per_mw": {{"battery": 980000, "solar": 840000, "wind": 1210000}},
              "lifetime_years": {{"battery": 15, "solar": 30, "wind": 30}}}}
}}
"""

CASES = {
    "c1": '"wind"',
    "c2": '"battery", "wind"',
    "c3": '"solar"',
    "c4": '"battery", "solar"',
    "c5": '"battery", "solar", "wind"',
    "c6": '"diesel", "battery", "solar", "wind"',
}


def main():
    os.makedirs(OUT, exist_ok=True)
    load, wind, solar = make_series()
    write_series("load.csv", load)
    write_series("wind.csv", wind)
    write_series("solar.csv", solar)
    write_tables()
    for name, cands in CASES.items():
        with open(os.path.join(OUT, f"case_{name}.json"), "w") as f:
            f.write(CASE_TEMPLATE.format(name=name, cands=cands))
    print(f"wrote fixture to {os.path.normpath(OUT)}")


if __name__ == "__main__":
    main()
