#!/usr/bin/env python3
# Copyright 2026 The survsynth Authors.
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     https://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.
"""Converts the ARFF survival datasets shipped with scikit-survival into
data/<name>.csv plus data/<name>.schema.json for the survsynth tools.

Usage: import_sksurv_data.py SKSURV_DATA_DIR OUT_DIR

SKSURV_DATA_DIR is the sksurv/datasets/data directory of an installed or
unpacked scikit-survival wheel.
"""

import argparse
import csv
import json
from pathlib import Path

from scipy.io import arff

# name -> (arff file, time column, event column, event label, covariates)
DATASETS = {
    "flchain": ("flchain.arff", "futime", "death", "dead",
                ["age", "sex", "sample.yr", "kappa", "lambda", "flc.grp",
                 "creatinine", "mgus", "chapter"]),
    "aids": ("actg320.arff", "time", "censor", "1",
             ["tx", "txgrp", "strat2", "sex", "raceth", "ivdrug", "hemophil",
              "karnof", "cd4", "priorzdv", "age"]),
}


def cell(value):
    if isinstance(value, bytes):
        text = value.decode()
        return "" if text == "?" else text
    if value != value:  # NaN
        return ""
    return repr(float(value)).removesuffix(".0")


def convert(src: Path, out: Path, name: str) -> None:
    fname, time_col, event_col, event_label, covariates = DATASETS[name]
    rows, meta = arff.loadarff(src / fname)

    schema = {"time": "time", "event": "event", "covariates": [], "missing": [""]}
    for col in covariates:
        kind, levels = meta[col]
        entry = {"name": col}
        if kind == "nominal":
            entry.update(kind="categorical", categories=list(levels))
        else:
            entry["kind"] = "continuous"
        schema["covariates"].append(entry)

    with open(out / f"{name}.csv", "w", newline="") as f:
        writer = csv.writer(f)
        writer.writerow(covariates + ["time", "event"])
        for r in rows:
            event = 1 if cell(r[event_col]) == event_label else 0
            writer.writerow([cell(r[c]) for c in covariates] + [cell(r[time_col]), event])
    (out / f"{name}.schema.json").write_text(json.dumps(schema, indent=2) + "\n")
    print(f"{name}: {len(rows)} rows")


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("src", type=Path)
    parser.add_argument("out", type=Path)
    args = parser.parse_args()
    args.out.mkdir(parents=True, exist_ok=True)
    for name in DATASETS:
        convert(args.src, args.out, name)


if __name__ == "__main__":
    main()
