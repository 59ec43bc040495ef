#!/usr/bin/env python3
# Copyright 2026 The FairUDT Authors.
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
"""Converts the raw Adult / COMPAS / German Credit files into the CSVs under data/.

The raw files are the UCI and ProPublica originals, as redistributed inside the
`responsibly` wheel (`pip download --no-deps responsibly`):

    python3 tools/prepare_datasets.py path/to/responsibly-0.1.2-py3-none-any.whl data/
"""

import csv
import io
import json
import sys
import zipfile

ADULT_COLUMNS = [
    "age", "workclass", "fnlwgt", "education", "educational_num",
    "marital_status", "occupation", "relationship", "race", "gender",
    "capital_gain", "capital_loss", "hours_per_week", "native_country",
    "income",
]

GERMAN_COLUMNS = [
    "status", "duration", "credit_history", "purpose", "credit_amount",
    "savings", "present_employment", "installment_rate", "status_sex",
    "other_debtors", "present_residence_since", "property", "age",
    "installment_plans", "housing", "number_of_existing_credits", "job",
    "number_of_people_liable_for", "telephone", "foreign_worker", "credit",
]

COMPAS_COLUMNS = [
    "sex", "age", "age_cat", "race", "juv_fel_count", "juv_misd_count",
    "juv_other_count", "priors_count", "c_charge_degree", "c_charge_desc",
    "two_year_recid",
]


def read_member(wheel, name):
    return wheel.read("responsibly/dataset/" + name).decode("utf-8")


def adult(wheel, out):
    rows = []
    for name in ("adult/adult.data", "adult/adult.test"):
        for line in read_member(wheel, name).splitlines():
            if not line.strip() or line.startswith("|"):
                continue
            fields = [f.strip() for f in line.split(",")]
            if len(fields) != len(ADULT_COLUMNS) or "?" in fields:
                continue
            fields[-1] = fields[-1].rstrip(".")
            rows.append(fields)
    write(out + "/adult.csv", ADULT_COLUMNS, rows)


def german(wheel, out):
    maps = json.loads(read_member(wheel, "german/values_maps.json"))
    rows = []
    for line in read_member(wheel, "german/german.data").splitlines():
        if not line.strip():
            continue
        values = dict(zip(GERMAN_COLUMNS, line.split()))
        for column, table in maps.items():
            if column in values:
                values[column] = str(table[values[column]]).strip().lower()
        values["age"] = ">25" if int(values["age"]) > 25 else "<=25"
        rows.append([values[c] for c in GERMAN_COLUMNS])
    write(out + "/german.csv", GERMAN_COLUMNS, rows)


def compas(wheel, out):
    reader = csv.DictReader(io.StringIO(read_member(
        wheel, "compas/compas-scores-two-years.csv")))
    rows = []
    for r in reader:
        try:
            days = int(r["days_b_screening_arrest"])
        except ValueError:
            continue
        if not -30 <= days <= 30 or r["is_recid"] == "-1":
            continue
        if r["c_charge_degree"] == "O" or r["score_text"] == "N/A":
            continue
        if any(r[c] == "" for c in COMPAS_COLUMNS):
            continue
        r = dict(r)
        r["race"] = "caucasian" if r["race"] == "Caucasian" else "non-caucasian"
        r["two_year_recid"] = "no" if r["two_year_recid"] == "0" else "yes"
        rows.append([r[c] for c in COMPAS_COLUMNS])
    write(out + "/compas.csv", COMPAS_COLUMNS, rows)


def write(path, header, rows):
    with open(path, "w", newline="", encoding="utf-8") as f:
        w = csv.writer(f, lineterminator="\n")
        w.writerow(header)
        w.writerows(rows)
    print(f"{path}: {len(rows)} rows")


def main():
    if len(sys.argv) != 3:
        sys.exit(__doc__)
    with zipfile.ZipFile(sys.argv[1]) as wheel:
        adult(wheel, sys.argv[2])
        german(wheel, sys.argv[2])
        compas(wheel, sys.argv[2])


if __name__ == "__main__":
    main()
