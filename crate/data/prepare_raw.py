"""Encode the three medical benchmark sources into numeric CSV + split manifests.

Inputs (paths given on the command line):
  biopsy.csv  - Wisconsin breast cancer, 699 rows (R MASS `biopsy`)
  pima.dat    - Pima Indians diabetes, 768 rows (KEEL `pima`)
  heart.csv   - Cleveland heart disease, 303 rows (scikit-lego `hearts`)

Each dataset is permuted once with a fixed seed so that the positional
train/valid/test split is not ordered by class. Missing cancer values (V6)
are filled with the training-partition mean. Features are left raw; the
`convert` subcommand of the CLI normalizes them with training statistics.
"""
import csv
import sys

import numpy as np

SEED = 19940930
SPLITS = {
    "cancer1": (350, 175, 174),
    "heart": (152, 76, 75),
    "diabetes1": (384, 192, 192),
}


def permute(rows, name):
    rng = np.random.default_rng(SEED + sum(map(ord, name)))
    idx = rng.permutation(len(rows))
    return [rows[i] for i in idx]


def write(name, header, rows, n_targets):
    train, valid, test = SPLITS[name]
    assert train + valid + test == len(rows), (name, len(rows))
    with open(f"{name}.csv", "w", newline="") as f:
        w = csv.writer(f, lineterminator="\n")
        w.writerow(header)
        w.writerows(rows)
    with open(f"{name}.manifest", "w") as f:
        f.write(f"targets={n_targets}\n")
        f.write(f"classes=2\n")
        f.write(f"training_examples={train}\n")
        f.write(f"validation_examples={valid}\n")
        f.write(f"test_examples={test}\n")


def cancer(path):
    rows = []
    with open(path) as f:
        for rec in csv.DictReader(f):
            feats = [None if rec[f"V{i}"] == "NA" else float(rec[f"V{i}"]) for i in range(1, 10)]
            malignant = rec["class"] == "malignant"
            rows.append(feats + [0.0 if malignant else 1.0, 1.0 if malignant else 0.0])
    rows = permute(rows, "cancer1")
    n_train = SPLITS["cancer1"][0]
    for col in range(9):
        known = [r[col] for r in rows[:n_train] if r[col] is not None]
        mean = round(sum(known) / len(known), 4)
        for r in rows:
            if r[col] is None:
                r[col] = mean
    header = [f"v{i}" for i in range(1, 10)] + ["benign", "malignant"]
    write("cancer1", header, rows, 2)


def diabetes(path):
    rows = []
    with open(path) as f:
        for line in f:
            line = line.strip()
            if not line or line.startswith("@"):
                continue
            parts = line.split(",")
            positive = parts[-1].strip() == "tested_positive"
            rows.append([float(p) for p in parts[:-1]] + [0.0 if positive else 1.0, 1.0 if positive else 0.0])
    rows = permute(rows, "diabetes1")
    header = ["preg", "plas", "pres", "skin", "insu", "mass", "pedi", "age", "negative", "positive"]
    write("diabetes1", header, rows, 2)


def heart(path):
    # UCI codes for thal; the two stray numeric entries stand in for missing values.
    thal = {"normal": 3.0, "fixed": 6.0, "reversible": 7.0, "1": 3.0, "2": 3.0}
    rows = []
    with open(path) as f:
        reader = csv.reader(f)
        header = next(reader)
        for rec in reader:
            feats = [float(v) for v in rec[:12]] + [thal[rec[12]]]
            rows.append(feats + [float(rec[13])])
    rows = permute(rows, "heart")
    write("heart", header, rows, 1)


if __name__ == "__main__":
    biopsy, pima, hearts = sys.argv[1:4]
    cancer(biopsy)
    diabetes(pima)
    heart(hearts)
