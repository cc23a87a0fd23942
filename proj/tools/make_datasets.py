#!/usr/bin/env python3
"""Regenerate the ARFF files under data/.

Synthetic boolean and LED datasets are produced from their definitions with
fixed seeds. Real datasets are converted from KEEL-format .dat files when a
directory holding them is given with --keel-dir (the `keel-ds` wheel ships
them under keel_ds/data/balanced/raw/).

    python3 tools/make_datasets.py [--out data] [--keel-dir DIR]
"""

import argparse
import itertools
import random
from pathlib import Path


def write_arff(path, relation, attributes, rows):
    """attributes: list of (name, values) where values is a list of nominal
    labels or the string 'numeric'."""
    lines = [f"@relation {relation}", ""]
    for name, values in attributes:
        if values == "numeric":
            lines.append(f"@attribute {name} numeric")
        else:
            lines.append(f"@attribute {name} {{{','.join(values)}}}")
    lines += ["", "@data"]
    lines += [",".join("?" if v is None else str(v) for v in row) for row in rows]
    path.write_text("\n".join(lines) + "\n")
    print(f"{path}: {len(rows)} rows")


def bits(n):
    return [list(b) for b in itertools.product([0, 1], repeat=n)]


def bool_attrs(n, prefix="x"):
    return [(f"{prefix}{i + 1}", ["0", "1"]) for i in range(n)]


def mux6(out):
    rows = []
    for b in bits(6):
        address = 2 * b[0] + b[1]
        rows.append(b + [b[2 + address]])
    rows = rows + rows
    write_arff(out / "mux6.arff", "mux6",
               [("a0", ["0", "1"]), ("a1", ["0", "1"])] + [(f"d{i}", ["0", "1"]) for i in range(4)]
               + [("class", ["0", "1"])], rows)


def three_of_nine(out):
    rows = []
    for b in bits(9):
        s = "".join(map(str, b))
        rows.append(b + [int("111" in s)])
    write_arff(out / "threeOf9.arff", "threeOf9", bool_attrs(9) + [("class", ["0", "1"])], rows)


def xd6(out):
    rng = random.Random(6)
    rows = []
    for _ in range(973):
        b = [rng.randint(0, 1) for _ in range(9)]
        label = (b[0] and b[1] and b[2]) or (b[3] and b[4] and b[5]) or (b[6] and b[7] and b[8])
        rows.append(b + [int(bool(label))])
    write_arff(out / "xd6.arff", "xd6", bool_attrs(9) + [("class", ["0", "1"])], rows)


def parity5_plus_5(out):
    rng = random.Random(5)
    relevant = [0, 2, 4, 6, 8]
    rows = []
    for _ in range(1124):
        b = [rng.randint(0, 1) for _ in range(10)]
        rows.append(b + [sum(b[i] for i in relevant) % 2])
    write_arff(out / "parity5_plus_5.arff", "parity5_plus_5", bool_attrs(10, "b") + [("class", ["0", "1"])], rows)


MONK_DOMAINS = [3, 3, 2, 3, 4, 2]


def monks2(out):
    full = [list(v) for v in itertools.product(*[range(1, d + 1) for d in MONK_DOMAINS])]
    rng = random.Random(2)
    sample = rng.sample(full, 169)
    rows = []
    for v in sample + full:
        rows.append(v + [int(sum(1 for x in v if x == 1) == 2)])
    attrs = [(f"a{i + 1}", [str(k) for k in range(1, d + 1)]) for i, d in enumerate(MONK_DOMAINS)]
    write_arff(out / "monks-problems-2.arff", "monks-problems-2", attrs + [("class", ["0", "1"])], rows)


# Segments: top, upper-left, upper-right, middle, lower-left, lower-right, bottom.
LED_DIGITS = [
    [1, 1, 1, 0, 1, 1, 1],
    [0, 0, 1, 0, 0, 1, 0],
    [1, 0, 1, 1, 1, 0, 1],
    [1, 0, 1, 1, 0, 1, 1],
    [0, 1, 1, 1, 0, 1, 0],
    [1, 1, 0, 1, 0, 1, 1],
    [1, 1, 0, 1, 1, 1, 1],
    [1, 0, 1, 0, 0, 1, 0],
    [1, 1, 1, 1, 1, 1, 1],
    [1, 1, 1, 1, 0, 1, 1],
]


def led7(out):
    rng = random.Random(7)
    rows = []
    for _ in range(3200):
        digit = rng.randrange(10)
        segs = [s ^ (rng.random() < 0.1) for s in LED_DIGITS[digit]]
        rows.append([int(s) for s in segs] + [digit])
    write_arff(out / "led7.arff", "led7", bool_attrs(7, "s") + [("class", [str(d) for d in range(10)])], rows)


def read_keel(path):
    rows = []
    for line in path.read_text().splitlines():
        line = line.strip()
        if not line or line.startswith("@"):
            continue
        rows.append([c.strip() for c in line.split(",")])
    return rows


KR_VS_KP = ("bkblk bknwy bkon8 bkona bkspr bkxbq bkxcr bkxwp blxwp bxqsq cntxt dsopp dwipd hdchk katri mulch "
            "qxmsq r2ar8 reskd reskr rimmx rkxwp rxmsq simpl skach skewr skrxp spcop stlmt thrsk wkcti wkna8 "
            "wknck wkovl wkpos wtoeg").split()

HEART = ["age", "sex", "chest", "resting_blood_pressure", "serum_cholestoral", "fasting_blood_sugar",
         "resting_electrocardiographic_results", "maximum_heart_rate_achieved", "exercise_induced_angina",
         "oldpeak", "slope", "number_of_major_vessels", "thal"]

DIABETES = ["preg", "plas", "pres", "skin", "insu", "mass", "pedi", "age"]

VOTES = ["handicapped-infants", "water-project-cost-sharing", "adoption-of-the-budget-resolution",
         "physician-fee-freeze", "el-salvador-aid", "religious-groups-in-schools", "anti-satellite-test-ban",
         "aid-to-nicaraguan-contras", "mx-missile", "immigration", "synfuels-corporation-cutback",
         "education-spending", "superfund-right-to-sue", "crime", "duty-free-exports",
         "export-administration-act-south-africa"]


def nominal_domain(rows, col):
    seen = []
    for r in rows:
        if r[col] not in seen:
            seen.append(r[col])
    return sorted(seen)


def convert_keel(keel, out):
    rows = read_keel(keel / "chess.dat")
    attrs = [(n, nominal_domain(rows, i)) for i, n in enumerate(KR_VS_KP)]
    write_arff(out / "kr-vs-kp.arff", "kr-vs-kp", attrs + [("class", ["won", "nowin"])], rows)

    rows = read_keel(keel / "heart.dat")
    rows = [r[:-1] + [{"1": "absent", "2": "present"}[r[-1]]] for r in rows]
    write_arff(out / "heart-statlog.arff", "heart-statlog",
               [(n, "numeric") for n in HEART] + [("class", ["absent", "present"])], rows)

    rows = read_keel(keel / "pima.dat")
    write_arff(out / "diabetes.arff", "diabetes",
               [(n, "numeric") for n in DIABETES] + [("class", ["tested_negative", "tested_positive"])], rows)

    rows = read_keel(keel / "housevotes.dat")
    write_arff(out / "vote-complete.arff", "vote-complete",
               [(n, ["n", "y"]) for n in VOTES] + [("Class", ["democrat", "republican"])], rows)


def main():
    ap = argparse.ArgumentParser(description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    ap.add_argument("--out", type=Path, default=Path(__file__).resolve().parent.parent / "data")
    ap.add_argument("--keel-dir", type=Path)
    args = ap.parse_args()
    args.out.mkdir(parents=True, exist_ok=True)
    for make in (mux6, three_of_nine, xd6, parity5_plus_5, monks2, led7):
        make(args.out)
    if args.keel_dir:
        convert_keel(args.keel_dir, args.out)


if __name__ == "__main__":
    main()
