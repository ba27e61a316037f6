#!/usr/bin/env python3
"""Build letter.train / letter.test in sparse text format.

The UCI Letter Recognition data (20000 rows, 16 integer features, classes
A-Z) is taken from the keel-ds wheel on PyPI, which ships the raw file.
Classes are written as 1..26. The first 12000 rows become the training
set and the last 6000 the test set.

usage: fetch_letter.py [--wheel PATH] [--out DIR]
"""
import argparse
import glob
import os
import subprocess
import sys
import tempfile
import zipfile

MEMBER = "keel_ds/data/balanced/raw/letter.dat"
N_TRAIN = 12000
N_TEST = 6000


def find_wheel(explicit):
    if explicit:
        return explicit
    tmp = tempfile.mkdtemp()
    subprocess.check_call([sys.executable, "-m", "pip", "download", "--no-deps",
                           "--dest", tmp, "keel-ds==0.2.5"])
    return glob.glob(os.path.join(tmp, "keel_ds-*.whl"))[0]


def to_sparse(row):
    *feats, letter = row.strip().split(",")
    label = ord(letter.strip()) - ord("A") + 1
    parts = [str(label)]
    for i, v in enumerate(feats, start=1):
        if int(v) != 0:
            parts.append(f"{i}:{int(v)}")
    return " ".join(parts)


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--wheel")
    ap.add_argument("--out", default=os.path.join(os.path.dirname(__file__), "..", "data"))
    args = ap.parse_args()

    with zipfile.ZipFile(find_wheel(args.wheel)) as z:
        rows = [r for r in z.read(MEMBER).decode().splitlines() if r.strip()]
    if len(rows) != N_TRAIN + 8000:
        sys.exit(f"unexpected row count {len(rows)}")
    os.makedirs(args.out, exist_ok=True)
    with open(os.path.join(args.out, "letter.train"), "w") as f:
        f.writelines(to_sparse(r) + "\n" for r in rows[:N_TRAIN])
    with open(os.path.join(args.out, "letter.test"), "w") as f:
        f.writelines(to_sparse(r) + "\n" for r in rows[-N_TEST:])


if __name__ == "__main__":
    main()
