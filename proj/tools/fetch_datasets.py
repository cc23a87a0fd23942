#!/usr/bin/env python3
"""Download benchmark datasets from OpenML as ARFF into data/.

Nothing in the build or the tests depends on this script; it is a
convenience for machines with internet access. Files that already exist are
left alone unless --force is given.

    python3 tools/fetch_datasets.py [--out data] [--force] [name ...]

With no names, fetches vote and nursery, the two sets tools/make_datasets.py
cannot produce.
"""

import argparse
import json
import sys
import urllib.request
from pathlib import Path

API = "https://www.openml.org/api/v1/json/data/list/data_name/{name}/limit/1"
DOWNLOAD = "https://www.openml.org/data/download/{file_id}"


def fetch_json(url):
    with urllib.request.urlopen(url, timeout=60) as resp:
        return json.load(resp)


def fetch(name, out, force):
    target = out / f"{name}.arff"
    if target.exists() and not force:
        print(f"{target}: exists, skipped")
        return True
    try:
        listing = fetch_json(API.format(name=name))
        file_id = listing["data"]["dataset"][0]["file_id"]
        with urllib.request.urlopen(DOWNLOAD.format(file_id=file_id), timeout=300) as resp:
            target.write_bytes(resp.read())
    except Exception as e:  # network, HTTP and lookup failures alike
        print(f"{name}: {e}", file=sys.stderr)
        return False
    print(f"{target}: downloaded")
    return True


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("names", nargs="*", default=["vote", "nursery"])
    ap.add_argument("--out", type=Path, default=Path(__file__).resolve().parent.parent / "data")
    ap.add_argument("--force", action="store_true")
    args = ap.parse_args()
    args.out.mkdir(parents=True, exist_ok=True)
    ok = [fetch(n, args.out, args.force) for n in args.names]
    return 0 if all(ok) else 1


if __name__ == "__main__":
    sys.exit(main())
