#!/usr/bin/env python3
"""Census of PLS species by size, with per-level timing.

    python scripts/species_census.py --max-size 7
"""

from __future__ import annotations

import argparse
import time

from cayley_embed import enumerate_species


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--max-size", type=int, default=7)
    args = ap.parse_args()

    prev = 0.0
    for m in range(1, args.max_size + 1):
        t0 = time.time()
        levels = enumerate_species(m)
        dt = time.time() - t0
        print(f"size {m}: {len(levels[m]):>6} species   (+{dt:.2f} s)")
        prev += dt
    print(f"total {prev:.2f} s")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
