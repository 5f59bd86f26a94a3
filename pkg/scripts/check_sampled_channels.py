#!/usr/bin/env python3
"""
Sample channels satisfying constraints (i)-(x) on rings n = 6..11, solve
their parameters, and run every backhaul scheme on each. Prints one line
per ring; exits non-zero if any scheme leaves a message undecoded.

Usage:
    python scripts/check_sampled_channels.py
    python scripts/check_sampled_channels.py --count 500 --min-n 6 --max-n 9
"""

import argparse
import os
import sys

sys.path.insert(0, os.path.dirname(os.path.dirname(os.path.abspath(__file__))))

from cyclic_ia import create_app  # noqa: E402
from cyclic_ia.errors import SolverFault  # noqa: E402
from cyclic_ia.schemes.constraints import solve_parameters  # noqa: E402
from cyclic_ia.schemes.executor import execute  # noqa: E402
from cyclic_ia.search import sample_valid_channels  # noqa: E402

SCHEMES = ("ff", "iac", "in", "combined")


def main():
    parser = argparse.ArgumentParser(description="Run the alignment schemes on sampled valid channels")
    parser.add_argument("--count", type=int, default=200, help="Channels per ring (default: 200)")
    parser.add_argument("--min-n", type=int, default=6)
    parser.add_argument("--max-n", type=int, default=11)
    parser.add_argument("--seed", type=int, default=0)
    args = parser.parse_args()

    app = create_app()
    failures = 0
    for n in range(args.min_n, args.max_n + 1):
        channels = sample_valid_channels(n, args.count, seed=args.seed + n, attempts=app.sample_attempts)
        bad = 0
        for D in channels:
            try:
                p = solve_parameters(D)
            except SolverFault as e:
                print(f"  n={n} {D.exponents()}: {e}", file=sys.stderr)
                bad += 1
                continue
            for tag in SCHEMES:
                trace = execute(app.scheme(tag).plan(), D, p, app.payload_bits)
                if trace.decoded_count != 9 or not trace.bit_exact:
                    print(f"  n={n} {D.exponents()} {tag}: {trace.decoded_count} decoded", file=sys.stderr)
                    bad += 1
        print(f"n={n:2d}: {len(channels)} channels, {bad} failure(s)")
        failures += bad
    return 0 if failures == 0 else 1


if __name__ == "__main__":
    raise SystemExit(main())
