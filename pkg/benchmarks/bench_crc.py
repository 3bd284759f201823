#!/usr/bin/env python3
"""Compare the compiled checksum kernel against the pure-Python fallback.

Three workloads:

  * checksum microbenchmarks at the two wire-relevant buffer sizes
    (19 bytes: signature + command payload; 264: signature + max transfer);
  * one fuzzy-attack window (checksum per injection, RNG included);
  * one full labeled scenario generation run.

Run after `pip install -e . --no-build-isolation`:

    python benchmarks/bench_crc.py [--repeats N]
"""

import argparse
import statistics
from time import perf_counter

from canforge import builtin_scenario, crc, run_scenario
from canforge.attacks import AttackConfig, AttackKind, fuzzy_stream


def timed(fn, repeats):
    samples = []
    for _ in range(repeats):
        started = perf_counter()
        fn()
        samples.append(perf_counter() - started)
    return min(samples), statistics.median(samples)


def bench_checksum(impl, size, loops):
    data = bytes(range(256)) * (size // 256 + 1)
    buffer = data[:size]

    def run():
        for _ in range(loops):
            impl(buffer)

    return run


def bench_fuzzy():
    cfg = AttackConfig(AttackKind.FUZZY, start=0.0, duration=30.0, interval=0.005, seed=1)

    def run():
        fuzzy_stream(cfg)

    return run


def bench_scenario():
    spec = builtin_scenario(2)

    def run():
        run_scenario(spec, seed=1)

    return run


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--repeats", type=int, default=5, help="samples per measurement")
    args = parser.parse_args()

    backends = crc.available_backends()
    if "c" not in backends:
        print("note: compiled kernel unavailable; timing the fallback only")

    rows = []
    workloads = [
        ("crc16 19 B x 50k", lambda: bench_checksum(crc.crc16_ccitt, 19, 50_000)),
        ("crc16 264 B x 20k", lambda: bench_checksum(crc.crc16_ccitt, 264, 20_000)),
        ("fuzzy window (6k injections)", bench_fuzzy),
        ("scenario 2 generation", bench_scenario),
    ]
    original = crc.backend()
    try:
        for name, make in workloads:
            timings = {}
            for backend in backends:
                crc.set_backend(backend)
                best, _ = timed(make(), args.repeats)
                timings[backend] = best
            rows.append((name, timings))
    finally:
        crc.set_backend(original)

    width = max(len(name) for name, _ in rows)
    header = f"{'workload':<{width}}  " + "".join(f"{b:>12}" for b in backends)
    if len(backends) == 2:
        header += f"{'speedup':>10}"
    print(header)
    print("-" * len(header))
    for name, timings in rows:
        line = f"{name:<{width}}  " + "".join(f"{timings[b] * 1e3:>10.1f}ms" for b in backends)
        if len(backends) == 2:
            line += f"{timings['python'] / timings['c']:>9.1f}x"
        print(line)


if __name__ == "__main__":
    main()
