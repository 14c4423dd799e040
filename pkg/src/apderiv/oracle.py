"""Brute-force ground truth for the analytic modules.

Nothing here uses the standard form or the exponent recursion: preimages are
found by evaluating D_p on every |x| <= p*Y, and orbits by applying D_p to
materialized integers.  Since |D_p(x)| >= |x| / p whenever p | x, the sweep
is complete for every |y| <= Y.
"""

from __future__ import annotations

import heapq
import json
import os
import tempfile
from collections import Counter
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from itertools import groupby
from operator import itemgetter
from typing import IO, Iterable, Iterator

from .antideriv import anti_derivatives
from .core import INF, PSplit, check_bits, check_prime, dp, ord_p
from .errors import ParameterError
from .orbit import inc_profile, ord_sequence

# above this many x values the (y, x) pairs are spilled to sorted runs on disk
SPILL_THRESHOLD = 10**7


def _pairs(p: int, y_max: int, lo: int, hi: int) -> list[tuple[int, int]]:
    out = []
    for x in range(lo, hi):
        y = dp(p, x)
        if y != 0 and -y_max <= y <= y_max:
            out.append((y, x))
    out.sort()
    return out


def _chunks(p: int, y_max: int, size: int) -> list[tuple[int, int]]:
    lo, stop = -p * y_max, p * y_max + 1
    return [(a, min(a + size, stop)) for a in range(lo, stop, size)]


def _spill(pairs: list[tuple[int, int]]) -> str:
    fd, path = tempfile.mkstemp(prefix="apderiv-run-", suffix=".txt")
    with os.fdopen(fd, "w") as fh:
        fh.writelines(f"{y} {x}\n" for y, x in pairs)
    return path


def _read_run(path: str) -> Iterator[tuple[int, int]]:
    with open(path) as fh:
        for line in fh:
            y, x = line.split()
            yield int(y), int(x)


def iter_inverse(p: int, y_max: int, jobs: int = 1,
                 threshold: int = SPILL_THRESHOLD) -> Iterator[tuple[int, list[int]]]:
    """Yield (y, sorted preimages) for every y with 1 <= |y| <= y_max, ascending in y.

    The output is identical for any ``jobs``: chunks are sorted runs and the
    merge is a deterministic heap merge keyed on (y, x).
    """
    check_prime(p)
    if y_max < 1:
        raise ParameterError("range bound must be >= 1")
    span = 2 * p * y_max + 1
    size = min(threshold, max(1, -(-span // max(jobs, 1))))
    chunks = _chunks(p, y_max, size)
    spill = span > threshold
    paths: list[str] = []
    runs: list[Iterable[tuple[int, int]]] = []
    try:
        if jobs > 1:
            with ProcessPoolExecutor(max_workers=jobs) as pool:
                futures = [pool.submit(_pairs, p, y_max, lo, hi) for lo, hi in chunks]
                results = (f.result() for f in futures)
                for pairs in results:
                    if spill:
                        paths.append(_spill(pairs))
                    else:
                        runs.append(pairs)
        else:
            for lo, hi in chunks:
                pairs = _pairs(p, y_max, lo, hi)
                if spill:
                    paths.append(_spill(pairs))
                else:
                    runs.append(pairs)
        runs += [_read_run(path) for path in paths]
        groups = groupby(heapq.merge(*runs), key=itemgetter(0))
        head = next(groups, None)
        # y values without preimages are part of the report as well
        for y in range(-y_max, y_max + 1):
            if y == 0:
                continue
            if head is not None and head[0] == y:
                yield y, [x for _, x in head[1]]
                head = next(groups, None)
            else:
                yield y, []
    finally:
        for path in paths:
            os.unlink(path)


@dataclass
class SweepReport:
    p: int
    y_max: int
    inverse_map: dict[int, list[int]]
    histogram: dict[int, int]
    witnesses: dict[int, int]
    mismatches: list[dict] = field(default_factory=list)

    def antis(self, y: int) -> list[int]:
        return self.inverse_map[y]

    def write_jsonl(self, fh: IO[str]) -> None:
        for y, xs in self.inverse_map.items():
            fh.write(json.dumps({"y": y, "antis": xs}, separators=(",", ":")) + "\n")
        fh.write(json.dumps({"histogram": {str(n): c for n, c in sorted(self.histogram.items())},
                             "witnesses": {str(n): y for n, y in sorted(self.witnesses.items())}},
                            separators=(",", ":")) + "\n")


def sweep_invert(p: int, y_max: int, jobs: int = 1) -> SweepReport:
    inverse = dict(iter_inverse(p, y_max, jobs))
    histogram: Counter = Counter()
    witnesses: dict[int, int] = {}
    for y in range(1, y_max + 1):
        n = len(inverse[y])
        histogram[n] += 1
        witnesses.setdefault(n, y)
    return SweepReport(p, y_max, inverse, dict(sorted(histogram.items())), witnesses)


def compare_with_analytic(report: SweepReport) -> SweepReport:
    """Fill ``report.mismatches`` by checking every y against the analytic enumeration."""
    report.mismatches = []
    for y, xs in report.inverse_map.items():
        predicted = sorted(m.value() for m in anti_derivatives(report.p, y).members)
        if predicted != xs:
            report.mismatches.append({"y": y, "sweep": xs, "analytic": predicted})
    return report


def simulate_literal(p: int, x: int, steps: int) -> list[int]:
    """x, D_p(x), ..., D_p^steps(x) on materialized integers."""
    check_prime(p)
    out = [x]
    for _ in range(steps):
        x = dp(p, x)
        check_bits("orbit value", x.bit_length())
        out.append(x)
    return out


def literal_ords(p: int, x: int, steps: int) -> list[int | float]:
    return [ord_p(p, v) for v in simulate_literal(p, x, steps)]


@dataclass(frozen=True)
class IncCheck:
    p: int
    ell: int
    terms: int
    passed: bool
    first_divergence: int | None
    predicted: tuple[int, ...]
    simulated: tuple[int, ...]

    @property
    def verdict(self) -> str:
        return "PASS" if self.passed else "FAIL"


def check_inc_prediction(p: int, ell: int, terms: int) -> IncCheck:
    """Compare the predicted inc profile with first differences of the ord recursion."""
    predicted = inc_profile(p, ell).unroll(terms)
    ords = ord_sequence(p, PSplit(p, 1, ell), terms + 1).terms
    if INF in ords:
        raise ParameterError("orbit reached 0; the inc sequence is undefined")
    simulated = [b - a for a, b in zip(ords, ords[1:])]
    bad = next((i for i, (u, v) in enumerate(zip(predicted, simulated)) if u != v), None)
    return IncCheck(p, ell, terms, bad is None, bad, tuple(predicted), tuple(simulated))

