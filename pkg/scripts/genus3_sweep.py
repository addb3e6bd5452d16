"""Sweep every odd genus-3 model y^2 + g(x) y = h(x) over F_2 (h monic of degree 7,
deg g <= 3) and tabulate #Sym^2 X(F_2) for the nonsingular ones."""

from __future__ import annotations

import argparse
import collections
import itertools
import json
import time
from dataclasses import asdict, dataclass

from symchab.chabauty import (
    CurveSpec,
    closed_points,
    count_points,
    good_reduction,
    hasse_weil_cap,
    sym_profiles,
)


@dataclass
class SweepConfig:
    genus: int = 3
    max_e: int = 4  # field degrees checked against Hasse-Weil
    d: int = 2


@dataclass
class SweepResult:
    models: int
    nonsingular: int
    max_profiles: int
    formula_mismatches: int
    hasse_weil_violations: int
    histogram: dict
    seconds: float


def models(genus: int):
    deg_h = 2 * genus + 1
    for low in itertools.product((0, 1), repeat=deg_h):
        for g in itertools.product((0, 1), repeat=genus + 1):
            yield CurveSpec(genus, 2, tuple(low) + (1,), tuple(g))


def sweep(cfg: SweepConfig) -> SweepResult:
    t0 = time.perf_counter()
    n = good = worst = mism = hw = 0
    hist = collections.Counter()
    for c in models(cfg.genus):
        n += 1
        if not good_reduction(c):
            continue
        good += 1
        for e in range(1, cfg.max_e + 1):
            if count_points(c, e) > hasse_weil_cap(cfg.genus, 2, e):
                hw += 1
        a = closed_points(c, cfg.d).counts
        k = len(sym_profiles(c, cfg.d))
        if k != a[1] * (a[1] + 1) // 2 + a[2]:
            mism += 1
        worst = max(worst, k)
        hist[(a[1], k)] += 1
    hist_out = {f"a1={a1},profiles={k}": v for (a1, k), v in sorted(hist.items())}
    return SweepResult(n, good, worst, mism, hw, hist_out, time.perf_counter() - t0)


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--max-e", type=int, default=SweepConfig.max_e)
    args = ap.parse_args(argv)
    res = sweep(SweepConfig(max_e=args.max_e))
    print(json.dumps(asdict(res), indent=2))


if __name__ == "__main__":
    main()
