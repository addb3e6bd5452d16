"""Print delta(k, p, l) and the worst-case disk-matrix entry for a grid of (p, l)."""

from __future__ import annotations

import argparse
import json
from dataclasses import asdict, dataclass, field

from symchab.chabauty import delta, worst_case_entry


@dataclass
class TableConfig:
    primes: list[int] = field(default_factory=lambda: [2, 3, 5])
    ells: list[int] = field(default_factory=lambda: [1, 2, 3, 4])
    k_max: int = 8
    genus: int = 3  # worst case ranges over k = 1..2g-1


def build(cfg: TableConfig) -> dict:
    out = {"config": asdict(cfg), "tables": []}
    for p in cfg.primes:
        for ell in cfg.ells:
            rows = [[k, delta(k, p, ell)] for k in range(1, cfg.k_max + 1)]
            entry, k, dl = worst_case_entry(p, cfg.genus, ell)
            out["tables"].append({"p": p, "l": ell, "rows": rows, "worst_case": {"entry": entry, "k": k, "delta": dl}})
    return out


def main(argv=None) -> None:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--k-max", type=int, default=TableConfig.k_max)
    ap.add_argument("--genus", type=int, default=TableConfig.genus)
    ap.add_argument("--json", action="store_true")
    args = ap.parse_args(argv)
    res = build(TableConfig(k_max=args.k_max, genus=args.genus))
    if args.json:
        print(json.dumps(res, indent=2))
        return
    for t in res["tables"]:
        ds = " ".join(f"{d:>2}" for _, d in t["rows"])
        wc = t["worst_case"]
        print(f"p={t['p']} l={t['l']}: delta(1..{args.k_max}) = {ds}   worst entry {wc['entry']} at k={wc['k']}")


if __name__ == "__main__":
    main()
