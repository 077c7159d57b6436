"""Print monotone (or other) cumulants in terms of symbolic moments.

Moments of the distinct variables X_1..X_n are the indeterminates
m<word>, e.g. m14 = phi(X_1 X_4), so the output is the inverted
moment-cumulant formula itself.

    python3 scripts/symbolic_cumulants.py --order 4 --flavor monotone
"""

from __future__ import annotations

import argparse
from dataclasses import dataclass

from cumulantkit.cumulants import cumulants_from_moments
from cumulantkit.exactalg import Poly, format_rational
from cumulantkit.independence import FLAVORS
from cumulantkit.moments import MomentFunctional, words


@dataclass
class SymbolicConfig:
    flavor: str = "monotone"
    order: int = 4


def symbolic_cumulant(cfg: SymbolicConfig) -> Poly:
    n = cfg.order
    table = {w: Poly.var("m" + "".join(map(str, w))) for w in words(n, n)}
    phi = MomentFunctional(n, n, table)
    return cumulants_from_moments(cfg.flavor, phi, n).cumulant(tuple(range(1, n + 1)))


def terms(p: Poly) -> list[tuple[str, str]]:
    out = []
    for exps, c in p.terms.items():
        mono = " ".join(v if e == 1 else f"{v}^{e}" for v, e in zip(p.vars, exps) if e)
        out.append((format_rational(c), mono))
    return sorted(out, key=lambda t: (t[1].count(" "), t[1]))


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--flavor", choices=FLAVORS, default="monotone")
    ap.add_argument("--order", type=int, default=4)
    args = ap.parse_args()
    cfg = SymbolicConfig(args.flavor, args.order)
    p = symbolic_cumulant(cfg)
    print(f"K_{cfg.order} ({cfg.flavor}), {len(p.terms)} terms")
    for c, mono in terms(p):
        print(f"  {c:>6}  {mono}")


if __name__ == "__main__":
    main()
