"""Command-line interface.

    ctopo name euclid:2 --point 1/2,0 --budget 50
    ctopo eval sphere-stereo:1 --chart s+1 --point 0,-1 --precision 16
    ctopo eval circle --chart f+ --to g+ --point 3/5 --precision 20
    ctopo member euclid:1 --point 2 --open "B(0;1)" --budget 1000
    ctopo separate euclid:2 --points "(0,0)" "(0,1)" --budget 10000
    ctopo restrict euclid:1 --open "B(1/2;1/2)" --point 1/4 --budget 200
    ctopo embed-demo --samples 3 --precision 12
    ctopo selftest

Exit status: 0 success (Unknown answers included), 1 malformed input,
2 contract violation or a failed self-test.
"""

from __future__ import annotations

import argparse
import sys
from fractions import Fraction
from typing import Sequence

from .ball import format_ball, format_rational, mu_decode, parse_ball, parse_vector
from .espace import separate_points
from .euclid import enclosure_at, euclidean_space, point_from_rational
from .gallery import make
from .interval import Box
from .manifold import (
    BACKWARD,
    FORWARD,
    ManifoldSpace,
    ambient_enclosure_at,
    ball_code,
    chart_eval,
    open_submanifold,
    transition,
)
from .names import ContractViolation, Discipline, Name, listed_name, member_semidecide
from .words import InvalidCode, tuple_word, untuple


class Malformed(Exception):
    pass


def _strip(n: Name) -> Name:
    # drop the exact tag so the answer comes from the name machinery
    return Name(n.discipline, n.space, n._steps, label=n.label)


def format_box(box: Box) -> str:
    return " x ".join(f"[{format_rational(iv.lo)}, {format_rational(iv.hi)}]" for iv in box)


def _space(ident: str) -> ManifoldSpace:
    try:
        return make(ident)
    except ValueError as exc:
        raise Malformed(str(exc)) from None


def _point(s: str, dim: int | None = None) -> tuple[Fraction, ...]:
    try:
        q = parse_vector(s)
    except InvalidCode as exc:
        raise Malformed(str(exc)) from None
    if dim is not None and len(q) != dim:
        raise Malformed(f"expected a point with {dim} coordinates, got {s!r}")
    return q


def _carrier_point(space: ManifoldSpace, s: str) -> tuple[Fraction, ...]:
    q = _point(s, space.atlas.ambient)
    if not space.atlas.on_carrier(q):
        raise Malformed(f"{s!r} is not a point of {space.label}")
    return q


def _chart(space: ManifoldSpace, key: str):
    try:
        return space.resolve_chart(key)
    except ContractViolation as exc:
        raise Malformed(str(exc)) from None


def _open_name(space: ManifoldSpace, literal: str, chart: str | None) -> Name:
    c = _chart(space, chart) if chart else space.atlas.chart(next(space.atlas.indices()))
    try:
        b = parse_ball(literal)
    except InvalidCode as exc:
        raise Malformed(str(exc)) from None
    if b.dim != space.dim:
        raise Malformed(f"ball of dimension {b.dim} in a {space.dim}-manifold")
    return listed_name(Discipline.OPEN, space, [tuple_word([ball_code(c.index, b)])], label=literal)


def cmd_name(a, out) -> int:
    space = _space(a.target)
    x = _carrier_point(space, a.point)
    n = space.point_name(x)
    for step, w in n.listing(a.budget):
        out.write(f"{step} {space.format_code(w) if a.decode else w}\n")
    return 0


def cmd_eval(a, out) -> int:
    space = _space(a.target)
    chart = _chart(space, a.chart)
    # one extra bit so the printed width is strictly below 2^-precision
    prec = a.precision + 1
    if a.to:
        other = _chart(space, a.to)
        y = _point(a.point, space.dim)
        src = point_from_rational(y, euclidean_space(space.dim))
        res = transition(space, chart.index, other.index)(_strip(src))
        box = enclosure_at(res, prec, a.budget)
    elif a.direction == "backward":
        y = _point(a.point, space.dim)
        src = point_from_rational(y, euclidean_space(space.dim))
        res = chart_eval(space, chart.index, BACKWARD, _strip(src))
        box = ambient_enclosure_at(res, prec, a.budget)
    else:
        x = _carrier_point(space, a.point)
        res = chart_eval(space, chart.index, FORWARD, _strip(space.point_name(x)))
        box = enclosure_at(res, prec, a.budget)
    if box is None:
        out.write(f"Unknown at budget {a.budget}\n")
    else:
        out.write(format_box(box) + "\n")
    return 0


def cmd_member(a, out) -> int:
    space = _space(a.target)
    x = _carrier_point(space, a.point)
    W = _open_name(space, a.open, a.chart)
    out.write(f"{member_semidecide(space.point_name(x), W, a.budget)}\n")
    return 0


def cmd_separate(a, out) -> int:
    space = _space(a.target)
    if len(a.points) != 2:
        raise Malformed("separate needs exactly two points")
    x, y = (_carrier_point(space, p) for p in a.points)
    res = separate_points(space.point_name(x), space.point_name(y), a.budget)
    if isinstance(res, tuple):
        out.write(f"{space.format_code(res[0])}\n{space.format_code(res[1])}\n")
    else:
        out.write(f"{res}\n")
    return 0


def cmd_restrict(a, out) -> int:
    space = _space(a.target)
    x = _carrier_point(space, a.point)
    W = _open_name(space, a.open, a.chart)
    sub, restrict, _ = open_submanifold(space, W)
    listing = restrict(space.point_name(x)).listing(a.budget)
    if not listing:
        out.write(f"no output at budget {a.budget}\n")
    for step, w in listing:
        parts = []
        for code in untuple(w):
            idx, ball = untuple(code, 2)
            chart = sub.atlas.chart(idx)
            parts.append(f"{chart.name}:{format_ball(mu_decode(ball))}")
        out.write(f"{step} {' & '.join(parts) or 'whole'}\n")
    return 0


def cmd_embed_demo(a, out) -> int:
    from .acceptance import random_circle_points
    from .embed import embed_compact
    from .gallery import circle, torus_embedding_map

    import random

    fwd, _ = torus_embedding_map()
    R4 = euclidean_space(4)
    for p in ((1, 0, 1, 0), (0, 1, 0, 1)):
        img = fwd(point_from_rational(p, R4)).point
        out.write(f"torus {p} -> ({', '.join(format_rational(c) for c in img)})\n")
    C = circle()
    G = embed_compact(C)
    out.write(f"S^1 with {len(G.components)} charts -> R^{G.dim_out}\n")
    for p in random_circle_points(random.Random(0), a.samples):
        box = enclosure_at(G.forward(_strip(C.point_name(p))), a.precision, a.budget)
        label = f"({format_rational(p[0])}, {format_rational(p[1])})"
        out.write(f"G{label} in {format_box(box) if box else 'Unknown'}\n")
    return 0


def cmd_selftest(a, out) -> int:
    from .acceptance import run_all

    results = run_all(lambda line: (out.write(line + "\n"), out.flush()))
    failed = [r for r in results if not r.passed]
    out.write(f"{len(results) - len(failed)}/{len(results)} criteria passed\n")
    return 0 if not failed else 2


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="ctopo", description="Computable manifolds on budgeted names.")
    sub = p.add_subparsers(dest="verb", required=True)

    def common(sp, target=True):
        if target:
            sp.add_argument("target", help="gallery id such as euclid:2, circle, sphere-stereo:1, torus:2")
        sp.add_argument("--precision", type=_nonneg, default=16, help="output width 2^-k")
        sp.add_argument("--budget", type=_nonneg, default=10_000, help="step budget")
        sp.add_argument("--samples", type=_nonneg, default=5, help="sample count for demos")

    s = sub.add_parser("name", help="dump a point name prefix as '<step> <word>' lines")
    common(s)
    s.add_argument("--point", required=True)
    s.add_argument("--decode", action="store_true", help="print words as chart:ball literals")
    s.set_defaults(run=cmd_name)

    s = sub.add_parser("eval", help="apply a chart, its inverse or a transition")
    common(s)
    s.add_argument("--chart", required=True)
    s.add_argument("--to", help="second chart: evaluate the transition")
    s.add_argument("--direction", choices=("forward", "backward"), default="forward")
    s.add_argument("--point", required=True)
    s.set_defaults(run=cmd_eval)

    s = sub.add_parser("member", help="semi-decide membership in an open ball of a chart")
    common(s)
    s.add_argument("--point", required=True)
    s.add_argument("--open", required=True, help='ball literal such as "B(0;1)"')
    s.add_argument("--chart")
    s.set_defaults(run=cmd_member)

    s = sub.add_parser("separate", help="search for disjoint base sets around two points")
    common(s)
    s.add_argument("--points", nargs="+", required=True)
    s.set_defaults(run=cmd_separate)

    s = sub.add_parser("restrict", help="restrict a point name to an open submanifold")
    common(s)
    s.add_argument("--point", required=True)
    s.add_argument("--open", required=True)
    s.add_argument("--chart")
    s.set_defaults(run=cmd_restrict)

    s = sub.add_parser("embed-demo", help="torus in R^3 and the S^1 -> R^8 embedding")
    common(s, target=False)
    s.set_defaults(run=cmd_embed_demo)

    s = sub.add_parser("selftest", help="run the acceptance suite")
    s.set_defaults(run=cmd_selftest)
    return p


def _nonneg(s: str) -> int:
    n = int(s)
    if n < 0:
        raise argparse.ArgumentTypeError("must be a non-negative integer")
    return n


def main(argv: Sequence[str] | None = None, out=None) -> int:
    out = out or sys.stdout
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 0 if exc.code == 0 else 1
    try:
        return args.run(args, out)
    except (Malformed, InvalidCode) as exc:
        sys.stderr.write(f"error: {exc}\n")
        return 1
    except ContractViolation as exc:
        sys.stderr.write(f"contract violation: {exc}\n")
        return 2


if __name__ == "__main__":
    sys.exit(main())
