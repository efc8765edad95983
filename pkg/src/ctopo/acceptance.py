"""The acceptance suite: ten end-to-end checks with fixed seeds and time limits.

Each check returns a ``Result``; it passes only when every assertion holds
and the wall time stays under its limit.  ``run_all`` prints one line per
check and is what ``ctopo selftest`` runs.
"""

from __future__ import annotations

import random
import time
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable

from . import maps as M
from .ball import RationalBall, ball_disjoint, ball_subset, dist2, mu_decode, mu_encode
from .decision import ContainmentQuery, Relation, Verdict, decide
from .embed import embed_compact
from .espace import separate_points
from .euclid import (
    CauchyName,
    cauchy_to_delta,
    delta_to_cauchy,
    enclosure_at,
    euclidean_space,
    point_from_rational,
)
from .gallery import (
    ORIGIN,
    ORIGIN_PRIME,
    circle,
    euclid,
    line_point,
    sphere_stereo,
    torus_embedding_map,
    two_origins,
)
from .interval import Box, box_width
from .manifold import (
    BACKWARD,
    FORWARD,
    ambient_enclosure_at,
    atlas_translator,
    ball_code,
    chart_eval,
    compatibility_certificate,
    open_submanifold,
    relabel_translator,
    split_code,
    transition,
)
from .names import Discipline, Name, Unknown, listed_name
from .words import (
    SIGMA,
    Flavor,
    fs_decode,
    fs_encode,
    nat_decode,
    nat_encode,
    rat_decode,
    rat_encode,
    scan_wrapped,
    tuple_word,
    untuple,
    wrap,
)


@dataclass
class Result:
    number: int
    title: str
    passed: bool
    detail: str
    seconds: float
    limit: float

    def line(self) -> str:
        tag = "PASS" if self.passed else "FAIL"
        return f"[{tag}] {self.number:2d} {self.title}: {self.detail} ({self.seconds:.2f}s, limit {self.limit:g}s)"


def untagged(n: Name) -> Name:
    """The same name without its exact point tag, forcing the enclosure machinery."""
    return Name(n.discipline, n.space, n._steps, label=n.label)


def contains(box: Box, q) -> bool:
    return all(iv.lo <= c <= iv.hi for iv, c in zip(box, q))


def signed_sqrt_in(lo: Fraction, hi: Fraction, sign: int, a: Fraction) -> bool:
    """Exactly: lo <= sign * sqrt(a) <= hi."""
    if sign < 0:
        lo, hi = -hi, -lo
    # now test lo <= sqrt(a) <= hi
    if hi < 0:
        return False
    upper_ok = a <= hi * hi
    lower_ok = lo <= 0 or lo * lo <= a
    return upper_ok and lower_ok


def circle_point(t: Fraction, quadrant: int = 0) -> tuple[Fraction, Fraction]:
    """A rational point of S^1 from the rational parameter t, reflected into a quadrant."""
    x, y = (1 - t * t) / (1 + t * t), 2 * t / (1 + t * t)
    sx = -1 if quadrant in (1, 2) else 1
    sy = -1 if quadrant in (2, 3) else 1
    return (sx * x, sy * y)


def random_circle_points(rng: random.Random, count: int) -> list[tuple[Fraction, Fraction]]:
    out: list[tuple[Fraction, Fraction]] = []
    seen = set()
    while len(out) < count:
        t = Fraction(rng.randint(1, 60), rng.randint(61, 97))
        p = circle_point(t, rng.randrange(4))
        if p not in seen:
            seen.add(p)
            out.append(p)
    return out


def _timed(number: int, title: str, limit: float, body: Callable[[], tuple[bool, str]]) -> Result:
    start = time.perf_counter()
    try:
        ok, detail = body()
    except Exception as exc:  # a crash is a failed criterion, reported not raised
        ok, detail = False, f"error: {type(exc).__name__}: {exc}"
    elapsed = time.perf_counter() - start
    if ok and elapsed >= limit:
        ok = False
        detail += " (too slow)"
    return Result(number, title, ok, detail, elapsed, limit)


# -- 1 ------------------------------------------------------------------------------------------


def check_encodings(seed: int = 1) -> Result:
    def body():
        rng = random.Random(seed)
        alphabet = sorted(SIGMA)
        failures = 0
        for _ in range(10_000):
            u = "".join(rng.choice(alphabet) for _ in range(rng.randrange(0, 24)))
            if scan_wrapped(wrap(u)) != (u,) or untuple(wrap(u)) != (u,):
                failures += 1
            n = rng.randrange(0, 1 << rng.randrange(1, 64))
            if nat_decode(nat_encode(n)) != n:
                failures += 1
            q = Fraction(rng.randint(-(10**6), 10**6), rng.randint(1, 10**6))
            if rat_decode(rat_encode(q)) != q:
                failures += 1
            members = ["".join(rng.choice(alphabet) for _ in range(rng.randrange(0, 6))) for _ in range(rng.randrange(0, 5))]
            if fs_decode(fs_encode(members, Flavor.UNION)) != frozenset(members):
                failures += 1
            b = RationalBall((q, Fraction(n % 97, 7)), Fraction(rng.randint(1, 50), rng.randint(1, 50)))
            if mu_decode(mu_encode(b)) != b:
                failures += 1
        blocks = ["".join(rng.choice(alphabet) for _ in range(rng.randrange(0, 16))) for _ in range(1000)]
        if list(scan_wrapped(tuple_word(blocks))) != blocks:
            failures += 1
        return failures == 0, f"{failures} codec failures over 10^4 words, 10^3-block scan exact"

    return _timed(1, "encoding exactness", 5, body)


# -- 2 ------------------------------------------------------------------------------------------


def check_point_names(seed: int = 2) -> Result:
    def body():
        rng = random.Random(seed)
        sp = euclidean_space(2)
        bad = 0
        missing = 0
        for _ in range(100):
            q = tuple(Fraction(rng.randint(-200, 200), rng.randint(1, 40)) for _ in range(2))
            n = point_from_rational(q, sp)
            for w in n.query(1000):
                if not sp.ball(w).contains(q):
                    bad += 1
            target = mu_encode(RationalBall(q, Fraction(1, 256)))
            if n.step_of(target, 10_000) is None:
                missing += 1
        return bad == 0 and missing == 0, f"{bad} unsound balls, {missing} points missing B(q,2^-8)"

    return _timed(2, "point-name soundness and completeness", 30, body)


# -- 3 ------------------------------------------------------------------------------------------


def check_cauchy_roundtrip(seed: int = 3) -> Result:
    def body():
        rng = random.Random(seed)
        sp = euclidean_space(2)
        bad = 0
        for _ in range(50):
            q = tuple(Fraction(rng.randint(-999, 999), rng.randint(1, 99)) for _ in range(2))
            # rho -> delta -> rho
            back = delta_to_cauchy(cauchy_to_delta(CauchyName.of_rational(q), sp))
            # delta -> rho -> delta, starting from an untagged name
            there = cauchy_to_delta(delta_to_cauchy(untagged(point_from_rational(q, sp))), sp)
            for k in range(21):
                r = Fraction(1, 1 << k)
                if dist2(back.approximant(k), q) >= r * r:
                    bad += 1
                box = enclosure_at(there, k)
                if box is None or not contains(box, q) or box_width(box) > 2 * r:
                    bad += 1
        return bad == 0, f"{bad} precision violations for k <= 20 on 50 points"

    return _timed(3, "Cauchy/ball-name translators", 10, body)


# -- 4 ------------------------------------------------------------------------------------------

BUDGETS = (100, 1000, 10_000, 100_000)


def _affine_query(rng: random.Random) -> tuple[ContainmentQuery, bool]:
    n = rng.choice((1, 2))
    r = lambda: Fraction(rng.randint(-40, 40), rng.randint(1, 8))  # noqa: E731
    src = RationalBall(tuple(r() for _ in range(n)), Fraction(rng.randint(1, 16), rng.randint(1, 8)))
    eps = Fraction(rng.randint(1, 12), rng.randint(1, 6))
    shift = tuple(r() for _ in range(n))
    f = M.Composition([M.Scaling(eps, n), M.Translation(shift)])
    tgt = RationalBall(tuple(r() for _ in range(n)), Fraction(rng.randint(1, 80), rng.randint(1, 4)))
    rel = rng.choice((Relation.INSIDE, Relation.DISJOINT))
    image = RationalBall(f.exact(src.center), eps * src.radius)
    truth = ball_subset(image, tgt) if rel is Relation.INSIDE else ball_disjoint(image, tgt)
    return ContainmentQuery(src, f, tgt, rel), truth


def _hw_query(rng: random.Random) -> tuple[ContainmentQuery, bool] | None:
    """h_w on a ball concentric with w: the image is exactly B(0, rho/(1 - rho^2)) in
    normalized units, so the truth and the margin are exact."""
    n = rng.choice((1, 2))
    c = tuple(Fraction(rng.randint(-20, 20), rng.randint(1, 5)) for _ in range(n))
    wr = Fraction(rng.randint(1, 8), rng.randint(1, 4))
    w = RationalBall(c, wr)
    rho = Fraction(rng.randint(1, 15), 16)
    src = RationalBall(c, wr * rho)
    R_img = rho / (1 - rho * rho)
    tc = tuple(Fraction(rng.randint(-30, 30), rng.randint(1, 6)) for _ in range(n))
    tr = Fraction(rng.randint(1, 60), rng.randint(1, 6))
    tgt = RationalBall(tc, tr)
    rel = rng.choice((Relation.INSIDE, Relation.DISJOINT))
    d2 = sum((x * x for x in tc), Fraction(0))
    m = Fraction(1, 1024)
    # signed margins compared through squares (all quantities are rational except |tc|)
    if rel is Relation.INSIDE:
        # holds iff |tc| + R_img <= tr; margin |tr - R_img - |tc|| >= m
        hi, lo = tr - R_img - m, tr - R_img + m
        if hi >= 0 and d2 <= hi * hi:
            truth = True
        elif lo <= 0 or d2 >= lo * lo:
            truth = False
        else:
            return None
    else:
        # holds iff |tc| >= tr + R_img
        s_lo, s_hi = tr + R_img + m, tr + R_img - m
        if d2 >= s_lo * s_lo:
            truth = True
        elif s_hi > 0 and d2 <= s_hi * s_hi:
            truth = False
        else:
            return None
    return ContainmentQuery(src, M.BallToSpace(w), tgt, rel), truth


def check_decisions(seed: int = 4) -> Result:
    def body():
        rng = random.Random(seed)
        disagree = 0
        flips = 0
        undecided = 0
        for _ in range(1000):
            q, truth = _affine_query(rng)
            verdicts = {decide(q, budget=b).verdict for b in BUDGETS}
            if Verdict.HOLDS in verdicts and Verdict.FAILS in verdicts:
                flips += 1
            final = decide(q, budget=BUDGETS[-1]).verdict
            if final is not (Verdict.HOLDS if truth else Verdict.FAILS):
                disagree += 1
        made = 0
        while made < 200:
            got = _hw_query(rng)
            if got is None:
                continue
            made += 1
            q, truth = got
            verdicts = {decide(q, budget=b).verdict for b in BUDGETS}
            if Verdict.HOLDS in verdicts and Verdict.FAILS in verdicts:
                flips += 1
            definite = verdicts - {Verdict.UNKNOWN}
            if not definite:
                undecided += 1
            elif definite != {Verdict.HOLDS if truth else Verdict.FAILS}:
                disagree += 1
        ok = disagree == 0 and flips == 0 and undecided == 0
        return ok, f"{disagree} disagreements, {flips} Holds/Fails flips, {undecided} undecided h_w queries"

    return _timed(4, "decision oracle cross-validation", 60, body)


# -- 5 ------------------------------------------------------------------------------------------


def check_separation(seed: int = 5) -> Result:
    def body():
        rng = random.Random(seed)
        sp = euclidean_space(2)
        bad = 0
        done = 0
        while done < 100:
            p = tuple(Fraction(rng.randint(-50, 50), rng.randint(1, 9)) for _ in range(2))
            q = tuple(Fraction(rng.randint(-50, 50), rng.randint(1, 9)) for _ in range(2))
            if p == q:
                continue
            done += 1
            out = separate_points(point_from_rational(p, sp), point_from_rational(q, sp), 100_000)
            if isinstance(out, Unknown):
                bad += 1
                continue
            u, v = sp.ball(out[0]), sp.ball(out[1])
            if not (ball_disjoint(u, v) and u.contains(p) and v.contains(q)):
                bad += 1
        stuck = 0
        for _ in range(5):
            p = tuple(Fraction(rng.randint(-50, 50), rng.randint(1, 9)) for _ in range(2))
            out = separate_points(point_from_rational(p, sp), untagged(point_from_rational(p, sp)), 10_000)
            if not isinstance(out, Unknown):
                stuck += 1
        return bad == 0 and stuck == 0, f"{bad} failed pairs of 100, {stuck} equal-point controls separated"

    return _timed(5, "Hausdorff separation in R^2", 30, body)


# -- 6 ------------------------------------------------------------------------------------------

_CIRCLE = {"f+": (0, 1), "f-": (0, -1), "g+": (1, 1), "g-": (1, -1)}


def check_circle_charts(seed: int = 6) -> Result:
    def body():
        rng = random.Random(seed)
        C = circle()
        R1 = euclidean_space(1)
        bad = 0
        checked = 0
        # the f+ machine on untagged names of points of the upper half circle
        for _ in range(50):
            x, y = circle_point(Fraction(rng.randint(1, 90), rng.randint(91, 200)), rng.choice((0, 1)))
            out = enclosure_at(chart_eval(C, "1", FORWARD, untagged(C.point_name((x, y)))), 20)
            checked += 1
            if out is None or not contains(out, (x,)) or box_width(out) > Fraction(1, 1 << 20):
                bad += 1
        # transitions: from chart (keep_i, s_i) at u to chart (keep_j, s_j) the value is s_i sqrt(1 - u^2)
        for a, (ka, sa) in _CIRCLE.items():
            for b, (kb, sb) in _CIRCLE.items():
                if ka == kb:
                    continue
                ia, ib = C.resolve_chart(a).index, C.resolve_chart(b).index
                tr = transition(C, ia, ib)
                for _ in range(50):
                    u = sb * Fraction(rng.randint(1, 999), 1000)
                    out = enclosure_at(tr(untagged(point_from_rational((u,), R1))), 20)
                    checked += 1
                    if out is None or box_width(out) > Fraction(1, 1 << 20):
                        bad += 1
                    elif not signed_sqrt_in(out[0].lo, out[0].hi, sa, 1 - u * u):
                        bad += 1
        # forward then backward through every chart holding the point
        for p in random_circle_points(rng, 50):
            for label, (k, s) in _CIRCLE.items():
                if p[1 - k] * s <= 0:
                    continue
                i = C.resolve_chart(label).index
                fwd = chart_eval(C, i, FORWARD, untagged(C.point_name(p)))
                back = chart_eval(C, i, BACKWARD, untagged(fwd))
                box = ambient_enclosure_at(back, 16, 400)
                checked += 1
                if box is None or not contains(box, p):
                    bad += 1
        return bad == 0, f"{bad} mismatches in {checked} chart, transition and round-trip checks"

    return _timed(6, "circle charts vs closed forms", 20, body)


# -- 7 ------------------------------------------------------------------------------------------


def check_compatibility(seed: int = 7) -> Result:
    def body():
        rng = random.Random(seed)
        C, S = circle(), sphere_stereo(1)
        samples = random_circle_points(rng, 25)
        good = compatibility_certificate(C, S, atlas_translator(C, S), atlas_translator(S, C), samples)
        corrupt = relabel_translator(atlas_translator(C, S), {"1": "-1", "-1": "1"})
        flagged = compatibility_certificate(C, S, corrupt, atlas_translator(S, C), samples)
        unsound = sum(1 for f in flagged.failures if f[3] == "unsound")
        ok = good.ok and not flagged.ok and unsound > 0
        return ok, f"shipped translators: {good}; swapped charts: {unsound} unsound samples flagged"

    return _timed(7, "circle vs stereographic atlas compatibility", 20, body)


# -- 8 ------------------------------------------------------------------------------------------


def check_restriction() -> Result:
    def body():
        R = euclid(1)
        w = RationalBall((Fraction(1, 2),), Fraction(1, 2))
        W = listed_name(Discipline.OPEN, R, [tuple_word([ball_code("0", w)])])
        sub, restrict, _ = open_submanifold(R, W)
        bad = 0
        for k in range(1, 21):
            x = (Fraction(k, 21),)
            words = restrict(R.point_name(x)).query(400)
            if not words:
                bad += 1
            for word in words:
                for code in untuple(word):
                    b = split_code(code)[1]
                    if not (b.contains(x) and ball_subset(b, w)):
                        bad += 1
        outside = restrict(R.point_name((Fraction(2),))).query(100_000)
        ok = bad == 0 and not outside
        return ok, f"{bad} unsound or empty restricted names, exterior point listed {len(outside)} words"

    return _timed(8, "open submanifold restriction", 20, body)


# -- 9 ------------------------------------------------------------------------------------------


def check_embedding(seed: int = 9) -> Result:
    def body():
        rng = random.Random(seed)
        C = circle()
        G = embed_compact(C)
        R8 = euclidean_space(G.dim_out)
        prec = Fraction(1, 1 << 12)
        pts = random_circle_points(rng, 60)
        names = {}

        def image(p):
            if p not in names:
                names[p] = G.forward(untagged(C.point_name(p)))
            return names[p]

        bad = 0
        for _ in range(50):
            p, q = rng.sample(pts, 2)
            ep, eq = enclosure_at(image(p), 12), enclosure_at(image(q), 12)
            if ep is None or eq is None or box_width(ep) > prec or box_width(eq) > prec:
                bad += 1
                continue
            out = separate_points(image(p), image(q), 100_000)
            if isinstance(out, Unknown):
                bad += 1
                continue
            u, v = R8.ball(out[0]), R8.ball(out[1])
            if not (ball_disjoint(u, v) and u.contains(G.exact(p)) and v.contains(G.exact(q))):
                bad += 1
        round_trip = 0
        for p in pts[:50]:
            box = ambient_enclosure_at(G.inverse(untagged(image(p))), 12, 400)
            if box is None or not contains(box, p):
                round_trip += 1
        fwd, _ = torus_embedding_map()
        R4 = euclidean_space(4)
        torus_ok = (
            fwd(point_from_rational((1, 0, 1, 0), R4)).point == (0, 2, 1)
            and fwd(point_from_rational((0, 1, 0, 1), R4)).point == (3, 0, 0)
        )
        ok = bad == 0 and round_trip == 0 and torus_ok and G.dim_out == 8
        return ok, (
            f"R^{G.dim_out}: {bad} unseparated pairs of 50, {round_trip} inverse failures of 50, "
            f"torus values {'exact' if torus_ok else 'wrong'}"
        )

    return _timed(9, "embedding S^1 into R^8", 120, body)


# -- 10 -----------------------------------------------------------------------------------------


def check_two_origins() -> Result:
    def body():
        H = two_origins()
        out = separate_points(H.point_name(ORIGIN), H.point_name(ORIGIN_PRIME), 1_000_000)
        stuck = isinstance(out, Unknown)
        bad = 0
        pairs = [(Fraction(-1), Fraction(1)), (Fraction(1, 3), Fraction(1, 2)), (Fraction(0), Fraction(1, 7)), (Fraction(5), Fraction(-3, 2))]
        for a, b in pairs:
            r = separate_points(H.point_name(line_point(a)), H.point_name(line_point(b)), 10_000)
            if isinstance(r, Unknown) or not H.disjoint(*r):
                bad += 1
        return stuck and bad == 0, f"origins {'Unknown' if stuck else 'separated'} at 10^6, {bad} ordinary pairs unseparated"

    return _timed(10, "line with two origins", 30, body)


CHECKS = (
    check_encodings,
    check_point_names,
    check_cauchy_roundtrip,
    check_decisions,
    check_separation,
    check_circle_charts,
    check_compatibility,
    check_restriction,
    check_embedding,
    check_two_origins,
)


def run_all(echo: Callable[[str], None] = print) -> list[Result]:
    results = []
    for check in CHECKS:
        r = check()
        echo(r.line())
        results.append(r)
    return results
