import io
import re
from fractions import Fraction

import pytest

from ctopo.ball import ball_disjoint, parse_ball
from ctopo.cli import main


def run(*argv):
    out = io.StringIO()
    rc = main(list(argv), out=out)
    return rc, out.getvalue()


def bounds(line):
    lo, hi = re.match(r"\[(.*), (.*)\]", line.strip()).groups()
    return Fraction(lo), Fraction(hi)


def test_eval_stereographic():
    rc, out = run("eval", "sphere-stereo:1", "--chart", "s+1", "--point", "0,-1", "--precision", "16")
    assert rc == 0
    lo, hi = bounds(out)
    assert lo <= 0 <= hi and hi - lo < Fraction(1, 1 << 16)


def test_eval_transition():
    rc, out = run("eval", "circle", "--chart", "f+", "--to", "g+", "--point", "3/5", "--precision", "20")
    lo, hi = bounds(out)
    assert rc == 0 and lo <= Fraction(4, 5) <= hi


def test_eval_backward():
    rc, out = run("eval", "circle", "--chart", "f+", "--direction", "backward", "--point", "3/5", "--precision", "8")
    assert rc == 0
    x, y = out.strip().split(" x ")
    assert bounds(x)[0] <= Fraction(3, 5) <= bounds(x)[1]
    assert bounds(y)[0] <= Fraction(4, 5) <= bounds(y)[1]


def test_separate():
    rc, out = run("separate", "euclid:2", "--points", "(0,0)", "(0,1)", "--budget", "10000")
    assert rc == 0
    a, b = (parse_ball(line.split(":", 1)[1]) for line in out.strip().splitlines())
    assert a.contains((0, 0)) and b.contains((0, 1)) and ball_disjoint(a, b)


def test_member():
    rc, out = run("member", "euclid:1", "--point", "2", "--open", "B(0;1)", "--budget", "1000")
    assert rc == 0 and out.strip() == "Unknown(budget=1000)"
    rc, out = run("member", "euclid:1", "--point", "1/2", "--open", "B(0;1)", "--budget", "1000")
    assert rc == 0 and out.startswith("Confirmed")


def test_name_dump():
    rc, out = run("name", "euclid:1", "--point", "1/2", "--budget", "5")
    lines = out.strip().splitlines()
    assert rc == 0 and lines
    steps = [int(line.split()[0]) for line in lines]
    assert steps == sorted(steps) and max(steps) <= 5
    rc2, out2 = run("name", "euclid:1", "--point", "1/2", "--budget", "5")
    assert out2 == out


def test_name_decoded():
    rc, out = run("name", "circle", "--point", "0,1", "--budget", "4", "--decode")
    assert rc == 0 and "B(" in out


def test_restrict():
    rc, out = run("restrict", "euclid:1", "--open", "B(1/2;1/2)", "--point", "1/4", "--budget", "30")
    assert rc == 0
    lines = [line for line in out.strip().splitlines() if not line.endswith("whole")]
    assert lines
    for line in lines:
        for part in line.split(" ", 1)[1].split(" & "):
            b = parse_ball(part.split(":", 1)[1])
            assert b.contains((Fraction(1, 4),))


def test_restrict_outside():
    rc, out = run("restrict", "euclid:1", "--open", "B(1/2;1/2)", "--point", "2", "--budget", "50")
    assert rc == 0 and out.startswith("no output")


def test_embed_demo():
    rc, out = run("embed-demo", "--samples", "2", "--precision", "8")
    assert rc == 0
    assert "torus (1, 0, 1, 0) -> (0, 2, 1)" in out
    assert "-> R^8" in out


@pytest.mark.parametrize(
    "argv",
    [
        ("eval", "circle", "--chart", "nope", "--point", "0,1"),
        ("eval", "klein-bottle", "--chart", "f+", "--point", "0,1"),
        ("name", "circle", "--point", "3/5,4/7"),
        ("name", "circle", "--point", "1/2"),
        ("name", "euclid:1", "--point", "one"),
        ("member", "euclid:2", "--point", "0,0", "--open", "B(0;1)"),
        ("name", "euclid:1", "--point", "0", "--budget", "-3"),
        ("separate", "euclid:1", "--points", "0"),
        ("frobnicate",),
    ],
)
def test_malformed_input(argv):
    rc, _ = run(*argv)
    assert rc == 1


def test_help():
    assert run("--help")[0] == 0
