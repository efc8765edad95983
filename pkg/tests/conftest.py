from fractions import Fraction

from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

from ctopo.names import Name

settings.register_profile(
    "ctopo",
    deadline=None,
    max_examples=60,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("ctopo")

SYMBOLS = "01-/#"

words = st.text(alphabet=SYMBOLS, max_size=24)
binary = st.text(alphabet="01", max_size=24)
rationals = st.fractions(min_value=-50, max_value=50, max_denominator=64)
positive = st.fractions(min_value=Fraction(1, 64), max_value=8, max_denominator=64)


def strip(n: Name) -> Name:
    """The same name without its exact-point tag, forcing the name machinery."""
    return Name(n.discipline, n.space, n._steps, label=n.label)
