from fractions import Fraction

from hypothesis import HealthCheck, settings, strategies as st

from sosdecomp.algebra import QQ, QQI, GF, GaussianRational, MVPoly

# fixed seeds everywhere: property runs are reproducible
settings.register_profile(
    "repo",
    derandomize=True,
    deadline=None,
    max_examples=60,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("repo")

F7 = GF(7)
FIELDS = {"QQ": QQ, "QQI": QQI, "GF7": F7}

small_fracs = st.builds(Fraction, st.integers(-9, 9), st.integers(1, 5))


def scalars(field):
    if field == QQ:
        return small_fracs
    if field == QQI:
        return st.builds(GaussianRational, small_fracs, small_fracs)
    return st.integers(0, field.p - 1)


def polys(field, nvars=3, max_deg=3, max_terms=5):
    exps = st.tuples(*[st.integers(0, max_deg) for _ in range(nvars)])
    return st.lists(st.tuples(exps, scalars(field)), max_size=max_terms).map(
        lambda ts: MVPoly(nvars, field, ts)
    )


# one line per acceptance criterion, echoed in the terminal summary
ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda s: int(s.split()[1].rstrip(":"))):
            terminalreporter.write_line(line)
