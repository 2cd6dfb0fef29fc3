import sys

import pytest

from parhom.exactalg import ZZ
from parhom.group import cyclic, product
from parhom.parmod import action_from_spans


def _unit(i, n=6):
    return tuple(1 if k == i else 0 for k in range(n))


def c2cubed_action(ring=ZZ):
    """Rank 6 action of C2^3 on x, y, z, u, v, w whose unit map is not injective."""
    G = product(cyclic(2), cyclic(2), cyclic(2))
    a, b, c = (G.index_of(n) for n in ("(g,1,1)", "(1,g,1)", "(1,1,g)"))
    ab, ac, bc = G.mul(a, b), G.mul(a, c), G.mul(b, c)
    x, y, z, u, v, w = (_unit(i) for i in range(6))
    xy, zu, vw = (1, 1, 0, 0, 0, 0), (0, 0, 1, -1, 0, 0), (0, 0, 0, 0, 1, 1)
    spans = {0: [_unit(i) for i in range(6)], a: [xy], b: [zu], c: [vw],
             ab: [x, u], ac: [v, y], bc: [z, w]}
    maps = {0: {e: e for e in spans[0]}, a: {xy: xy}, b: {zu: zu}, c: {vw: vw},
            ab: {x: u, u: x}, ac: {y: v, v: y}, bc: {z: w, w: z}}
    return action_from_spans(G, ring, 6, spans, maps, label="C2^3")


def c3_point_action(ring=ZZ):
    """Z with X_1 = Z and X_g = X_{g^2} = 0."""
    G = cyclic(3)
    return action_from_spans(G, ring, 1, {0: [(1,)]}, {0: {(1,): (1,)}}, label="C3 point")


@pytest.fixture
def c2cubed():
    return c2cubed_action()


@pytest.fixture
def c3_point():
    return c3_point_action()


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    if mod is None or not mod.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for n, title in mod.TITLES.items():
        if n in mod.RESULTS:
            status = "PASS" if mod.RESULTS[n] else "FAIL"
        else:
            status = "NOT RUN"
        terminalreporter.write_line(f"{status:<8} criterion {n:>2}: {title}")
