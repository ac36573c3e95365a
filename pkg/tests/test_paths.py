import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from rumornet.confmodel import Multigraph, uniform_pairing
from rumornet.degseq import build_regular
from rumornet.drp import find_short_path, short_path_failures

PATH5 = Multigraph.from_edges(5, [(0, 1), (1, 2), (2, 3), (3, 4)])


def test_neighbour_of_informed():
    assert find_short_path(PATH5, [1], 0, 3, 10) == [0, 1]


def test_no_informed_vertices():
    assert find_short_path(PATH5, [], 0, 10, 10) is None
    assert short_path_failures(PATH5, [], 3, 10).tolist() == [0, 1, 2, 3, 4]


def test_length_limit():
    assert find_short_path(PATH5, [4], 0, 3, 10) is None
    assert find_short_path(PATH5, [4], 0, 4, 10) == [0, 1, 2, 3, 4]
    assert short_path_failures(PATH5, [4], 3, 10).tolist() == [0]


def test_degree_limit_blocks_hub():
    # 0 - hub - 2 with the hub of degree 4; 2 is informed
    g = Multigraph.from_edges(5, [(0, 1), (1, 2), (1, 3), (1, 4)])
    assert find_short_path(g, [2], 0, 5, 3) is None
    assert find_short_path(g, [2], 0, 5, 4) == [0, 1, 2]
    # the start vertex itself is not degree limited
    assert find_short_path(g, [2], 1, 1, 3) == [1, 2]


def test_informed_start_rejected():
    with pytest.raises(ValueError):
        find_short_path(PATH5, [0], 0, 3, 3)


def test_boolean_mask_accepted():
    mask = np.zeros(5, dtype=bool)
    mask[4] = True
    assert find_short_path(PATH5, mask, 2, 2, 3) == [2, 3, 4]


@given(st.lists(st.integers(1, 6), min_size=4, max_size=40), st.integers(0, 2 ** 32 - 1),
       st.integers(1, 4), st.integers(1, 6))
@settings(max_examples=80, deadline=None)
def test_bulk_agrees_with_single(degrees, seed, max_len, max_deg):
    if sum(degrees) % 2:
        degrees = degrees + [1]
    rng = np.random.default_rng(seed)
    g = uniform_pairing(degrees, rng)
    informed = rng.random(g.n) < 0.2
    bulk = set(short_path_failures(g, informed, max_len, max_deg).tolist())
    single = {v for v in range(g.n) if not informed[v]
              and find_short_path(g, informed, v, max_len, max_deg) is None}
    assert bulk == single


def test_returned_paths_are_valid(rng):
    g = uniform_pairing(build_regular(2000, 4), rng)
    informed = rng.random(g.n) < 0.1
    for v in np.flatnonzero(~informed)[:200].tolist():
        p = find_short_path(g, informed, v, 5, 4)
        if p is None:
            continue
        assert p[0] == v and informed[p[-1]] and len(p) - 1 <= 5
        assert not informed[p[:-1]].any()
        for a, b in zip(p, p[1:]):
            assert b in g.neighbors(a).tolist()
