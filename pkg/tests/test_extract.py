import itertools
import random
from fractions import Fraction
from pathlib import Path

import networkx as nx
import numpy as np
import pytest

from pathdensity import coloring as col
from pathdensity import extract as ex
from pathdensity import sequences as s
from pathdensity.errors import FormatError, PreconditionError
from pathdensity.graphmodel import (
    Color,
    SimpleForest,
    TotalColoredGraph,
    complete_random_coloring,
    random_coloring,
    read_coloring,
    validate_simple_forest,
)
from pathdensity.oracle import optimal_simple_forest

R, B = Color.RED, Color.BLUE
DATA = Path(__file__).parent / "data"


def graph(colors: str, edge_color, alpha=0):
    """Complete graph whose edge colours come from ``edge_color(u, v)``."""
    n = len(colors)
    em = np.zeros((n, n), dtype=np.int8)
    for u in range(1, n + 1):
        for v in range(u + 1, n + 1):
            em[u - 1, v - 1] = em[v - 1, u - 1] = edge_color(u, v)
    return TotalColoredGraph([Color.from_letter(c) for c in colors], em, alpha)


# -- Koenig ------------------------------------------------------------------------


def test_konig_path():
    Bp = ex.BipartiteReduction.from_edges([1, 3], [2], [(1, 2, R), (3, 2, R)])
    cert = ex.konig(Bp, R)
    cert.check(Bp)
    assert len(cert.matching) == 1 and cert.cover == {2}


def test_konig_complete_bipartite():
    edges = [(u, v, B) for u in (1, 2, 3) for v in (4, 5, 6, 7)]
    Bp = ex.BipartiteReduction.from_edges([1, 2, 3], [4, 5, 6, 7], edges)
    cert = ex.konig(Bp, B)
    cert.check(Bp)
    assert len(cert.matching) == 3 and cert.cover == {1, 2, 3}
    empty = ex.konig(Bp, R)
    assert empty.matching == () and empty.cover == frozenset()


def test_konig_rejects_non_crossing_edge():
    with pytest.raises(PreconditionError):
        ex.BipartiteReduction.from_edges([1], [2], [(3, 2, R)])


def flow_matching_size(Bp, color):
    H = nx.DiGraph()
    for u in Bp.left:
        H.add_edge("s", ("L", u), capacity=1)
    for v in Bp.right:
        H.add_edge(("R", v), "t", capacity=1)
    for u, v in Bp.edges(color):
        H.add_edge(("L", u), ("R", v), capacity=1)
    if "s" not in H or "t" not in H:
        return 0
    return nx.maximum_flow_value(H, "s", "t")


def test_konig_against_max_flow():
    rng = random.Random(11)
    for _ in range(500):
        nl, nr = rng.randint(0, 30), rng.randint(0, 30)
        p = rng.random()
        mat = np.array(
            [[rng.choice((R, B)) if rng.random() < p else 0 for _ in range(nr)] for _ in range(nl)],
            dtype=np.int8,
        ).reshape(nl, nr)
        Bp = ex.BipartiteReduction(tuple(range(1, nl + 1)), tuple(range(100, 100 + nr)), mat)
        for c in (R, B):
            cert = ex.konig(Bp, c)
            cert.check(Bp)
            assert len(cert.matching) == flow_matching_size(Bp, c)


# -- degree sequence ---------------------------------------------------------------------------


def test_degree_sequence_examples():
    assert ex.degree_sequence(graph("RB", lambda u, v: B)).values == (1,)
    assert set(ex.degree_sequence(graph("RBRBB", lambda u, v: R)).values) == {0}
    with pytest.raises(PreconditionError, match="no red vertex"):
        ex.degree_sequence(graph("BB", lambda u, v: B))


def test_degree_sequence_self_consistent():
    G = complete_random_coloring(60, 3)
    d = ex.degree_sequence(G)
    assert list(d.values) == sorted(d.values)
    for v, val in zip(d.vertices, d.values):
        assert val == sum(1 for b in G.blue if G.edge_color(v, b) is B)
    # ties keep vertex order
    for (v1, a1), (v2, a2) in zip(zip(d.vertices, d.values), zip(d.vertices[1:], d.values[1:])):
        if a1 == a2:
            assert v1 < v2


# -- the two claims -------------------------------------------------------------------------------


def test_blue_claim_vacuous_threshold():
    G = complete_random_coloring(20, 8)
    Rp = G.red
    F = ex.extract_blue_forest(G, Rp, len(Rp))
    assert validate_simple_forest(G, F)
    assert F.edges == frozenset() and F.isolated == frozenset(G.blue)


def small_blue_instance():
    blue = {(1, 4), (1, 5), (2, 4), (2, 5), (2, 6), (3, 4), (3, 5), (3, 6), (3, 7)}
    return graph("RRRBBBBB", lambda u, v: B if (u, v) in blue else R)


def test_blue_claim_small_instance():
    G = small_blue_instance()
    assert ex.degree_sequence(G).values == (2, 3, 4)
    F = ex.extract_blue_forest(G, [1, 2, 3], 1)
    assert validate_simple_forest(G, F)
    covered = F.vertices
    assert {1, 2} <= covered
    assert len(({1, 2, 3} | set(G.blue)) - covered) <= 1
    # brute force: some blue matching saturates v_1 and v_2
    assert any(
        G.edge_color(1, x) is B and G.edge_color(2, y) is B
        for x, y in itertools.permutations(G.blue, 2)
    )


def test_blue_claim_names_failing_index():
    G = graph("RRBB", lambda u, v: R)
    with pytest.raises(PreconditionError) as info:
        ex.extract_blue_forest(G, [1, 2], 1)
    assert info.value.index == 1


def test_red_claim_all_red():
    G = graph("RRRRBBBB", lambda u, v: R)
    F = ex.extract_red_forest(G, G.blue, 1)
    assert validate_simple_forest(G, F)
    assert len(set(G.vertices_of(R)) | set(G.blue)) - len(F.vertices) <= 1


def test_red_claim_names_failing_index():
    G = graph("RRBBBBB", lambda u, v: B)
    with pytest.raises(PreconditionError) as info:
        ex.extract_red_forest(G, G.blue, 1)
    assert info.value.index == 1


def test_red_claim_cover_branch_matches_flow():
    rng = random.Random(5)
    hit = 0
    for seed in range(60):
        G = random_coloring(40, seed, red_edge_prob=0.6)
        Bp = [b for b in G.blue if rng.random() < 0.7]
        t = rng.randint(1, 5)
        try:
            F = ex.extract_red_forest(G, Bp, t)
        except PreconditionError:
            continue
        hit += 1
        assert validate_simple_forest(G, F)
        Bred = ex.BipartiteReduction.from_graph(G, G.red, Bp)
        assert len(F.edges) == flow_matching_size(Bred, R)
        assert len(F.vertices & set(Bp)) >= len(Bp) - t - G.alpha * G.n
    assert hit > 10


@pytest.mark.parametrize("seed", range(30))
def test_claims_under_hypothesis_random(seed):
    n = 30 + 6 * seed
    G = random_coloring(n, seed, alpha=Fraction(1, 50))
    Rp = [v for v in G.red if v <= n // 2]
    for t in range(1, 6):
        try:
            F = ex.extract_blue_forest(G, Rp, t)
        except PreconditionError:
            pass
        else:
            assert validate_simple_forest(G, F)
            assert len((set(Rp) | set(G.blue)) - F.vertices) <= t


# -- extract_forest ---------------------------------------------------------------------------------


def test_extract_forest_blue_branch_instance():
    G = read_coloring(DATA / "blue_branch.clr")
    cert = ex.extract_forest(G, 2)
    assert cert.branch == "blue" and cert.ell == 8 and cert.horizon == 10
    assert cert.density >= Fraction(8, 10)
    best, _ = optimal_simple_forest(G, B, cert.horizon)
    assert best >= 8


def test_extract_forest_cross_checks_ell():
    G = read_coloring(DATA / "blue_branch.clr")
    a = ex.degree_sequence(G).as_sequence()
    lp, lm = s.ell_plus(a, 2), s.ell_minus(a, 2)
    assert ex.extract_forest(G, 2, lp, lm).ell == lp + lm
    with pytest.raises(PreconditionError, match="differ"):
        ex.extract_forest(G, 2, lp + 1, lm)
    with pytest.raises(PreconditionError, match="exceeds"):
        ex.extract_forest(G, 10**3)


def test_extract_forest_bound_on_random_graphs():
    for seed in range(200):
        G = complete_random_coloring(10 + seed % 291, seed)
        a = ex.degree_sequence(G).as_sequence()
        T = s.oscillation(a).T
        for t in range(1, int(T) + 1):
            cert = ex.extract_forest(G, t)
            assert validate_simple_forest(G, cert.forest)
            if cert.clipped:
                assert cert.horizon == G.n
            else:
                assert cert.density >= Fraction(cert.ell, cert.ell + t)


# -- dichotomy -------------------------------------------------------------------------------------


def test_dichotomy_all_red():
    G = graph("RRRRBBBBRB", lambda u, v: R)
    out = ex.oscillation_or_forest(G)
    assert isinstance(out, ex.ForestOutcome)
    assert out.density >= Fraction(7, 8)
    out.verify(G)


def test_dichotomy_geometric_prefix_oscillates():
    C = col.build(2, 1000)
    G = col.to_total_graph(C)
    out = ex.oscillation_or_forest(G)
    assert isinstance(out, ex.OscillationWitness)
    out.verify(G)
    a = ex.degree_sequence(G.swap_colors() if out.swapped else G).values
    assert a[out.i - 1] - out.i >= G.n // 8 and out.j - a[out.j - 1] >= G.n // 8


def test_dichotomy_random_certificates_verify():
    for seed in range(100):
        G = random_coloring(400, seed, red_vertex_prob=0.3 + 0.4 * (seed % 3) / 2)
        ex.oscillation_or_forest(G).verify(G)


# -- pipeline --------------------------------------------------------------------------------------


def test_pipeline_all_red_early_exit():
    G = graph("RB" * 40, lambda u, v: R)
    res = ex.simple_forest_pipeline(G, 10, Fraction(1, 10))
    assert res.t is None and res.density >= Fraction(7, 8)
    assert res.meets_target()


def test_pipeline_geometric_goes_through_threshold():
    C = col.build(2, 2000)
    G = col.to_total_graph(C)
    gamma = Fraction(1, 10)
    k = 8 * (G.n // 64)
    res = ex.simple_forest_pipeline(G, k, gamma)
    assert res.t is not None
    assert Fraction(k, 8) <= res.t <= k * res.N
    assert validate_simple_forest(G, res.forest)
    assert res.density >= ex.TARGET_DENSITY - gamma
    assert not res.guaranteed and res.notes


def test_pipeline_random_graphs():
    gamma = Fraction(1, 20)
    for seed in range(10):
        G = complete_random_coloring(200 + 180 * seed, seed)
        res = ex.simple_forest_pipeline(G, 8 * (G.n // 64), gamma)
        assert validate_simple_forest(G, res.forest)
        assert res.density >= ex.TARGET_DENSITY - gamma


def test_pipeline_rejects_bad_arguments():
    G = complete_random_coloring(20, 1)
    with pytest.raises(PreconditionError):
        ex.simple_forest_pipeline(G, 0, Fraction(1, 10))
    with pytest.raises(PreconditionError):
        ex.simple_forest_pipeline(G, 40, Fraction(1, 10))
    with pytest.raises(PreconditionError):
        ex.simple_forest_pipeline(G, 4, 0)


# -- certificates -------------------------------------------------------------------------------------


def test_certificate_round_trip(tmp_path):
    G = read_coloring(DATA / "blue_branch.clr")
    cert = ex.extract_forest(G, 2)
    p = tmp_path / "c.txt"
    ex.write_certificate(cert, p)
    back = ex.read_certificate(p)
    assert back.forest == cert.forest and back.horizon == cert.horizon and back.density == cert.density
    assert ex.verify_certificate(G, back) is None


def test_certificate_tampering_detected():
    G = read_coloring(DATA / "blue_branch.clr")
    cert = ex.extract_forest(G, 2)
    wrong = ex.ForestCertificate(cert.forest, cert.horizon, cert.density + Fraction(1, 10))
    assert "stated density" in ex.verify_certificate(G, wrong)
    recolored = ex.ForestCertificate(SimpleForest(R, cert.forest.edges, cert.forest.isolated), 10, cert.density)
    assert ex.verify_certificate(G, recolored)
    with pytest.raises(FormatError):
        ex.parse_certificate("color R\nedge 1\nhorizon 3 density 1/1\n")
    with pytest.raises(FormatError):
        ex.parse_certificate("edge 1 2\n")
