from __future__ import annotations

import json

import pytest
from hypothesis import given, settings, strategies as st

from mesharc.quiver import (QuiverError, QuotientSpec, build_dynkin, build_quotient_quiver,
                            cover_quotient_spec, export_dot, export_json, generalized_preprojective_quiver,
                            parse_quiver_spec, parse_type, preprojective_quiver,
                            translation_quiver_isomorphism)


@pytest.mark.parametrize("name,h,hstar,m_delta", [
    ("A1", 2, 1, 1), ("A2", 3, 3, 2), ("A3", 4, 4, 3), ("D4", 6, 3, 5), ("D5", 8, 8, 7),
    ("D6", 10, 5, 9), ("E6", 12, 12, 11), ("E7", 18, 9, 17), ("E8", 30, 15, 29),
])
def test_dynkin_constants(name, h, hstar, m_delta):
    d = build_dynkin(*parse_type(name))
    assert (d.h, d.h_star, d.m_delta) == (h, hstar, m_delta)
    assert len(d.edges) == d.rank - 1


def test_weakly_symmetric_family():
    ws = {n for n in ("A1", "A2", "A3", "D4", "D5", "D6", "E6", "E7", "E8")
          if build_dynkin(*parse_type(n)).weakly_symmetric}
    assert ws == {"A1", "D4", "D6", "E7", "E8"}


def test_bipartite_colouring():
    for n in ("A5", "D7", "E8"):
        d = build_dynkin(*parse_type(n))
        c = d.colors()
        assert c[0] == 0
        assert all(c[a] != c[b] for a, b in d.edges)


@pytest.mark.parametrize("bad", ["X3", "D3", "E9", "G3", "F5", "A0", ""])
def test_invalid_types(bad):
    with pytest.raises(QuiverError):
        build_dynkin(*parse_type(bad))


def test_quotient_vertex_counts():
    for name in ("A2", "A3", "D4", "D5", "E6"):
        d = build_dynkin(*parse_type(name))
        for m in (1, 2, 3):
            q = build_quotient_quiver(QuotientSpec(d, m))
            assert len(q.vertices) == m * d.rank
            assert len(q.arrows) == 2 * m * len(d.edges)
            if d.reflection() is not None and not (d.family == "A" and d.rank % 2 == 0):
                qr = build_quotient_quiver(QuotientSpec(d, m, "reflection"))
                assert len(qr.vertices) == m * d.rank
    # the glide on A_2n has shift 2m-1, so (2m-1) n vertices
    for n in (1, 2):
        d = build_dynkin("A", 2 * n)
        for m in (1, 2, 3):
            q = build_quotient_quiver(QuotientSpec(d, m, "moebius"))
            assert len(q.vertices) == (2 * m - 1) * n


def test_quotient_spec_errors():
    with pytest.raises(QuiverError):
        QuotientSpec(build_dynkin("A", 2), 1, "reflection")
    with pytest.raises(QuiverError):
        QuotientSpec(build_dynkin("A", 3), 1, "triality")
    with pytest.raises(QuiverError):
        QuotientSpec(build_dynkin("A", 3), 1, "moebius")
    with pytest.raises(QuiverError):
        QuotientSpec(build_dynkin("A", 3), 0)
    with pytest.raises(QuiverError):
        QuotientSpec(build_dynkin("G", 2), 1)


specs = st.sampled_from([
    ("A", 2, "none"), ("A", 3, "none"), ("A", 3, "reflection"), ("A", 4, "moebius"), ("A", 2, "moebius"),
    ("D", 4, "none"), ("D", 4, "reflection"), ("D", 4, "triality"), ("D", 5, "reflection"),
    ("E", 6, "reflection"), ("A", 1, "none"),
])


@settings(max_examples=40, deadline=None)
@given(specs, st.integers(1, 4))
def test_translation_quiver_axioms(spec, m):
    fam, rank, kind = spec
    q = build_quotient_quiver(QuotientSpec(build_dynkin(fam, rank), m, kind))
    q.validate()
    # arrows x -> y are in bijection with arrows τy -> x
    for v in q.vertices:
        for w in q.vertices:
            fwd = sum(1 for a in q.arrows if a.source == v and a.target == w)
            back = sum(1 for a in q.arrows if a.source == q.tau[w] and a.target == v)
            assert fwd == back
    # σ² moves an arrow x -> y to τx -> τy
    for a in q.arrows:
        b = q.arrow(q.tau_a[a.name])
        assert (b.source, b.target) == (q.tau[a.source], q.tau[a.target])


@pytest.mark.parametrize("fam,rank", [("G", 2), ("C", 3), ("C", 4), ("B", 2), ("B", 3), ("F", 4),
                                      ("L", 1), ("L", 2), ("L", 3)])
def test_hand_built_quivers_match_cover_quotients(fam, rank):
    q = generalized_preprojective_quiver(fam, rank)
    cover = build_quotient_quiver(cover_quotient_spec(fam, rank))
    assert translation_quiver_isomorphism(q, cover) is not None


def test_g2_quiver_shape():
    q = generalized_preprojective_quiver("G", 2)
    assert len(q.vertices) == 4 and len(q.arrows) == 6
    assert q.tau == {0: 0, 1: 3, 2: 1, 3: 2}
    assert q.sigma["alpha"] == "sigma_alpha"


def test_parse_specs():
    assert len(parse_quiver_spec("quotient G2 m=1").vertices) == 4
    assert len(parse_quiver_spec("preprojective D4").vertices) == 4
    assert len(parse_quiver_spec("quotient D4 m=2 rho=triality").vertices) == 8
    for bad in ("", "quotient", "quotient A2 k=3", "gpp A2 m=2", "nonsense A2"):
        with pytest.raises(QuiverError):
            parse_quiver_spec(bad)


def test_exports():
    q = preprojective_quiver(build_dynkin("A", 3))
    dot = export_dot(q)
    assert dot.startswith("digraph") and dot.count("->") >= len(q.arrows)
    data = json.loads(export_json(q))
    assert len(data["vertices"]) == 3 and len(data["arrows"]) == 4
    assert export_json(q) == export_json(preprojective_quiver(build_dynkin("A", 3)))
