import io
import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from spanforge import (
    DomainError,
    EdgeListError,
    build_graph,
    component_labels,
    gen_complete,
    gen_cycle,
    gen_gnp,
    gen_grid,
    gen_path,
    gen_star,
    load_edge_list,
    parse_generator_spec,
    write_edge_list,
)


def roundtrip(g):
    buf = io.StringIO()
    write_edge_list(g, buf)
    return load_edge_list(io.StringIO(buf.getvalue()))


def test_load_basic():
    g = load_edge_list(io.StringIO("0 1 1.0\n1 2 2.0\n"))
    assert g.n == 3 and g.m == 2
    assert g.edges[0] == (0, 1, 1.0)
    assert g.edges[1] == (1, 2, 2.0)


def test_load_drops_self_loop():
    g = load_edge_list(io.StringIO("0 0 1.0\n"))
    assert g.n == 1 and g.m == 0


def test_load_collapses_parallel_edges():
    g = load_edge_list(io.StringIO("0 1 5\n0 1 2\n"))
    assert g.m == 1
    assert g.edges[0] == (0, 1, 2.0)


def test_load_malformed_line_reports_number():
    with pytest.raises(EdgeListError) as err:
        load_edge_list(io.StringIO("0 1 1.0\nnot an edge\n"))
    assert err.value.line == 2


def test_load_negative_weight_is_domain_error():
    with pytest.raises(DomainError):
        load_edge_list(io.StringIO("0 1 -2\n"))


def test_load_remaps_sparse_ids():
    g = load_edge_list(io.StringIO("10 40 1.5\n40 7 2.5\n"))
    assert g.n == 3
    # sorted distinct ids 7, 10, 40 -> 0, 1, 2
    assert sorted((u, v) for u, v, _ in g.edges) == [(0, 2), (1, 2)]


def test_header_preserves_isolated_vertices():
    g = load_edge_list(io.StringIO("# 3 0\n"))
    assert g.n == 3 and g.m == 0
    again = roundtrip(g)
    assert again.n == 3 and again.m == 0


def test_header_range_enforced():
    with pytest.raises(EdgeListError):
        load_edge_list(io.StringIO("# 2 1\n0 5 1.0\n"))


def test_roundtrip_is_idempotent_normalization():
    raw = "3 1 2.0\n1 3 1.0\n2 2 9\n0 1 4\n"
    once = load_edge_list(io.StringIO(raw))
    assert roundtrip(once).edges == once.edges
    assert roundtrip(once).n == once.n


def test_roundtrip_weighted_gnp_exact():
    g = gen_gnp(20, 0.3, ("uniform", 1, 10), seed=7)
    h = roundtrip(g)
    assert h.n == g.n and h.edges == g.edges


def test_gnp_edge_cases():
    assert gen_gnp(10, 0.0, "unit", 1).m == 0
    assert gen_gnp(5, 1.0, "unit", 1).m == 10


def test_gnp_deterministic():
    a = gen_gnp(100, 0.1, "unit", 42)
    b = gen_gnp(100, 0.1, "unit", 42)
    assert a.edges == b.edges
    c = gen_gnp(100, 0.1, "unit", 43)
    assert a.edges != c.edges


def test_gnp_rejects_bad_p():
    with pytest.raises(DomainError):
        gen_gnp(10, 1.5, "unit", 0)


def test_generators_satisfy_invariants():
    for g in [
        gen_gnp(30, 0.2, ("uniform", 0, 5), 3),
        gen_path(7),
        gen_cycle(5),
        gen_star(6),
        gen_complete(6),
        gen_grid(3, 4),
    ]:
        g.validate()


def test_grid_shape():
    g = gen_grid(3, 4)
    assert g.n == 12
    assert g.m == 2 * 12 - 3 - 4  # w*h horizontal + vertical edges


def test_component_labels():
    g = build_graph(5, [(0, 1, 1.0), (2, 3, 1.0)])
    labels = component_labels(g)
    assert labels[0] == labels[1]
    assert labels[2] == labels[3]
    assert len({labels[0], labels[2], labels[4]}) == 3


def test_parse_generator_spec():
    for spec in ["gnp:50:0.2:unit", "gnp:50:0.2:uniform(1,9)", "grid:4:3", "path:10"]:
        desc, make = parse_generator_spec(spec)
        g = make(0)
        g.validate()
        assert desc == spec
    for bad in ["gnp:50", "ring:5", "gnp:50:0.2:normal", "grid:4", ""]:
        with pytest.raises(DomainError):
            parse_generator_spec(bad)


@settings(max_examples=60, deadline=None)
@given(
    st.lists(
        st.tuples(
            st.integers(min_value=0, max_value=9),
            st.integers(min_value=0, max_value=9),
            st.floats(min_value=0, max_value=100, allow_nan=False),
        ),
        min_size=1,
        max_size=25,
    )
)
def test_load_write_load_identity(triples):
    text = "".join(f"{u} {v} {w!r}\n" for u, v, w in triples)
    first = load_edge_list(io.StringIO(text))
    second = roundtrip(first)
    assert second.n == first.n
    assert second.edges == first.edges
    first.validate()
