"""Lattice construction: preset counts, published boundary lists, pump
sets, coloring, ancilla grouping, serialization."""
import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from floqsim import lattice as lt
from floqsim.lattice import (
    LatticeError,
    build_preset,
    color_edges,
    outer_boundary_sites,
    square,
)

# (preset, n_sites, n_edges) — edge counts for the device lattices follow
# from the published native-gate counts at M_CNOT = 3.
PRESET_COUNTS = [
    ("Kagome82", 82, 142),
    ("Lieb40", 40, 48),
    ("Kagome53-I", 53, 88),
    ("Kagome53-II", 53, 90),
    ("Square25", 25, 40),
    ("Square24", 24, 36),
    ("Square16", 16, 24),
    ("Kagome30", 30, 48),
    ("Kagome29", 29, 48),
    ("Kagome21", 21, 32),
    ("Kagome19", 19, 30),
    ("Lieb21", 21, 24),
    ("Lieb28", 28, 32),
    ("Triangular19", 19, 42),
    ("HeavyHex28", 28, 30),
]


@pytest.mark.parametrize("name,n_sites,n_edges", PRESET_COUNTS)
def test_preset_counts(name, n_sites, n_edges):
    lat = build_preset(name)
    assert lat.n_sites == n_sites
    assert lat.n_edges == n_edges


def test_unknown_preset_lists_valid_names():
    with pytest.raises(LatticeError) as err:
        build_preset("Kagome99")
    assert "Kagome82" in str(err.value)


def test_generic_builder_strings():
    assert build_preset("square(1,1)").n_sites == 4
    assert build_preset("kagome(3,5)").n_sites == 53
    assert build_preset("lieb(3,3,nocorner)").n_sites == 28


def test_single_plaquette():
    lat = square(1, 1)
    assert lat.n_edges == 4
    assert all(lat.coordination(s) == 2 for s in range(4))


@pytest.mark.parametrize(
    "name",
    ["Kagome82", "Lieb40", "Kagome53-I", "Square25", "Kagome30", "Lieb21"],
)
def test_reference_boundary_matches_geometric_perimeter(name):
    """The hard-coded boundary lists must coincide with the outer face of
    the constructed cluster."""
    lat = build_preset(name)
    geometric = outer_boundary_sites(lat.positions, lat.edges)
    assert lat.boundary == geometric


def test_boundary_bulk_partition():
    for name, _, _ in PRESET_COUNTS:
        lat = build_preset(name)
        assert lat.boundary | lat.bulk == set(range(lat.n_sites))
        assert not lat.boundary & lat.bulk


def test_square25_coordinations():
    lat = build_preset("Square25")
    # row-major 5x5: corners, edge-centres, interior
    assert lat.coordination(0) == 2
    assert lat.coordination(1) == 3
    assert lat.coordination(12) == 4


def test_charge_pump_rule():
    lat = build_preset("Square25")
    pumped = lat.charge_pump_set()
    for s in range(lat.n_sites):
        assert (s in pumped) == (lat.coordination(s) % 4 in (1, 3))


def test_kagome53_ii_has_no_pumped_sites():
    assert build_preset("Kagome53-II").charge_pump_set() == frozenset()


def test_type_ii_presets_have_no_pumped_sites():
    for name in ("Kagome19", "Kagome29", "Square24", "Lieb28"):
        assert not build_preset(name).charge_pump_set(), name


def test_heavyhex28_pump_sites():
    lat = build_preset("HeavyHex28")
    assert sorted(lat.charge_pump_set()) == [9, 11, 13, 23]
    # the qubits between pumped ones touch only pumped qubits
    for isolated in (10, 12):
        assert set(lat.neighbors(isolated)) <= lat.charge_pump_set()


def test_kagome21_blockade_geometry():
    lat = build_preset("Kagome21")
    pumped = lat.charge_pump_set()
    assert {15, 17} <= pumped and 16 not in pumped
    assert set(lat.neighbors(16)) == {15, 17}


def test_lieb21_pumped_pocket():
    lat = build_preset("Lieb21")
    assert sorted(lat.charge_pump_set()) == [2, 8, 12, 18]
    pocket = {15, 19, 20}
    outside = {n for s in pocket for n in lat.neighbors(s)} - pocket
    assert outside <= lat.charge_pump_set()


def test_pump_set_invariant_under_relabeling():
    lat = build_preset("Kagome19")
    rng = np.random.default_rng(7)
    perm = rng.permutation(lat.n_sites)
    edges = tuple(
        sorted((min(perm[i], perm[j]), max(perm[i], perm[j])))
        for i, j in lat.edges
    )
    relabeled = lt.from_edge_list(
        "permuted", edges, positions=lat.positions[np.argsort(perm)]
    )
    assert relabeled.charge_pump_set() == frozenset(
        int(perm[s]) for s in lat.charge_pump_set()
    )


def test_coloring_proper_everywhere():
    for name, _, _ in PRESET_COUNTS:
        lat = build_preset(name)
        at_site = {}
        for e, (i, j) in enumerate(lat.edges):
            for s in (i, j):
                colors = at_site.setdefault(s, set())
                assert lat.edge_layer[e] not in colors, (name, s)
                colors.add(lat.edge_layer[e])


def test_kagome_and_lieb_presets_use_four_layers():
    for name in ("Kagome82", "Kagome53-II", "Lieb40", "Square25", "Kagome19"):
        assert build_preset(name).n_layers == 4, name


def test_star_needs_five_colors():
    edges = tuple((0, k) for k in range(1, 6))
    assert max(color_edges(6, edges)) + 1 == 5


def test_single_edge_one_color():
    assert color_edges(2, ((0, 1),)) == [0]


@given(st.sets(st.tuples(st.integers(0, 9), st.integers(0, 9)), max_size=20))
@settings(max_examples=40, deadline=None)
def test_coloring_proper_on_random_graphs(pairs):
    edges = tuple(sorted({(min(i, j), max(i, j)) for i, j in pairs if i != j}))
    if not edges:
        return
    colors = color_edges(10, edges)
    deg = {}
    at_site = {}
    for e, (i, j) in enumerate(edges):
        for s in (i, j):
            deg[s] = deg.get(s, 0) + 1
            assert colors[e] not in at_site.setdefault(s, set())
            at_site[s].add(colors[e])
    assert max(colors) + 1 <= max(deg.values()) + 1  # Vizing bound


def test_ancilla_group_sizes():
    lat = build_preset("Kagome82")
    sizes = {}
    for g in lat.ancilla_of_edge:
        sizes[g] = sizes.get(g, 0) + 1
    counts = sorted(sizes.values())
    # 40 full triangles of three bonds + 22 tip-cut single-bond ancillas
    assert counts.count(3) == 40
    assert counts.count(1) == 22
    assert len(sizes) == 62  # ancilla qubits on the device


def test_lieb_midpoint_groups():
    lat = build_preset("Lieb40")
    sizes = {}
    for g in lat.ancilla_of_edge:
        sizes[g] = sizes.get(g, 0) + 1
    assert set(sizes.values()) == {2}  # every midpoint carries two bonds


def test_per_edge_grouping():
    lat = lt.regroup_ancillas(build_preset("Kagome19"), "per_edge")
    assert len(set(lat.ancilla_of_edge)) == lat.n_edges


def test_kagome_strategy_rejected_on_square():
    lat = build_preset("Square16")
    with pytest.raises(LatticeError):
        lt.assign_ancillas(lat.n_sites, lat.edges, "kagome_triangles")


def test_json_round_trip():
    lat = build_preset("Kagome21")
    clone = lt.Lattice.from_json(lat.to_json())
    assert clone.n_sites == lat.n_sites
    assert clone.edges == lat.edges
    assert clone.edge_layer == lat.edge_layer
    assert clone.ancilla_of_edge == lat.ancilla_of_edge
    assert clone.boundary == lat.boundary
    assert clone.label_offset == lat.label_offset


def test_label_offsets():
    assert build_preset("Kagome82").label_offset == 1
    assert build_preset("Square25").label_offset == 0


def test_regions_consistent():
    lat = build_preset("Kagome30")
    regions = lat.regions()
    assert regions["boundary"] == lat.boundary
    assert regions["pumped"] == lat.charge_pump_set()
    assert regions["pumped"] | regions["unpumped"] == regions["all"]
