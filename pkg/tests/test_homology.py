import pytest

from latcurve import (
    EulerMismatch,
    euler_characteristic,
    homology,
    lattice_homology,
    min_weight,
    relative_homology,
    sublevel_complex,
)
from latcurve.homology import boundary, cube_vertices


def test_boundary_squares_to_zero(model_of):
    m = model_of("T", 4, 4)
    cx = sublevel_complex(m.weight, 1)
    for cubes in cx.cells.values():
        for cube in cubes[:50]:
            if not cube[1]:
                continue
            acc = {}
            for face, s in boundary(cube):
                for face2, s2 in boundary(face):
                    acc[face2] = acc.get(face2, 0) + s * s2
            assert all(v == 0 for v in acc.values())


def test_empty_below_min(model_of):
    m = model_of("D", 5)
    cx = sublevel_complex(m.weight, min_weight(m.weight) - 1)
    assert not cx.cell_set()


def test_sublevel_smooth(model_of):
    m = model_of("A", 0)
    cx = sublevel_complex(m.weight, 0, bound=m.bound)
    assert cx.cells[0] == [((0,), 0)]
    assert 1 not in cx.cells or not cx.cells[1]


def test_sublevel_d5_wedge(model_of):
    # S_0 of D_5: the cross through (2,1) (the thick wedge), plus the
    # isolated origin and the isolated conductor; no loops anywhere
    # (cross-checked by euler = delta, which pins the component count)
    m = model_of("D", 5)
    cx = sublevel_complex(m.weight, 0)
    (b0, t0), (b1, t1) = homology(cx)[:2]
    assert (b0, b1) == (3, 0)
    assert not t0 and not t1
    cross = {(1, 1), (2, 1), (3, 1), (2, 0), (2, 2)}
    vertices = {c[0] for c in cx.cells[0]}
    assert vertices == cross | {(0, 0), (4, 2)}


def test_monotone_filtration(model_of):
    m = model_of("E", 7)
    prev = set()
    for n in range(min_weight(m.weight), 3):
        cur = sublevel_complex(m.weight, n).cell_set()
        assert prev <= cur
        prev = cur


def test_homology_contractible_top(model_of):
    m = model_of("D", 5)
    top = m.max_w_conductor_box
    res = homology(sublevel_complex(m.weight, top))
    assert res[0][0] == 1
    assert all(rank == 0 for rank, _ in res[1:])


def test_relative_homology_self_is_zero(model_of):
    m = model_of("D", 5)
    cx = sublevel_complex(m.weight, 0)
    res = relative_homology(cx, cx)
    assert all(rank == 0 and not tor for rank, tor in res)


def test_relative_homology_not_subcomplex(model_of):
    m = model_of("D", 5)
    big = sublevel_complex(m.weight, 1)
    small = sublevel_complex(m.weight, 0)
    with pytest.raises(ValueError):
        relative_homology(small, big)


def test_lattice_homology_a2(model_of):
    rep = lattice_homology(model_of("A", 2).weight)
    assert rep.betti(0, 0) == 2
    assert rep.betti(0, 1) == 1
    assert rep.u_rank(0, 0) == 1


def test_lattice_homology_t57(model_of):
    # a = 1, b = 2: total H_1 rank is ab - 2 = 0
    rep = lattice_homology(model_of("T", 5, 7).weight)
    assert rep.total_rank(1) == 0


def test_lattice_homology_t77(model_of):
    rep = lattice_homology(model_of("T", 7, 7).weight)
    assert rep.total_rank(1) == 2


def test_lattice_homology_t79(model_of):
    rep = lattice_homology(model_of("T", 7, 9).weight)
    assert rep.total_rank(1) == 4


def test_d5_h1_vanishes_but_cycle_group_does_not(model_of):
    m = model_of("D", 5)
    rep = lattice_homology(m.weight)
    assert rep.total_rank(1) == 0
    from latcurve import minimal_spectral_cycles

    assert minimal_spectral_cycles(m.weight, 1, 0).rank == 1


def test_torsion_absent_on_catalog(model_of):
    for spec in [("D", 4), ("T", 3, 6), ("E13",)]:
        rep = lattice_homology(model_of(*spec).weight)
        for n in rep.table:
            for _, torsion in rep.table[n]:
                assert not torsion


@pytest.mark.parametrize(
    "spec,expected",
    [(("A", 0), 0), (("A", 2), 1), (("D", 4), 3), (("T", 4, 4), 6), (("E12",), 6)],
)
def test_euler_characteristic(spec, expected, model_of):
    m = model_of(*spec)
    rep = lattice_homology(m.weight)
    assert euler_characteristic(rep, m.weight) == expected


def test_euler_mismatch_detected(model_of):
    m = model_of("A", 2)
    rep = lattice_homology(m.weight)
    bad = {n: list(rows) for n, rows in rep.table.items()}
    bad[0] = [(5, [])]
    broken = type(rep)(
        r=rep.r, n_min=rep.n_min, n_top=rep.n_top, table=bad, u_ranks=rep.u_ranks
    )
    with pytest.raises(EulerMismatch):
        euler_characteristic(broken, m.weight)


def test_u_rank_bottom_level(model_of):
    for spec in [("D", 5), ("T", 3, 6), ("E", 8)]:
        m = model_of(*spec)
        rep = lattice_homology(m.weight)
        assert rep.u_rank(0, rep.n_min) >= 1


def test_cube_vertices():
    verts = set(cube_vertices(((1, 2), 0b11)))
    assert verts == {(1, 2), (2, 2), (1, 3), (2, 3)}


def _pair_complexes(m, base, level):
    """S_level intersected with B = R(base, base+e), and with A = B minus
    the open star of the base vertex."""
    from latcurve.homology import SublevelComplex

    r = m.r
    full = sublevel_complex(m.weight, level, bound=m.bound)
    inside = {
        c
        for c in full.cell_set()
        if all(b >= x for b, x in zip(c[0], base))
        and all(
            c[0][i] + (1 if c[1] >> i & 1 else 0) <= base[i] + 1 for i in range(r)
        )
    }
    def pack(cells):
        by_dim = {}
        for c in sorted(cells):
            by_dim.setdefault(bin(c[1]).count("1"), []).append(c)
        return SublevelComplex(level=level, r=r, bound=m.bound, cells=by_dim)

    b_cx = pack(inside)
    a_cx = pack({c for c in inside if c[0] != tuple(base)})
    return b_cx, a_cx


def test_relative_pair_d5(model_of):
    # the excised pair at the semigroup point (2,1) on level 0 carries a
    # relative 1-cycle
    m = model_of("D", 5)
    b_cx, a_cx = _pair_complexes(m, (2, 1), 0)
    res = relative_homology(b_cx, a_cx)
    assert res[1] == (1, [])


def test_relative_pair_e7(model_of):
    # at the multiplicity vector of E_7 the same pair has no 1-cycle
    m = model_of("E", 7)
    b_cx, a_cx = _pair_complexes(m, m.multiplicity, 0)
    res = relative_homology(b_cx, a_cx)
    assert res[1] == (0, [])
