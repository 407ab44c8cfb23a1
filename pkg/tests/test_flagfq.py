import random

import numpy as np
import pytest

from rank2sheets.flagfq import (
    InconsistentDimension,
    act,
    bruhat_form,
    enumerate_flags,
    estimate_dimension,
    fixed_points,
    flag_space,
    orbits,
    primitive_root,
    subgroup_gens,
)
from rank2sheets.reps import build_adjoint_rep, build_matrix_rep
from rank2sheets.rootsys2 import ALPHA, BETA, KINDS, build_root_system


def test_counts_small():
    assert sum(1 for _ in enumerate_flags("A1xA1", "B", 3)) == 16
    assert len(flag_space("A2", "B", 3)) == 52
    assert len(flag_space("G2", "B", 3)) == 1456


@pytest.mark.parametrize("kind", KINDS)
def test_u_zero_is_identity(kind):
    rep = build_matrix_rep(kind)
    for g in build_root_system(kind).roots:
        assert np.array_equal(rep.u(g, 0, 5), np.eye(rep.dimension, dtype=np.int64))


def test_a2_defining_representation():
    m = build_matrix_rep("A2").u(ALPHA, 4)
    assert m.tolist() == [[1, 4, 0], [0, 1, 0], [0, 0, 1]]


@pytest.mark.parametrize("kind", KINDS)
def test_one_parameter_subgroups(kind):
    rep = build_matrix_rep(kind)
    q = 7
    for g in build_root_system(kind).roots:
        assert np.array_equal(rep.u(g, 2, q) @ rep.u(g, 3, q) % q, rep.u(g, 5, q))


def test_bruhat_identity():
    bf = bruhat_form(np.eye(7, dtype=np.int64), "G2", 5)
    assert bf.u == {} and bf.u_prime == {} and bf.w.length == 0 and bf.torus == (1, 1)


def test_bruhat_n_alpha_squared():
    rep = build_matrix_rep("A2")
    q = 7
    bf = bruhat_form(rep.n("a", q) @ rep.n("a", q) % q, "A2", q)
    assert bf.w.length == 0 and bf.u == {} and bf.u_prime == {}
    # h_a(-1)
    assert np.array_equal(rep.h(*bf.torus, q), rep.h(q - 1, 1, q))


@pytest.mark.parametrize("kind", KINDS)
def test_bruhat_round_trip(kind):
    rep = build_matrix_rep(kind)
    rs = build_root_system(kind)
    rng = random.Random(11)
    q = 5
    for _ in range(20):
        g = np.eye(rep.dimension, dtype=np.int64)
        for _ in range(6):
            g = g @ rep.u(rng.choice(rs.roots), rng.randrange(1, q), q) % q
        assert np.array_equal(bruhat_form(g, kind, q).matrix(kind, q), g)


def test_act_identity_and_composition():
    space = flag_space("G2", "P_a", 5)
    rep = build_matrix_rep("G2")
    rng = random.Random(3)
    eye = np.eye(7, dtype=np.int64)
    for _ in range(20):
        x = space.point(rng.randrange(len(space)))
        g = rep.u(rng.choice(rep.rs.roots), rng.randrange(5), 5)
        h = rep.u(rng.choice(rep.rs.roots), rng.randrange(5), 5)
        assert act(eye, x, "G2", 5) == x
        assert act(g, act(h, x, "G2", 5), "G2", 5) == act(g @ h % 5, x, "G2", 5)


def test_u_beta_fixes_base_point_of_p_beta():
    space = flag_space("G2", "P_b", 5)
    base = space.point(0)
    assert base.weyl.length == 0
    assert act(build_matrix_rep("G2").u(BETA, 1, 5), base, "G2", 5) == base


@pytest.mark.parametrize("kind", KINDS)
def test_full_group_has_no_fixed_points(kind):
    res = fixed_points(subgroup_gens(kind, "full", 3), kind, "B", 3, per_cell=True)
    assert res["total"] == 0


def test_trivial_subgroup_fixes_everything():
    assert fixed_points(subgroup_gens("B2", "trivial", 3), "B2", "B", 3) == len(flag_space("B2", "B", 3))


def test_u_beta_fixed_points_g2():
    res = fixed_points(subgroup_gens("G2", "u_beta", 5), "G2", "P_a", 5, per_cell=True)
    assert res["per_cell"]["sbsasbsasb"] == 0
    # the codim-1 cell carries a two-dimensional fixed locus
    assert res["per_cell"]["sasbsasb"] == 25


def test_orbits_borel_a2():
    part = orbits(subgroup_gens("A2", "borel", 3), "A2", "B", 3)
    assert sorted(part.sizes) == [1, 3, 3, 9, 9, 27]


def test_orbits_full_group():
    assert orbits(subgroup_gens("B2", "full", 3), "B2", "B", 3).count == 1


def test_torus_orbits_on_projective_line():
    # G/P_b of A1xA1 is the projective line of the first factor; the GL2
    # torus diag(z, 1) moves every point other than 0 and infinity
    q = 5
    t = np.eye(4, dtype=np.int64)
    t[0, 0] = primitive_root(q)
    assert sorted(orbits([t], "A1xA1", "P_b", q).sizes) == [1, 1, q - 1]


def test_estimate_dimension():
    assert estimate_dimension({3: 27, 5: 125}) == 3
    assert estimate_dimension({3: 1456, 5: 19531}) == 6
    assert estimate_dimension({3: 0, 5: 0}) is None
    assert estimate_dimension({3: 2, 5: 4}) == 1
    with pytest.raises(InconsistentDimension):
        estimate_dimension({3: 0, 5: 4})


def test_adjoint_and_faithful_models_agree_on_relations():
    ad = build_adjoint_rep("G2")
    q = 7
    # u_a(1) u_a(2) = u_a(3) in the adjoint model too
    assert np.array_equal(ad.u(ALPHA, 1, q) @ ad.u(ALPHA, 2, q) % q, ad.u(ALPHA, 3, q))
