import random
from fractions import Fraction

import pytest

from covol.coalgebra import (
    CoalgebraError, PathIndex, SparseVector, SubcoalgebraBasis,
    TruncatedPathCoalgebra, coassociativity_ok, counit_vector,
    cover_projection_map, covering_coalgebra_iso, delta_terms,
    is_homogeneous, is_identity_map, compose_maps,
    minimal_elements, minimal_partition, row_weight, smash_coalgebra,
    smash_path_coalgebra, smash_projection_map, smash_to_cover_paths,
    subcoalgebra_to_json, twist_iso,
    verify_coalgebra_map,
)
from covol.fixtures import (
    all_fixtures, double_loop_fixture, kronecker_fixture, loop_fixture,
    sl2_fixture, tri_fixture,
)
from covol.groups import FgAbelian
from covol.voltage import (
    ArrowWeighting, GaloisCoverData, VertexWeighting, smash_quiver,
    window_ball,
)

Z = FgAbelian(1)


def zint(n):
    return Z.element(free=[n])


def test_delta_vertex_and_arrow():
    fx = kronecker_fixture()
    pindex = fx.pindex
    x = pindex.vertex_path("x")
    assert delta_terms(pindex, x) == [(x, x)]
    a = pindex.arrow_path("a")
    y = pindex.vertex_path("y")
    assert sorted(delta_terms(pindex, a)) == sorted([(y, a), (a, x)])


def test_delta_length_two():
    fx = tri_fixture("ac")
    pindex = fx.pindex
    ac = pindex.from_names(["a", "c"])
    x, z = pindex.vertex_path("x"), pindex.vertex_path("z")
    a, c = pindex.arrow_path("a"), pindex.arrow_path("c")
    assert sorted(delta_terms(pindex, ac)) == sorted([(z, ac), (ac, x), (a, c)])


def test_counit():
    fx = tri_fixture("ac")
    pindex = fx.pindex
    v = SparseVector({pindex.vertex_path("x"): Fraction(2),
                      pindex.arrow_path("a"): Fraction(5)})
    assert counit_vector(pindex, v) == 2


def test_coradical_grading():
    # splitting a path never increases total length
    fx = double_loop_fixture(truncation=4)
    pindex = fx.pindex
    for i in range(len(pindex)):
        for l, r in delta_terms(pindex, i):
            if pindex.length(i) == 0:
                assert pindex.length(l) == 0 and pindex.length(r) == 0
            else:
                assert pindex.length(l) + pindex.length(r) == pindex.length(i)


def test_path_coalgebra_coassociative():
    for fx in all_fixtures():
        ok, witness, checked = coassociativity_ok(TruncatedPathCoalgebra(fx.pindex))
        assert ok, (fx.name, witness)
        assert checked == len(fx.pindex)


def test_closure_full():
    fx = loop_fixture(4)
    assert fx.basis.dimension == len(fx.pindex)


def test_closure_tri():
    for gen in ["ac", "ac+bc"]:
        fx = tri_fixture(gen)
        assert fx.basis.dimension == 7  # x, y, z, a, b, c, and one degree-2


def test_closure_sl2_dimension():
    fx = sl2_fixture(5)
    # 5 vertices + 8 arrows + the path b0.a0 + three degree-two sums
    assert fx.basis.dimension == 17


def test_closure_rejects_escape():
    # generator needs a length-2 path, truncation 1 cannot hold it
    with pytest.raises(CoalgebraError):
        tri_fixture("ac", truncation=1)


def test_subcoalgebra_membership_and_coordinates():
    fx = tri_fixture("ac+bc")
    pindex, basis = fx.pindex, fx.basis
    ac = SparseVector.unit(pindex.from_names(["a", "c"]))
    bc = SparseVector.unit(pindex.from_names(["b", "c"]))
    assert basis.member(ac + bc)
    assert not basis.member(ac)
    coords = basis.coordinates(ac + bc)
    assert coords is not None
    rebuilt = SparseVector()
    for sym, c in coords.items():
        rebuilt = rebuilt + basis.row_vector(sym).scale(c)
    assert rebuilt == ac + bc


def test_subcoalgebra_coproduct_closed():
    for fx in all_fixtures():
        ok, witness, checked = coassociativity_ok(fx.basis)
        assert ok, (fx.name, witness)
        assert checked == fx.basis.dimension


def test_minimal_partition_tri():
    fx = tri_fixture("ac")
    assert minimal_elements(fx.basis) == []

    fx = tri_fixture("ac+bc")
    found = minimal_elements(fx.basis)
    assert len(found) == 1
    pair, block, rep = found[0]
    pindex = fx.pindex
    assert pair == (pindex.quiver.vertex_index["x"], pindex.quiver.vertex_index["z"])
    assert set(block) == {pindex.from_names(["a", "c"]), pindex.from_names(["b", "c"])}
    ac = SparseVector.unit(pindex.from_names(["a", "c"]))
    bc = SparseVector.unit(pindex.from_names(["b", "c"]))
    assert rep == ac + bc


def test_minimal_partition_sl2():
    fx = sl2_fixture(5)
    pindex = fx.pindex
    found = minimal_elements(fx.basis)
    assert len(found) == 3
    for i, (pair, block, rep) in enumerate(sorted(found)):
        vi = pindex.quiver.vertex_index["x%d" % (i + 1)]
        assert pair == (vi, vi)
        first = pindex.from_names(["a%d" % i, "b%d" % i])
        second = pindex.from_names(["b%d" % (i + 1), "a%d" % (i + 1)])
        assert set(block) == {first, second}
        assert rep == SparseVector.unit(first) + SparseVector.unit(second)
    # d0 = b0.a0 is a path in the basis, not a minimal element
    d0 = pindex.from_names(["b0", "a0"])
    assert fx.basis.member(SparseVector.unit(d0))


def test_homogeneity():
    # trivial group: always homogeneous
    fx = tri_fixture("ac+bc")
    trivial = FgAbelian(0)
    w = ArrowWeighting(fx.quiver, trivial,
                       {a: trivial.identity() for a in range(3)})
    assert is_homogeneous(fx.basis, w)

    # weights 0 vs 1 split the generator
    ok, witness = is_homogeneous(fx.basis, fx.weighting, return_witness=True)
    assert not ok
    pindex = fx.pindex
    ac = SparseVector.unit(pindex.from_names(["a", "c"]))
    bc = SparseVector.unit(pindex.from_names(["b", "c"]))
    assert witness == ac + bc

    # same quiver, (ac)-embedding: homogeneous under the same weighting
    fx2 = tri_fixture("ac")
    assert is_homogeneous(fx2.basis, fx2.weighting)


def test_homogeneity_sl2():
    fx = sl2_fixture(5)
    assert is_homogeneous(fx.basis, fx.weighting)


def _random_subcoalgebra(rng, pindex):
    gens = []
    for _ in range(rng.randint(0, 2)):
        anchor = rng.randrange(len(pindex))
        pair = (pindex.source(anchor), pindex.target(anchor))
        same = [i for i in pindex.by_pair[pair] if pindex.length(i) >= 1]
        if not same:
            continue
        support = rng.sample(same, min(len(same), rng.randint(1, 3)))
        gens.append(SparseVector({i: rng.choice([1, 2, -1]) for i in support}))
    from covol.coalgebra import subcoalgebra_closure
    return subcoalgebra_closure(pindex, gens)


def test_homogeneity_dimension_test_matches_blockwise_test():
    # the per-weight dimension-sum test agrees with the constant-weight
    # test on the minimal blocks, over random subcoalgebras and weightings
    rng = random.Random(13)
    quivers = [sl2_fixture(4).quiver, tri_fixture("ac").quiver]
    for trial in range(50):
        q = quivers[trial % len(quivers)]
        pindex = PathIndex(q, 2)
        basis = _random_subcoalgebra(rng, pindex)
        w = ArrowWeighting(q, Z, {a: zint(rng.randint(-1, 1))
                                  for a in range(q.num_arrows())})
        expected = True
        for pair, blocks in minimal_partition(basis).items():
            for block, rep in blocks:
                if len({pindex.weight(w, i) for i in block}) > 1:
                    expected = False
        assert is_homogeneous(basis, w) == expected, trial


def test_row_weight():
    fx = sl2_fixture(5)
    for sym in fx.basis.symbols():
        w = row_weight(fx.basis, fx.weighting, sym)
        length = {fx.pindex.length(i) for i in fx.basis.row_vector(sym).support()}
        if length == {0}:
            assert w == Z.identity()


def test_smash_coalgebra_group_likes():
    fx = loop_fixture(3)
    vertices_only = SubcoalgebraBasis(
        fx.pindex, {k: v for k, v in fx.basis.spaces.items()})
    smash = smash_coalgebra(fx.basis, fx.weighting, window_ball(Z, 2))
    for sym in smash.symbols():
        c, g = sym
        if fx.basis.counit(c) == 1 and len(fx.basis.row_vector(c).support()) == 1:
            terms, truncated = smash.coproduct(sym)
            if fx.pindex.length(next(iter(fx.basis.row_vector(c).support()))) == 0:
                assert not truncated
                assert terms == [(Fraction(1), sym, sym)]


def test_smash_coalgebra_loop_formula():
    fx = loop_fixture(4)
    smash = smash_path_coalgebra(fx.pindex, fx.weighting, window_ball(Z, 3))
    a2 = fx.pindex.from_names(["a", "a"])
    x = fx.pindex.vertex_path("x")
    a = fx.pindex.arrow_path("a")
    terms, truncated = smash.coproduct((a2, zint(0)))
    assert not truncated
    assert sorted(terms) == sorted([
        (Fraction(1), (x, zint(2)), (a2, zint(0))),
        (Fraction(1), (a, zint(1)), (a, zint(0))),
        (Fraction(1), (a2, zint(0)), (x, zint(0))),
    ])


def test_smash_coalgebra_inhomogeneous_rejected():
    fx = tri_fixture("ac+bc")
    with pytest.raises(CoalgebraError):
        smash_coalgebra(fx.basis, fx.weighting, window_ball(Z, 2))


def test_smash_coalgebra_coassociative_on_interior():
    for fx in [loop_fixture(4), kronecker_fixture(), sl2_fixture(4)]:
        smash = smash_coalgebra(fx.basis, fx.weighting, fx.window(3))
        ok, witness, checked = coassociativity_ok(smash)
        assert ok, (fx.name, witness)
        assert checked > 0


def test_smash_projection_is_coalgebra_map():
    fx = sl2_fixture(4)
    smash = smash_coalgebra(fx.basis, fx.weighting, fx.window(3))
    proj = smash_projection_map(smash)
    ok, witness, checked = verify_coalgebra_map(proj, smash, fx.basis)
    assert ok and checked > 0


def test_smash_to_cover_paths_vertices_arrows():
    fx = loop_fixture(4)
    sq = smash_quiver(fx.quiver, fx.weighting, window_ball(Z, 3))
    cover_pindex = PathIndex(sq.quiver, fx.pindex.truncation)
    emap = smash_to_cover_paths(sq, fx.pindex, cover_pindex)
    x = fx.pindex.vertex_path("x")
    v = sq.vertex_of("x", zint(0))
    assert emap[(x, zint(0))] == {cover_pindex.vertex_path(v): Fraction(1)}
    a = fx.pindex.arrow_path("a")
    ca = sq.arrow_of("a", zint(0))
    assert emap[(a, zint(0))] == {cover_pindex.arrow_path(ca): Fraction(1)}
    # E(a^2 # 0) is the two-step path through fibers 0 then 1
    a2 = fx.pindex.from_names(["a", "a"])
    arrows = (sq.arrow_of("a", zint(0)), sq.arrow_of("a", zint(1)))
    assert emap[(a2, zint(0))] == {cover_pindex.path_of(arrows): Fraction(1)}


def test_smash_to_cover_paths_intertwines_delta():
    for fx in all_fixtures():
        radius = 3
        window = fx.window(radius)
        sq = smash_quiver(fx.quiver, fx.weighting, window)
        cover_pindex = PathIndex(sq.quiver, fx.pindex.truncation)
        smash = smash_path_coalgebra(fx.pindex, fx.weighting, window)
        emap = smash_to_cover_paths(sq, fx.pindex, cover_pindex)
        ok, witness, checked = verify_coalgebra_map(
            emap, smash, TruncatedPathCoalgebra(cover_pindex))
        assert ok, (fx.name, witness)
        assert checked > 0, fx.name
        # bijective where defined
        images = [next(iter(img)) for img in emap.values()]
        assert len(set(images)) == len(images)


def test_covering_iso_roundtrip_canonical():
    fx = kronecker_fixture()
    window = window_ball(Z, 3)
    sq = smash_quiver(fx.quiver, fx.weighting, window)
    cover = GaloisCoverData.from_smash(sq)
    cover_pindex = PathIndex(sq.quiver, fx.pindex.truncation)
    psi, phi, smash, induced = covering_coalgebra_iso(
        cover, sq.canonical_lifting(), fx.pindex, cover_pindex, window)
    assert induced == fx.weighting
    ok, witness, checked = verify_coalgebra_map(
        psi, TruncatedPathCoalgebra(cover_pindex), smash)
    assert ok and checked > 0
    ok, witness, checked = verify_coalgebra_map(
        phi, smash, TruncatedPathCoalgebra(cover_pindex))
    assert ok and checked > 0
    assert is_identity_map(compose_maps(psi, phi))
    assert is_identity_map(compose_maps(phi, psi))
    # F_L . psi = F
    proj_smash = smash_projection_map(smash)
    proj_cover = cover_projection_map(cover_pindex, fx.pindex, sq.morphism)
    lhs = compose_maps(proj_smash, psi)
    assert lhs == {sym: proj_cover[sym] for sym in lhs}


def test_covering_iso_with_shifted_lifting():
    fx = kronecker_fixture()
    window = window_ball(Z, 3)
    sq = smash_quiver(fx.quiver, fx.weighting, window)
    cover = GaloisCoverData.from_smash(sq)
    cover_pindex = PathIndex(sq.quiver, fx.pindex.truncation)
    gamma = VertexWeighting.by_name(fx.quiver, Z, {"x": zint(0), "y": zint(1)})
    lifting = sq.lifting_from_vertex_weighting(gamma)
    psi, phi, smash, induced = covering_coalgebra_iso(
        cover, lifting, fx.pindex, cover_pindex, window)
    assert induced.of(fx.quiver.arrow_index["a"]) == zint(-1)
    ok, _, checked = verify_coalgebra_map(
        psi, TruncatedPathCoalgebra(cover_pindex), smash)
    assert ok and checked > 0
    composed = compose_maps(psi, phi)
    assert is_identity_map(composed) and composed


def test_covering_iso_finite_cover():
    from covol.quiver import Quiver, QuiverMorphism
    cover_q = Quiver([str(i) for i in range(6)],
                     [("e%d" % i, i, (i + 1) % 6) for i in range(6)])
    base_q = Quiver([str(i) for i in range(3)],
                    [("e%d" % i, i, (i + 1) % 3) for i in range(3)])
    f = QuiverMorphism(cover_q, base_q, [i % 3 for i in range(6)],
                       [i % 3 for i in range(6)])
    cover = GaloisCoverData.from_finite(f, 0)
    base_pindex = PathIndex(base_q, 3)
    cover_pindex = PathIndex(cover_q, 3)
    lifting = {0: 0, 1: 1, 2: 2}
    window = cover.group.elements()
    psi, phi, smash, induced = covering_coalgebra_iso(
        cover, lifting, base_pindex, cover_pindex, window)
    # weights live in the two-element deck group; wrap-around arrow is nontrivial
    ident = cover.group.identity()
    weights = [induced.of(a) for a in range(3)]
    assert weights.count(ident) == 2
    ok, _, checked = verify_coalgebra_map(
        psi, TruncatedPathCoalgebra(cover_pindex), smash)
    assert ok and checked == len(cover_pindex)
    assert is_identity_map(compose_maps(phi, psi))
    assert is_identity_map(compose_maps(psi, phi))


def test_twist_iso():
    fx = kronecker_fixture()
    window = window_ball(Z, 3)
    gamma = VertexWeighting.by_name(fx.quiver, Z, {"x": zint(0), "y": zint(1)})
    tmap, source, target, twisted = twist_iso(fx.pindex, fx.weighting, gamma, window)
    ok, witness, checked = verify_coalgebra_map(tmap, source, target)
    assert ok and checked > 0
    # identity vertex weighting gives the identity map
    ident = VertexWeighting.constant(fx.quiver, Z)
    imap, src2, tgt2, tw2 = twist_iso(fx.pindex, fx.weighting, ident, window)
    assert tw2 == fx.weighting
    assert is_identity_map(imap)


def test_twist_iso_composition():
    fx = kronecker_fixture()
    window = window_ball(Z, 4)
    g1 = VertexWeighting.by_name(fx.quiver, Z, {"x": zint(1), "y": zint(0)})
    g2 = VertexWeighting.by_name(fx.quiver, Z, {"x": zint(-1), "y": zint(2)})
    m1, s0, s1, tw1 = twist_iso(fx.pindex, fx.weighting, g1, window)
    m2, s1b, s2, tw2 = twist_iso(fx.pindex, tw1, g2, window)
    pointwise = VertexWeighting(fx.quiver, Z, {
        v: Z.multiply(g1.of(v), g2.of(v)) for v in range(2)})
    m12, _, s2b, tw12 = twist_iso(fx.pindex, fx.weighting, pointwise, window)
    assert tw12 == tw2
    composed = compose_maps(m2, m1)
    assert all(composed[sym] == m12[sym] for sym in composed)


def test_twist_iso_commutes_with_projection():
    fx = kronecker_fixture()
    window = window_ball(Z, 3)
    gamma = VertexWeighting.by_name(fx.quiver, Z, {"x": zint(2), "y": zint(1)})
    tmap, source, target, _ = twist_iso(fx.pindex, fx.weighting, gamma, window)
    p_src = smash_projection_map(source)
    p_tgt = smash_projection_map(target)
    lhs = compose_maps(p_tgt, tmap)
    assert lhs == {sym: p_src[sym] for sym in lhs}


def test_twist_iso_commutes_with_right_action():
    fx = kronecker_fixture()
    window = window_ball(Z, 3)
    gamma = VertexWeighting.by_name(fx.quiver, Z, {"x": zint(1), "y": zint(-1)})
    tmap, source, target, _ = twist_iso(fx.pindex, fx.weighting, gamma, window)
    h = zint(1)
    for (i, g), image in tmap.items():
        shifted_src = (i, Z.multiply(g, h))
        if shifted_src not in tmap:
            continue
        (j, gp), = image.keys()
        want = (j, Z.multiply(gp, h))
        got = next(iter(tmap[shifted_src]))
        if target.has_symbol(want):
            assert got == want


def test_verify_coalgebra_map_identity_and_scaling():
    fx = loop_fixture(4)
    coalg = TruncatedPathCoalgebra(fx.pindex)
    ident = {sym: {sym: Fraction(1)} for sym in coalg.symbols()}
    ok, _, checked = verify_coalgebra_map(ident, coalg, coalg)
    assert ok and checked == len(fx.pindex)
    # doubling one arrow while fixing the longer paths breaks compatibility
    # at the composite a.a (detected exactly there)
    bad = dict(ident)
    a = fx.pindex.arrow_path("a")
    bad[a] = {a: Fraction(2)}
    ok, witness, _ = verify_coalgebra_map(bad, coalg, coalg)
    assert not ok and witness == fx.pindex.from_names(["a", "a"])


def test_json_serialization():
    fx = tri_fixture("ac+bc")
    doc = subcoalgebra_to_json(fx.basis)
    assert doc["schema"] == 1 and doc["dimension"] == 7
    flat = [row for space in doc["spaces"] for row in space["rows"]]
    assert any(len(row) == 2 for row in flat)  # the two-path generator
    for space in doc["spaces"]:
        for row in space["rows"]:
            for term in row:
                assert isinstance(term["path"], list)
                assert "/" in term["coeff"] or term["coeff"].lstrip("-").isdigit()
