import random

import pytest

from ranktwo import families, geometry as geo, qpoly
from ranktwo.errors import DomainError, ParameterError


def span_point(t, line, al, be):
    return tuple(
        t.add(t.mul(al, line.rows[0][c]), t.mul(be, line.rows[1][c])) for c in range(4)
    )


# ----------------------------------------------------------- parameter lists


def test_valid_parameter_counts(t3, t5, t7):
    assert len(families.valid_d_a_params(t3)) == 13
    assert families.valid_d_ab_params(t3) == []
    assert len(families.valid_d_a_params(t5)) == 93
    assert len(families.valid_d_ab_params(t5)) == 62
    assert len(families.valid_d_a_params(t7)) == 285
    assert len(families.valid_d_ab_params(t7)) == 228


def test_valid_parameter_membership(t5):
    t = t5
    for a in families.valid_d_a_params(t):
        assert a != 0 and t.norm(a) != 1
    bad = (1, t.negate(1))
    for b in families.valid_d_ab_params(t):
        assert b != 0 and t.norm(b) not in bad
    # the lists are sorted and duplicate-free
    da = families.valid_d_a_params(t)
    assert da == sorted(set(da))


# ------------------------------------------------------------- constructors


def test_single_twist_matrices(t5):
    t = t5
    xi = t.smallest_nonsquare()
    a = families.valid_d_a_params(t)[0]
    for r in (1, 2):
        S = families.make_d_a(t, a, r)
        assert S.meta == {"family": "d-a", "q": 5, "r": r, "a": a, "xi": xi}
        for i, e in enumerate(t.q3_basis()):
            Ae = t.sub(t.frobenius(e, r), t.mul(a, t.frobenius(e, 3 - r)))
            assert S.mats[i] == (e, 0, 0, t.mul(xi, Ae))
            assert S.mats[3 + i] == (0, e, Ae, 0)


def test_single_twist_rejections(t5):
    t = t5
    a = families.valid_d_a_params(t)[0]
    with pytest.raises(ParameterError) as e:
        families.make_d_a(t, 0, 1)
    assert e.value.code == "a-norm"
    with pytest.raises(ParameterError) as e:
        families.make_d_a(t, 1, 1)
    assert e.value.code == "a-norm"
    with pytest.raises(ParameterError) as e:
        families.make_d_a(t, a, 1, xi=4)  # 4 = 2^2 is a square
    assert e.value.code == "xi-square"
    with pytest.raises(ParameterError) as e:
        families.make_d_a(t, a, 1, xi=t.subfield_generator(3))
    assert e.value.code == "xi-domain"
    with pytest.raises(DomainError):
        families.make_d_a(t, t.generator, 1)


def test_double_twist_matrices(t5):
    t = t5
    xi = t.smallest_nonsquare()
    b = families.valid_d_ab_params(t)[0]
    for r in (1, 2):
        S = families.make_d_ab(t, b, r)
        assert S.meta == {"family": "d-ab", "q": 5, "r": r, "b": b, "xi": xi}
        b2 = t.mul(b, b)
        B = qpoly.reflect(t, b, r)
        for i, e in enumerate(t.q3_basis()):
            Ae = t.sub(t.frobenius(e, r), t.mul(b2, t.frobenius(e, 3 - r)))
            assert S.mats[i] == (e, 0, 0, t.mul(xi, B(e)))
            assert S.mats[3 + i] == (0, e, Ae, 0)


def test_double_twist_rejections(t3, t5):
    t = t5
    norm_minus_one = next(
        int(b) for b in t.members(3) if b != 0 and t.norm(int(b)) == t.negate(1)
    )
    for b in (0, 1, norm_minus_one):
        with pytest.raises(ParameterError) as e:
            families.make_d_ab(t, b, 1)
        assert e.value.code == "b-norm"
    # at q = 3 every nonzero b has norm 1 or -1
    for b in t3.members(3):
        if b == 0:
            continue
        with pytest.raises(ParameterError):
            families.make_d_ab(t3, int(b), 1)


# --------------------------------------------------------- canonical-form data


def test_lambda_bar(t5):
    t = t5
    assert families.lambda_bar(t, 2) == 2
    assert families.lambda_bar(t, 3) == 3
    with pytest.raises(DomainError):
        families.lambda_bar(t, t.negate(1))  # na + 1 = 0


def test_single_twist_transversal_data(t5):
    t = t5
    xi = t.smallest_nonsquare()
    a = next(x for x in families.valid_d_a_params(t) if t.norm(x) == 2)
    for r in (1, 2):
        t1, t2 = families.d_a_transversals(t, a, r, xi)
        assert geo.line_meet(t, t1, t2) is None
        f = families.d_a_transversal_map(t, a, r, xi)
        for al in range(t.q):
            for be in range(t.q):
                if al == be == 0:
                    continue
                img = f(span_point(t, t1, al, be))
                assert geo.point_on_line(t, geo.mk_point(t, img), t2)


def test_single_twist_transversals_match_recovery(t5):
    t = t5
    xi = t.smallest_nonsquare()
    a = next(x for x in families.valid_d_a_params(t) if t.norm(x) == 2)
    pr = families.make_d_a(t, a, 1).linear_set().pseudoregulus()
    t1, t2 = families.d_a_transversals(t, a, 1, xi)
    assert {ln.rows for ln in pr.transversals} == {t1.rows, t2.rows}


def test_single_twist_normalizer_transport(t5):
    # the pair-model collineation carries the first stated transversal onto
    # the axis {(z, 0)} and the second onto the diagonal {(lb*z, z)}
    t = t5
    xi = t.smallest_nonsquare()
    for na in (2, 3):
        a = next(x for x in families.valid_d_a_params(t) if t.norm(x) == na)
        lb = families.lambda_bar(t, na)
        for r in (1, 2):
            t1, t2 = families.d_a_transversals(t, a, r, xi)
            g = families.d_a_normalizer(t, a, r, xi)
            for u in t1.rows:
                X, Y = geo.apply_collineation(t, g, *geo.phi_vec(t, u, xi))
                assert Y == 0 and X != 0
            for u in t2.rows:
                X, Y = geo.apply_collineation(t, g, *geo.phi_vec(t, u, xi))
                assert Y != 0 and X == t.mul(lb, Y)


def test_double_twist_transversal_data(t5, t7):
    rng = random.Random(17)
    for t in (t5, t7):
        xi = t.smallest_nonsquare()
        b = families.valid_d_ab_params(t)[0]
        for r in (1, 2):
            t1, t2 = families.d_ab_transversals(t, b, r, xi)
            f = families.d_ab_transversal_map(t, b, r, xi)
            m = t.members(3)
            for _ in range(15):
                al = int(m[rng.randrange(len(m))])
                be = int(m[rng.randrange(len(m))])
                if al == be == 0:
                    continue
                img = f(span_point(t, t1, al, be))
                assert geo.point_on_line(t, geo.mk_point(t, img), t2)
            meet = geo.line_meet(t, geo.polar_line(t, t1), t2)
            assert meet.coords == (1, 0, 0, t.negate(xi))


def test_double_twist_degenerate_meet_is_the_heavy_point(t5, t7):
    # when norm(b^2) = -1 the two stated lines meet exactly in the unique
    # weight-2 point of the set; otherwise they are skew
    t = t5
    xi = t.smallest_nonsquare()
    for b in families.valid_d_ab_params(t)[:2]:
        assert t.norm(t.mul(b, b)) == t.negate(1)
        t1, t2 = families.d_ab_transversals(t, b, 1, xi)
        meet = geo.line_meet(t, t1, t2)
        heavy = families.make_d_ab(t, b, 1).linear_set().points_of_weight(2)[0]
        assert meet is not None and meet.coords == heavy.coords
    b7 = families.valid_d_ab_params(t7)[0]
    assert t7.norm(t7.mul(b7, b7)) != t7.negate(1)
    u1, u2 = families.d_ab_transversals(t7, b7, 1, t7.smallest_nonsquare())
    assert geo.line_meet(t7, u1, u2) is None


def test_axis_lines_are_a_polar_pair(t5):
    s, s_perp = families.d_ab_axis_lines(t5)
    assert geo.polar_line(t5, s).rows == s_perp.rows
    assert geo.line_meet(t5, s, s_perp) is None


# --------------------------------------------------------- reference families


def test_f4a_construction(t3, t5, t7):
    for t, sigma in ((t3, 1), (t5, 3), (t7, 3)):
        S = families.make_f4a(t)
        assert S.meta["sigma"] == sigma
        S.verify_no_zero_divisors()
    S3 = families.make_f4a(t3)
    assert S3.nuclei().as_tuple() == (27, 9, 3, 3)
    assert len(S3.linear_set().contained_lines()) == 1


def test_f4a_matrices_represent_two_term_maps(t3):
    # each basis matrix acts on {1, w}-coordinates as x -> c*x + d*x^{q^3}
    t = t3
    S = families.make_f4a(t)
    u, b, w = S.meta["u"], S.meta["b"], S.meta["split_basis"]
    zeta = t.subfield_generator(2)
    dwi = t.inv(t.sub(w, t.frobenius(w, 3)))

    def split(z):
        z2 = t.mul(t.sub(z, t.frobenius(z, 3)), dwi)
        return t.sub(z, t.mul(z2, w)), z2

    u2 = t.mul(u, u)
    triples = ((1, 0, 0), (zeta, 0, 0), (0, 1, 0), (0, zeta, 0), (0, 0, 1), (0, 0, zeta))
    rng = random.Random(5)
    for (al, be, ga), mat in zip(triples, S.mats):
        c = t.add(t.add(al, t.mul(be, u)), t.mul(ga, u2))
        d = t.mul(ga, b)
        for _ in range(6):
            z = rng.randrange(1, t.order)
            z1, z2 = split(z)
            want = split(t.add(t.mul(c, z), t.mul(d, t.frobenius(z, 3))))
            got = (
                t.add(t.mul(z1, mat[0]), t.mul(z2, mat[2])),
                t.add(t.mul(z1, mat[1]), t.mul(z2, mat[3])),
            )
            assert got == want


def test_f4a_sigma_validation(t5):
    # X^3 - X - 1 has the root 2 over F_5, so sigma = 1 is rejected
    with pytest.raises(ParameterError) as e:
        families.make_f4a(t5, sigma=1)
    assert e.value.code == "sigma-reducible"
    with pytest.raises(DomainError):
        families.make_f4a(t5, sigma=t5.subfield_generator(3))


def test_canonical_form_validation(t5):
    t = t5
    with pytest.raises(ParameterError) as e:
        families.make_canonical(t, 1, 1, 3)
    assert e.value.code == "sigma-exp"
    with pytest.raises(ParameterError) as e:
        families.make_canonical(t, 1, 0, 2)
    assert e.value.code == "alpha-zero"


def test_smallest_with_norm(t3):
    t = t3
    fibers = {}
    for z in range(1, t.order):
        fibers.setdefault(t.norm(z, 6, 3), []).append(z)
    for target in (1, 2, t.subfield_generator(3)):
        got = families.smallest_with_norm(t, target)
        assert got == min(fibers[target])
        assert t.norm(got, 6, 3) == target
    with pytest.raises(ParameterError) as e:
        families.smallest_with_norm(t, 0)
    assert e.value.code == "norm-domain"
    with pytest.raises(DomainError):
        families.smallest_with_norm(t, t.generator)


def test_s1_targets_and_members(t5, t7):
    assert families.s1_norm_targets(t7) == [5, 6]
    with pytest.raises(ParameterError) as e:
        families.s1_norm_targets(t5)
    assert e.value.code == "congruence"
    for index, target in ((0, 5), (1, 6)):
        S = families.make_s1(t7, index)
        assert S.meta["family"] == "s1"
        assert S.meta["norm"] == target
        assert t7.norm(S.meta["lambda"], 6, 3) == target
        S.verify_no_zero_divisors()
    with pytest.raises(ParameterError) as e:
        families.make_s1(t7, 2)
    assert e.value.code == "s1-index"


def test_s2_target_and_member(t3, t5):
    t = t3
    target = families.s2_norm_target(t)
    roots = [
        int(u)
        for u in t.members(3)
        if not t.in_subfield(int(u), 1)
        and t.sub(t.sub(t.pow_int(int(u), 3), int(u)), 1) == 0
    ]
    assert roots
    assert any(
        t.mul(target, t.negate(t.add(u, t.mul(u, u)))) == 1 for u in roots
    )
    S = families.make_s2(t)
    assert S.meta["family"] == "s2"
    assert S.meta["norm"] == target
    S.verify_no_zero_divisors()
    with pytest.raises(ParameterError) as e:
        families.make_s2(t5)
    assert e.value.code == "congruence"
