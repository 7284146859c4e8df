"""Acceptance sweeps, one test per shipping criterion (C1 through C8).

Unlike the unit suites these run the full catalogue end to end: every
valid twist parameter at every order the package targets, plus the q = 9
tower for the heavy double-twist case.  Expect roughly ten minutes of
wall time, most of it in C3 and C4.  The terminal summary hook in
conftest prints one PASS/FAIL line per criterion at the end of the run.
"""

from __future__ import annotations

from _shared import assert_partition_identity, assert_pseudoregulus_shape, criterion
from ranktwo import checks, families, geometry
from ranktwo.cli import main as cli_main

# (valid single-twist params, valid double-twist params) per q
PARAM_COUNTS = {3: (13, 0), 5: (93, 62), 7: (285, 228)}


def _failed(rep) -> str:
    bad = [
        (case["params"], ck["name"])
        for case in rep["cases"]
        for ck in case["checks"]
        if not ck["pass"]
    ]
    return f"{len(bad)} failing checks, first: {bad[:3]}"


@criterion("C1")
def test_c1_zero_divisor_scan_and_nuclei_for_every_parameter(t3, t5, t7):
    for t in (t3, t5, t7):
        q = t.q
        single = (q**3, q**2, q, q)
        double = (q**3, q, q, q)
        alist = families.valid_d_a_params(t)
        blist = families.valid_d_ab_params(t)
        assert (len(alist), len(blist)) == PARAM_COUNTS[q]
        for r in (1, 2):
            for a in alist:
                s = families.make_d_a(t, a, r)
                s.verify_no_zero_divisors()
                assert s.nuclei().as_tuple() == single, ("d-a", q, a, r)
            for b in blist:
                s = families.make_d_ab(t, b, r)
                s.verify_no_zero_divisors()
                assert s.nuclei().as_tuple() == double, ("d-ab", q, b, r)


@criterion("C2")
def test_c2_norm_minus_one_members_match_the_contained_line_reference(t3, t5, t7):
    for t in (t3, t5, t7):
        rep = checks.verify_claim("3.1", t)
        assert rep["summary"]["pass"], _failed(rep)
        # the norm fiber over -1 has q^2+q+1 members, all swept
        assert rep["summary"]["a_count"] == t.q**2 + t.q + 1
        assert rep["summary"]["cases"] == 1 + 2 * rep["summary"]["a_count"]


@criterion("C3")
def test_c3_scattered_members_transversals_and_class_floor(t5, t7):
    expected = {5: (62, 1, 1.0), 7: (228, 2, 2.0)}
    for t in (t5, t7):
        rep = checks.verify_claim("3.2", t)
        assert rep["summary"]["pass"], _failed(rep)
        a_count, orbits, floor = expected[t.q]
        assert rep["summary"]["a_count"] == a_count
        assert rep["summary"]["orbit_count"] == orbits
        assert rep["summary"]["floor"] == floor


@criterion("C4")
def test_c4_unique_double_point_plane_and_polar_cut(t5, t9):
    expected_b = {5: 62, 9: 182}
    for t in (t5, t9):
        rep = checks.verify_claim("3.3i", t)
        assert rep["summary"]["pass"], _failed(rep)
        assert rep["summary"]["b_count"] == expected_b[t.q]


@criterion("C5")
def test_c5_scattered_double_twist_with_polar_meeting_point(t7):
    rep = checks.verify_claim("3.3ii", t7)
    assert rep["summary"]["pass"], _failed(rep)
    assert rep["summary"]["b_count"] == 228
    assert rep["summary"]["cases"] == 1 + 2 * 228


@criterion("C6")
def test_c6_randomized_graph_roundtrips(t3, t5):
    for t in (t3, t5):
        rep = checks.verify_claim("2.1", t, trials=20, seed=0)
        assert rep["summary"]["pass"], _failed(rep)
        assert rep["summary"]["cases"] == 20


@criterion("C7")
def test_c7_derivatives_are_involutions_and_stay_new(t5, t7):
    for t in (t5, t7):
        rep = checks.verify_claim("3.4", t, sample=5)
        assert rep["summary"]["pass"], _failed(rep)
        assert rep["summary"]["a_sampled"] == 5
        assert rep["summary"]["b_sampled"] == 5


@criterion("C8")
def test_c8_cross_cutting_identities_and_byte_identical_reports(
    t3, t5, t7, capsys
):
    scattered_a = next(
        a for a in families.valid_d_a_params(t5) if t5.norm(a) != t5.negate(1)
    )
    catalogue = [
        families.make_d_a(t3, families.valid_d_a_params(t3)[0], 1),
        families.make_d_a(t5, scattered_a, 1),
        families.make_d_ab(t5, families.valid_d_ab_params(t5)[0], 2),
        families.make_d_ab(t7, families.valid_d_ab_params(t7)[0], 1),
        families.make_f4a(t5),
        families.make_s1(t7),
        families.make_s2(t3),
    ]
    for s in catalogue:
        assert_partition_identity(s.linear_set())

    L = catalogue[1].linear_set()
    pr = L.pseudoregulus()
    assert_pseudoregulus_shape(t5, L, pr)

    for line in (*pr.transversals, pr.lines[0], pr.lines[-1]):
        back = geometry.polar_line(t5, geometry.polar_line(t5, line))
        assert back.rows == line.rows
    for i in (0, 17, L.point_count() - 1):
        P = L.point_at(i)
        back = geometry.polar_point(t5, geometry.polar_plane(t5, P))
        assert back.coords == P.coords

    step = (t5.order - 1) // 40
    for k in range(0, t5.order - 1, step):
        x = int(t5.exp[k])
        assert t5.norm(x, 6, 1) == t5.norm(t5.norm(x, 6, 3), 3, 1)
        assert t5.trace(x, 6, 1) == t5.trace(t5.trace(x, 6, 3), 3, 1)

    def run(argv):
        code = cli_main(argv)
        return code, capsys.readouterr().out

    for argv in (
        ["construct", "--p", "5", "d-a", "--a", "0"],
        ["survey", "--p", "3", "d-a"],
        ["check", "--p", "3", "2.1", "--trials", "5", "--seed", "7"],
        ["construct", "--p", "7", "d-ab", "--b", "3", "--format", "csv"],
    ):
        code_one, out_one = run(argv)
        code_two, out_two = run(argv)
        assert code_one == code_two == 0
        assert out_one and out_one == out_two
