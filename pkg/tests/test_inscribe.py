import math
import random
from fractions import Fraction

import pytest

from inscribable.arrangement import new_arrangement, ordered_codim2_flats
from inscribable.catalog import a3_10_1_normals, a3_10_1_qform, a_form, gen_A, gen_D, gen_I2
from inscribable.exactalg import FieldSpec, kernel_basis, rank
from inscribable.inscribe import (
    FALSE,
    INCONCLUSIVE,
    TRUE,
    InvalidAngles,
    InvalidProfile,
    NotRank2,
    Profile,
    analyze,
    edge_matrix,
    edge_matrix_kernel,
    face_angle_profile,
    profile_conditions,
    profile_inscribable,
    profile_verdict,
    reduced_profile,
    skew_gram,
    symmetrize_face_angles,
    virtually_inscribable,
    z_in_cone,
    z_in_cone_sample,
    z_in_space,
)
from inscribable.qform import QForm

RAT = FieldSpec.rational()
Q5 = FieldSpec.quadratic(5)


def coord(d):
    return new_arrangement(RAT, [[int(i == j) for j in range(d)] for i in range(d)])


def same_span(F, U, V):
    return rank(U, F) == rank(V, F) == rank(list(U) + list(V), F)


def three_lines():
    # normals already in one open half-plane with positive first functional value
    return new_arrangement(RAT, [[1, 0], [1, 2], [-1, 3]])


def unit_lines(thetas, tol=1e-12):
    return new_arrangement(FieldSpec.float(tol), [[math.cos(t), math.sin(t)] for t in thetas])


# --- skew-Gram ------------------------------------------------------------------


def test_skew_gram_orthogonal_pair_is_zero():
    (f, *_) = ordered_codim2_flats(coord(3))
    assert skew_gram(coord(3), f) == [[0, 0], [0, 0]]


def test_skew_gram_three_lines_matches_inner_products():
    A = three_lines()
    (f,) = ordered_codim2_flats(A)
    R = skew_gram(A, f)
    Z = [A.normals[i] for i in f.indices]
    dot = lambda u, v: sum(a * b for a, b in zip(u, v))
    assert R == [
        [0, dot(Z[0], Z[1]), dot(Z[0], Z[2])],
        [-dot(Z[0], Z[1]), 0, dot(Z[1], Z[2])],
        [-dot(Z[0], Z[2]), -dot(Z[1], Z[2]), 0],
    ]


def test_a3_10_1_flat_8_3_vanishes_under_published_form():
    A = new_arrangement(Q5, a3_10_1_normals())
    flat = next(f for f in ordered_codim2_flats(A) if set(f.indices) == {7, 2})
    R = skew_gram(A, flat, a3_10_1_qform())
    assert all(x == 0 for row in R for x in row)


# --- ZInSpc / ZInCone -----------------------------------------------------------


def test_coordinate_space_and_cone():
    sp = z_in_space(coord(3))
    assert sp.dim == 3 and sp.basis == [[1, 0, 0], [0, 1, 0], [0, 0, 1]]
    lam = z_in_cone_sample(coord(3))
    assert all(x > 0 for x in lam)


def test_three_lines_kernel_formula():
    A = three_lines()
    (f,) = ordered_codim2_flats(A)
    R = skew_gram(A, f)
    r12, r13, r23 = R[0][1], R[0][2], R[1][2]
    sp = z_in_space(A)
    assert sp.dim == 1
    expect = [0] * 3
    for pos, val in zip(f.indices, (r23, -r13, r12)):
        expect[pos] = val
    assert same_span(RAT, sp.basis, [expect])
    # strongly inscribed iff r12, -r13, r23 > 0
    assert (z_in_cone_sample(A) is not None) == (r12 > 0 and -r13 > 0 and r23 > 0)


def test_a3_space_and_cone():
    A = gen_A(3)
    assert z_in_space(A).dim == 1
    lam = z_in_cone_sample(A, a_form([1, 1, 1, 1]))
    assert lam is not None and len(set(lam)) == 1 and lam[0] > 0


def test_a3_identity_form_has_mixed_kernel():
    # e_i - e_j and e_i in R^3 with the plain dot product is not the root metric
    A = gen_A(3)
    c = z_in_cone(A)
    assert c.sample is None and c.verdict == FALSE


def test_b4_space():
    assert z_in_space(gen_D(4, 4)).dim == 2


def test_published_a3_10_1():
    A = new_arrangement(Q5, a3_10_1_normals())
    Q = a3_10_1_qform()
    rep = analyze(A, Q)
    assert rep.zinspc_dim == 1 and rep.zincone_sample is None and rep.zincone_verdict == FALSE
    tau1 = Q5.parse("3/2+1/2*rt")
    line = [1, 1, -tau1, -tau1, -tau1, -tau1, -tau1, 1, 1, 1]
    assert same_span(Q5, rep.zinspc_basis, [[Q5.coerce(x) for x in line]])
    assert rep.virtually_inscribable == TRUE
    assert not Q.is_positive_definite()


def test_a3_10_1_identity_not_virtually_inscribable():
    A = new_arrangement(Q5, a3_10_1_normals())
    ok, reports = virtually_inscribable(A)
    assert not ok and any(r.verdict == FALSE for r in reports)


def test_report_invariants():
    for A, Q in [(gen_A(4), a_form([1] * 5)), (gen_D(4, 4), None), (gen_I2(5), None), (coord(3), None)]:
        rep = analyze(A, Q)
        assert rep.zinspc_dim == len(rep.zinspc_basis)
        if rep.zincone_sample is not None:
            F = A.field
            assert all(F.sign(x) > 0 for x in rep.zincone_sample)
            M = rep.zinspc_basis + [rep.zincone_sample]
            if F.exact:
                assert rank(M, F) == rep.zinspc_dim
        js = rep.to_json()
        assert js["zincone_verdict"] in (TRUE, FALSE, INCONCLUSIVE)
        assert all(min(p["flat"]) >= 1 for p in js["per_flat"])


def test_scaling_a_normal_rescales_lambda():
    """lambda is relative to the stored normals: z_1 -> 2 z_1 halves lambda_1."""
    A = gen_D(3, 0)
    rows = [list(z) for z in A.normals]
    rows[0] = [2 * x for x in rows[0]]
    B = new_arrangement(RAT, rows)
    (a,) = z_in_space(A).basis
    (b,) = z_in_space(B).basis
    scale = b[1] / a[1]
    assert b[0] == scale * a[0] / 2
    assert all(y == scale * x for x, y in zip(a[1:], b[1:]))


def test_float_agrees_with_exact():
    E = gen_D(4, 2)
    Fl = new_arrangement(FieldSpec.float(), [[float(x) for x in z] for z in E.normals])
    assert z_in_space(E).dim == z_in_space(Fl).dim
    assert (z_in_cone_sample(E) is None) == (z_in_cone_sample(Fl) is None)


def test_float_boundary_is_inconclusive():
    # lines at 0, pi/2, 2: r12 = 0 puts the kernel line on a coordinate face
    for tweak in (0.0, 1e-11, -1e-11):
        c = z_in_cone(unit_lines([0.0, math.pi / 2 + tweak, 2.0], tol=1e-9))
        assert c.verdict == INCONCLUSIVE and c.sample is None
    assert z_in_cone(unit_lines([0.0, math.pi / 2 + 0.2, 2.0], tol=1e-9)).verdict == FALSE
    assert z_in_cone(unit_lines([0.0, math.pi / 2 - 0.2, 2.0], tol=1e-9)).verdict == TRUE


def test_exact_mode_never_inconclusive():
    A = new_arrangement(RAT, [[1, 0], [0, 1], [-1, 1]])  # r12 = 0
    assert z_in_cone(A).verdict == FALSE


# --- Pfaffians ------------------------------------------------------------------


def test_pf_r4_equals_cos_of_opposite_gaps(rng):
    for _ in range(50):
        cuts = sorted(rng.uniform(0.05, math.pi - 0.05) for _ in range(3))
        beta = [cuts[0], cuts[1] - cuts[0], cuts[2] - cuts[1], math.pi - cuts[2]]
        thetas = [0.0, cuts[0], cuts[1], cuts[2]]
        A = unit_lines(thetas)
        ok, (rep,) = virtually_inscribable(A)
        assert abs(abs(rep.pfaffian) - abs(math.cos(beta[0] + beta[2]))) < 1e-9


def test_quarter_profile_virtually_inscribable():
    A = unit_lines([k * math.pi / 4 for k in range(4)], tol=1e-9)
    ok, (rep,) = virtually_inscribable(A)
    assert ok and abs(rep.pfaffian) < 1e-12


def test_odd_flats_trivially_vanish():
    ok, reps = virtually_inscribable(gen_A(3))
    assert ok
    assert all(r.pfaffian == 0 for r in reps if len(r.flat) % 2)


# --- edge matrix ---------------------------------------------------------------


def test_edge_matrix_coordinate_is_zero():
    T = edge_matrix(coord(2))
    assert all(x == 0 for row in T.rows for x in row)
    assert same_span(RAT, edge_matrix_kernel(coord(2)), [[1, 0], [0, 1]])


def test_edge_matrix_three_lines():
    A = three_lines()
    assert same_span(RAT, edge_matrix_kernel(A), z_in_space(A).basis)


def test_edge_matrix_rows():
    A = gen_A(3)
    T = edge_matrix(A)
    assert len(T.rows) == 24 * 3 // 2
    for tau, j, row in zip(T.covectors, T.crossed, T.rows):
        assert tau[j] == 0
        for i, x in enumerate(row):
            g = sum(a * b for a, b in zip(A.normals[j], A.normals[i]))
            assert x == tau[i] * g
    assert same_span(RAT, edge_matrix_kernel(A), z_in_space(A).basis)


# --- rank-2 profiles ------------------------------------------------------------


def test_reduced_profile_examples():
    assert reduced_profile(coord(2)).angles == pytest.approx((math.pi / 2, math.pi / 2))
    assert reduced_profile(gen_I2(3)).angles == pytest.approx((math.pi / 3,) * 3)
    A = unit_lines([0.0, math.pi / 6, math.pi / 2])
    assert reduced_profile(A).angles == pytest.approx((math.pi / 6, math.pi / 3, math.pi / 2))
    with pytest.raises(NotRank2):
        reduced_profile(gen_A(3))


def test_profile_examples():
    assert profile_inscribable((math.pi / 3,) * 3)
    assert profile_inscribable((math.pi / 4,) * 4)
    assert not profile_inscribable((1.9, 0.6, math.pi - 2.5))
    assert profile_verdict((math.pi / 2, math.pi / 4, math.pi / 4)) == INCONCLUSIVE
    assert not profile_inscribable((0.5, 0.5, 0.5, math.pi - 1.5))


def test_profile_conditions_odd_three():
    # n = 3: alternating sums are pi - 2 beta_j
    beta = (0.4, 1.0, math.pi - 1.4)
    eq, strict = profile_conditions(beta)
    assert eq == []
    assert sorted(strict) == pytest.approx(sorted(math.pi - 2 * b for b in beta))


@pytest.mark.parametrize("bad", [(1.0,), (0.0, math.pi), (1.0, 1.0), (-0.1, 1.0, math.pi - 0.9)])
def test_invalid_profiles(bad):
    with pytest.raises(InvalidProfile):
        Profile(bad)


def test_symmetrize_examples():
    sym = [0.5, 1.0, 2 * math.pi / 2 - 1.5] * 2
    assert symmetrize_face_angles(sym) == pytest.approx(sym)
    a, b, c = 0.9, 1.1, 1.0
    a2, b2, c2 = 1.3, 0.9, 2 * math.pi - (a + b + c + 1.3 + 0.9)
    out = symmetrize_face_angles([a, b, c, a2, b2, c2])
    half = [(a + a2) / 2, (b + b2) / 2, (c + c2) / 2]
    assert out == pytest.approx(half + half)


def test_symmetrize_errors():
    with pytest.raises(InvalidAngles):
        symmetrize_face_angles([1.0, 1.0, 1.0])
    with pytest.raises(InvalidAngles):
        symmetrize_face_angles([1.0] * 4)
    with pytest.raises(InvalidAngles):
        symmetrize_face_angles([4.0, 2 * math.pi - 4.0 - 1.0, 0.5, 0.5])


def random_face_angles(rng, n):
    """Face angles of a 2n-gon whose profile repeats with period n."""
    while True:
        if n % 2:
            beta = [rng.uniform(0.1, 1.0) for _ in range(n)]
            s = sum(beta)
            beta = [b * math.pi / s for b in beta]
        else:
            ev = [rng.uniform(0.1, 1.0) for _ in range(n // 2)]
            od = [rng.uniform(0.1, 1.0) for _ in range(n // 2)]
            ev = [x * (math.pi / 2) / sum(ev) for x in ev]
            od = [x * (math.pi / 2) / sum(od) for x in od]
            beta = [v for pair in zip(ev, od) for v in pair]
        full = beta + beta
        alpha = [rng.uniform(-0.3, 0.3) + beta[0]]
        for i in range(2 * n - 1):
            alpha.append(2 * full[i] - alpha[i])
        if all(-math.pi < x <= math.pi for x in alpha):
            return alpha, full


def test_symmetrize_preserves_profile(rng):
    for _ in range(200):
        n = rng.randint(2, 6)
        alpha, beta = random_face_angles(rng, n)
        assert sum(alpha) == pytest.approx(2 * math.pi, abs=1e-9)
        assert face_angle_profile(alpha) == pytest.approx(beta, abs=1e-9)
        out = symmetrize_face_angles(alpha)
        assert all(abs(out[i] - out[n + i]) < 1e-12 for i in range(n))
        assert face_angle_profile(out) == pytest.approx(face_angle_profile(alpha), abs=1e-9)
        assert symmetrize_face_angles(out) == pytest.approx(out, abs=1e-12)
