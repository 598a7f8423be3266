"""Automorphism action: psi, the flip, conjugation, canonical forms, search."""

import random
from fractions import Fraction

import pytest

from rbu3.matrices import UTMatrix, basis_indices, parse_matrix
from rbu3.operators import Operator, rb_residual
from rbu3.transform import (AutoParams, PsiStep, ThetaStep, Witness, build_psi,
                            canonicalize_idempotent, canonicalize_nilpotent,
                            conjugate_operator, find_conjugation, theta13)


def e(i, j):
    return UTMatrix.basis(3, i, j)


def random_psi(rng):
    nz = lambda: Fraction(rng.choice([x for x in range(-5, 6) if x]),
                          rng.randint(1, 3))
    q = lambda: Fraction(rng.randint(-5, 5), rng.randint(1, 3))
    return build_psi(AutoParams(nz(), q(), q(), nz(), q()))


def test_psi_columns():
    psi = build_psi(AutoParams(alpha=Fraction(2), beta=Fraction(3),
                               gamma=Fraction(5), delta=Fraction(7),
                               epsilon=Fraction(11)))
    assert psi.apply(e(1, 3)) == e(1, 3).scale(Fraction(2))
    assert psi.apply(e(2, 3)) == parse_matrix("2/7*e23 - 6/7*e13")
    assert build_psi(AutoParams()).apply(e(2, 2)) == e(2, 2)


def test_psi_rejects_degenerate_parameters():
    with pytest.raises(ValueError):
        AutoParams(alpha=0)
    with pytest.raises(ValueError):
        AutoParams(delta=0)


def test_psi_fixes_the_unit():
    psi = random_psi(random.Random(1))
    assert psi.apply(UTMatrix.unit(3)) == UTMatrix.unit(3)


def test_theta_is_an_involution_swapping_corners():
    th = theta13()
    assert th.apply(e(1, 2)) == e(2, 3)
    assert th.apply(e(1, 1)) == e(3, 3)
    assert th.compose(th).apply(parse_matrix("e12 - 2*e13")) == \
        parse_matrix("e12 - 2*e13")
    # antimultiplicativity on one pair: theta(e12*e23) = theta(e23)theta(e12)
    assert th.apply(e(1, 2) * e(2, 3)) == th.apply(e(2, 3)) * th.apply(e(1, 2))


def test_maps_are_verified_at_construction():
    from rbu3.transform import AlgebraMap
    columns = {idx: UTMatrix.basis(3, *idx) for idx in basis_indices(3)}
    columns[(1, 2)] = e(1, 3)  # breaks multiplicativity
    with pytest.raises(ValueError):
        AlgebraMap(3, "automorphism", columns)


R5 = Operator.from_images({"e12": "e11"})


def test_conjugation_by_identity():
    assert conjugate_operator(R5, build_psi(AutoParams())) == R5


def test_conjugation_composes_as_group_action():
    rng = random.Random(7)
    phi, chi = random_psi(rng), random_psi(rng)
    lhs = conjugate_operator(conjugate_operator(R5, phi), chi)
    rhs = conjugate_operator(R5, phi.compose(chi))
    assert lhs == rhs


def test_conjugation_invertible():
    rng = random.Random(9)
    phi = random_psi(rng)
    op = conjugate_operator(R5, phi)
    inverse_cols = phi.inverse_columns()
    from rbu3.transform import AlgebraMap
    inv = AlgebraMap(3, "automorphism", inverse_cols)
    assert conjugate_operator(op, inv) == R5


def test_conjugation_preserves_residual_psi_and_theta():
    rng = random.Random(11)
    op = Operator.from_images({"e11": "-e13", "e33": "e13", "e23": "e22"})
    assert rb_residual(op).is_zero()
    for _ in range(10):
        assert rb_residual(conjugate_operator(op, random_psi(rng))).is_zero()
    assert rb_residual(conjugate_operator(op, theta13())).is_zero()


def test_conjugation_preserves_residual_identically_in_parameters():
    # conjugating a parametric family by a rational psi keeps the residual
    # zero as a polynomial identity, not just at sampled parameter values
    kappa_family = Operator.from_images(
        {"e11": "kappa*e12", "e22": "e12", "e23": "e11 + e22"},
        params=("kappa",))
    conj = conjugate_operator(kappa_family, random_psi(random.Random(3)))
    assert rb_residual(conj).is_zero()
    assert conj.params() == ("kappa",)


def test_in_text_conjugation_to_single_e22_image():
    # R(e23) = e22 + t e12 conjugated with beta = -t lands on R(e23) = e22
    t = Fraction(2)
    src = Operator(3, {(2, 3): UTMatrix(3, {(2, 2): Fraction(1), (1, 2): t})})
    conj = conjugate_operator(src, build_psi(AutoParams(beta=-t)))
    assert conj == Operator.from_images({"e23": "e22"})


def test_flip_carries_span_family_to_mirror_span():
    # images in L(e12,e13) with kernel {e12,e13} flip to images in L(e13,e23)
    op = Operator.from_images({"e22": "2*e12 - e13", "e23": "e12"})
    flipped = conjugate_operator(op, theta13())
    for idx in basis_indices(3):
        img = flipped.image(idx)
        assert all(pos in ((1, 3), (2, 3)) for pos in img.entries)
    assert flipped.apply(e(2, 3)).is_zero() and flipped.apply(e(1, 3)).is_zero()


# -- canonical forms ---------------------------------------------------------


def test_canonicalize_nilpotent_table():
    cf = canonicalize_nilpotent(e(2, 3))
    assert cf.label == "e12"
    assert any(isinstance(s, ThetaStep) for s in cf.witness.steps)

    cf = canonicalize_nilpotent(parse_matrix("2*e12 + 6*e13"))
    assert cf.label == "e12"
    assert cf.witness.steps[0].params.delta == 2

    cf = canonicalize_nilpotent(parse_matrix("e12 + e23"))
    assert cf.label == "e12+e23"

    assert canonicalize_nilpotent(UTMatrix.zero(3)).label == "zero"
    assert canonicalize_nilpotent(parse_matrix("-5*e13")).label == "e13"


def test_canonicalize_nilpotent_rejects_non_nilpotent():
    with pytest.raises(ValueError):
        canonicalize_nilpotent(e(1, 1))


def test_canonicalize_nilpotent_witness_certifies(subtests=None):
    rng = random.Random(13)
    labels = set()
    for _ in range(100):
        entries = {}
        for idx in ((1, 2), (1, 3), (2, 3)):
            if rng.random() < 0.7:
                entries[idx] = Fraction(rng.randint(-6, 6), rng.randint(1, 3))
        m = UTMatrix(3, entries)
        cf = canonicalize_nilpotent(m)
        assert cf.witness.act_element(m) == cf.form
        labels.add(cf.label)
    assert labels == {"zero", "e12", "e13", "e12+e23"}


def test_canonicalize_idempotent_rank_one():
    cf = canonicalize_idempotent(parse_matrix("e11 + 3*e12 + 5*e13"))
    assert cf.label == "e11"
    assert cf.witness.steps[0].params.beta == 3
    assert cf.witness.steps[0].params.gamma == 5

    cf = canonicalize_idempotent(e(3, 3))
    assert cf.label == "e11"
    assert isinstance(cf.witness.steps[0], ThetaStep)

    cf = canonicalize_idempotent(parse_matrix("e22 + 2*e12 + 2*e13 + e23"))
    assert cf.label == "e22"


def test_canonicalize_idempotent_rank_two():
    cf = canonicalize_idempotent(parse_matrix("e11 + e22 + 4*e13 + 7*e23"))
    assert cf.label == "e11+e22"
    assert (cf.witness.steps[0].params.gamma, cf.witness.steps[0].params.epsilon) \
        == (4, 7)
    cf = canonicalize_idempotent(parse_matrix("e11 + e33 + 2*e12 - 2*e13 + e23"))
    assert cf.label == "e11+e33"
    cf = canonicalize_idempotent(parse_matrix("e22 + e33 + 3*e12 + e13"))
    assert cf.label == "e11+e22"


def test_canonicalize_idempotent_rejects_bad_input():
    with pytest.raises(ValueError):
        canonicalize_idempotent(e(1, 2))
    with pytest.raises(ValueError):
        canonicalize_idempotent(UTMatrix.unit(3))  # rank 3
    with pytest.raises(ValueError):
        canonicalize_idempotent(UTMatrix.zero(3))  # rank 0


def test_idempotent_form_preserves_rank():
    for text in ("e11 + 3*e12 + 5*e13", "e22 + 2*e23", "e11 + e22 + 4*e13"):
        m = parse_matrix(text)
        cf = canonicalize_idempotent(m)
        assert cf.form.is_idempotent() and cf.form.rank() == m.rank()


# -- conjugation search --------------------------------------------------------


def test_find_conjugation_identity_case():
    result = find_conjugation(R5, R5)
    assert result.status == "found"
    assert result.witness.transform_operator(R5) == R5


def test_find_conjugation_disjoint_certificate():
    r6 = Operator.from_images({"e13": "e11"})
    result = find_conjugation(R5, r6, allow_theta=False)
    assert result.status == "disjoint"
    assert result.certificate is not None
    basis = result.certificate.basis
    assert len(basis) == 1 and basis[0].is_constant()


def test_find_conjugation_with_flip():
    op = Operator.from_images({"e22": "e12"})
    target = conjugate_operator(op, theta13())
    result = find_conjugation(op, target, allow_theta=True)
    assert result.status == "found"
    assert result.witness.transform_operator(op) == target


def test_witness_json_round_trip():
    w = Witness((ThetaStep(), PsiStep(AutoParams(alpha=Fraction(1, 2)))),
                Fraction(3))
    again = Witness.from_json(w.to_json())
    assert again.scalar == w.scalar
    assert again.combined() == w.combined()
