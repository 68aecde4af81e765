use proptest::prelude::*;

use super::*;
use crate::arith::{int, ivec, rat, Rat};
use crate::linalg::{IntegerMatrix, PolarizationType, RationalMatrix};
use crate::paving::PeriodicPaving;
use crate::paving::LatticePolytope;
use crate::pwl::interpolate;

fn ty(d: &[u64]) -> PolarizationType {
    PolarizationType::new(d.to_vec()).unwrap()
}

fn grp(d: &[u64], m: i64) -> HeisenbergGroup {
    HeisenbergGroup::new(ty(d), m).unwrap()
}

fn el(t: i64, a: &[i64], b: &[i64]) -> HeisenbergElement {
    HeisenbergElement::new(t, a, b)
}

fn root(m: usize, k: i64) -> CyclotomicInteger {
    CyclotomicInteger::root(m, k)
}

#[test]
fn group_law() {
    let g = grp(&[3], 6);
    let x = el(0, &[1], &[0]);
    let y = el(0, &[0], &[1]);
    assert_eq!(g.commutator(&x, &y).unwrap(), el(2, &[0], &[0]));
    assert_eq!(g.mul(&x, &g.inverse(&x).unwrap()).unwrap(), g.identity());
    let z = el(5, &[2], &[2]);
    assert_eq!(g.mul(&g.inverse(&z).unwrap(), &z).unwrap(), g.identity());
    assert_eq!(heis_mul(&x, &y, &ty(&[3]), 6).unwrap(), el(2, &[1], &[1]));
    assert_eq!(heis_mul(&y, &x, &ty(&[3]), 6).unwrap(), el(0, &[1], &[1]));
    assert!(matches!(HeisenbergGroup::new(ty(&[3]), 3), Err(ThetaError::BadModulus { .. })));
    assert!(matches!(HeisenbergGroup::new(ty(&[2]), 6), Err(ThetaError::BadModulus { .. })));
    assert!(matches!(g.mul(&el(0, &[1, 0], &[0]), &x), Err(ThetaError::RankMismatch { .. })));
}

#[test]
fn center_is_scalars() {
    let g = grp(&[2, 2], 4);
    let elems = g.elements();
    let central: Vec<_> = elems
        .iter()
        .filter(|x| elems.iter().all(|y| g.mul(x, y).unwrap() == g.mul(y, x).unwrap()))
        .collect();
    assert_eq!(central.len(), 4);
    assert!(central.iter().all(|x| x.a == [0, 0] && x.b == [0, 0]));
}

#[test]
fn power_map() {
    for (d, m, order) in [(vec![1u64], 2i64, 2u64), (vec![3], 6, 54), (vec![2, 2], 4, 64), (vec![1, 3], 6, 54)] {
        let rep = power_map_kernel_check(&ty(&d), m).unwrap();
        assert_eq!(rep.order, order);
        assert!(rep.kernel_is_everything && rep.homomorphism, "{d:?}");
        assert_eq!(rep.pairs_checked, order * order);
    }
}

#[test]
fn schrodinger_examples() {
    let g = grp(&[3], 6);
    let e0 = SchrodingerVector::basis(&g, &[0]);
    assert_eq!(schrodinger_action(&el(0, &[1], &[0]), &e0).unwrap(), SchrodingerVector::basis(&g, &[2]));
    for k in 0..3 {
        let ek = SchrodingerVector::basis(&g, &[k]);
        let img = schrodinger_action(&el(0, &[0], &[1]), &ek).unwrap();
        assert_eq!(img, ek.rotate(2 * k));
    }
    // S is a homomorphism for the group law
    let elems = g.elements();
    let v = SchrodingerVector::from_coeffs(&g, vec![root(6, 0), root(6, 1).add(&root(6, 4)), root(6, 3)]).unwrap();
    for x in elems.iter().step_by(5) {
        for y in elems.iter().step_by(7) {
            let lhs = schrodinger_action(&g.mul(x, y).unwrap(), &v).unwrap();
            let rhs = schrodinger_action(x, &schrodinger_action(y, &v).unwrap()).unwrap();
            assert_eq!(lhs, rhs);
        }
    }
}

#[test]
fn eigenspaces() {
    let spaces = kw_decompose(&ty(&[3]), 6).unwrap();
    assert_eq!(spaces.len(), 3);
    let g = grp(&[3], 6);
    for sp in &spaces {
        assert_eq!(sp.basis, vec![SchrodingerVector::basis(&g, &sp.character)]);
    }
    assert_eq!(kw_decompose(&ty(&[2, 2]), 4).unwrap().len(), 4);
    assert_eq!(kw_decompose(&ty(&[1]), 2).unwrap().len(), 1);
    for (d, m) in [(vec![1u64], 2i64), (vec![3], 6), (vec![2, 2], 4), (vec![1, 3], 6), (vec![2], 4)] {
        assert!(kw_permutation_check(&ty(&d), m).unwrap(), "{d:?}");
        assert!(heisenberg_relation_check(&ty(&d), m).unwrap(), "{d:?}");
    }
}

#[test]
fn balanced_examples() {
    let one = balanced_sections(&ty(&[1]), 2, &[0], &[(vec![0], el(0, &[0], &[0]))]).unwrap();
    assert_eq!(one, SchrodingerVector::basis(&grp(&[1], 2), &[0]));
    let g = grp(&[3], 6);
    let e0 = SchrodingerVector::basis(&g, &[0]);
    let trivial: Vec<_> = (0..3).map(|a| (vec![a], el(0, &[-a], &[0]))).collect();
    let s = balanced_sections(&ty(&[3]), 6, &[0], &trivial).unwrap();
    assert_eq!(s, balanced_sum(&e0, &trivial).unwrap());
    assert!(s.coeffs().iter().all(|c| *c == CyclotomicInteger::one(6)));
    let scaled: Vec<_> = (0..3).map(|a| (vec![a], el(a, &[-a], &[0]))).collect();
    let s = balanced_sections(&ty(&[3]), 6, &[0], &scaled).unwrap();
    assert_eq!(s.coeffs(), &[root(6, 0), root(6, 1), root(6, 2)]);

    let mut bad = trivial.clone();
    bad[1].1 = el(0, &[1], &[0]);
    assert_eq!(balanced_sum(&e0, &bad), Err(ThetaError::BadLift(vec![1])));
    assert_eq!(balanced_sum(&e0, &trivial[..2]), Err(ThetaError::BadLift(vec![2])));
    let mixed = e0.add(&SchrodingerVector::basis(&g, &[1]));
    assert!(matches!(balanced_sum(&mixed, &trivial), Err(ThetaError::InconsistentData(_))));
}

#[test]
fn balanced_counts() {
    assert_eq!(enumerate_balanced_set(&ty(&[3]), 6, 8).unwrap().len(), 36);
    assert_eq!(enumerate_balanced_set(&ty(&[2]), 4, 8).unwrap().len(), 4);
    assert_eq!(enumerate_balanced_set(&ty(&[1]), 2, 8).unwrap().len(), 1);
    let all = enumerate_balanced_set(&ty(&[3]), 6, 8).unwrap();
    assert!(all.iter().all(|s| s.coeffs()[0] == CyclotomicInteger::one(6)));
    assert!(matches!(enumerate_balanced_set(&ty(&[9]), 18, 8), Err(ThetaError::TooLarge { .. })));
}

#[test]
fn vector_json() {
    let g = grp(&[3], 6);
    let v = SchrodingerVector::from_coeffs(&g, vec![root(6, 0), CyclotomicInteger::zero(6), root(6, 1).neg()]).unwrap();
    let s = serde_json::to_string(&v).unwrap();
    let back: SchrodingerVector = serde_json::from_str(&s).unwrap();
    assert_eq!(back, v);
    let x: HeisenbergElement = serde_json::from_str("[1, [2], [0]]").unwrap();
    assert_eq!(x, el(1, &[2], &[0]));
}

fn principal() -> DegenerationData {
    DegenerationData {
        quadratic: RationalMatrix::from_ratios(&[&[(1, 2)]]),
        phi_check: IntegerMatrix::identity(1),
        polarization: PolarizationType::principal(1),
        twist_skew: IntegerMatrix::zeros(1, 1),
        twist_symmetric: IntegerMatrix::zeros(1, 1),
    }
}

fn twisted() -> DegenerationData {
    let skew = IntegerMatrix::from_i64(&[&[0, 1], &[-1, 0]]);
    DegenerationData {
        quadratic: RationalMatrix::from_ratios(&[&[(1, 2), (0, 1)], &[(0, 1), (1, 2)]]),
        phi_check: IntegerMatrix::identity(2),
        polarization: PolarizationType::principal(2),
        twist_symmetric: default_twist_symmetric(&skew),
        twist_skew: skew,
    }
}

#[test]
fn degeneration_examples() {
    let e = degen_exponents(&principal(), &ivec(&[1]), &ivec(&[1])).unwrap();
    assert_eq!((e.a_exp, e.b_exp), (rat(1, 2), rat(1, 1)));
    let mut bad = principal();
    bad.phi_check = IntegerMatrix::from_i64(&[&[2]]);
    assert!(matches!(degen_exponents(&bad, &ivec(&[1]), &ivec(&[1])), Err(ThetaError::InconsistentData(_))));
    for l in -3..=3 {
        for m in -3..=3 {
            assert!(quadratic_relation_holds(&principal(), &ivec(&[l]), &ivec(&[m])));
        }
    }
}

#[test]
fn twist_examples() {
    let d = twisted();
    assert_eq!(d.twist_symmetric, IntegerMatrix::from_i64(&[&[0, 1], &[1, 0]]));
    let t = twist_data(&d, &ivec(&[1, 0]), &ivec(&[0, 1])).unwrap();
    assert_eq!(t.b_twist, rat(1, 1));
    assert_eq!(twist_data(&d, &ivec(&[1, 1]), &ivec(&[0, 0])).unwrap().a_twist, rat(1, 1));
    assert_eq!(twist_data(&d, &ivec(&[1, 0]), &ivec(&[0, 0])).unwrap().a_twist, rat(0, 1));
    for l in [[1, 0], [0, 1], [1, 1], [2, -1]] {
        for m in [[1, 0], [0, 1], [-1, 3]] {
            assert!(twist_relation_holds(&d, &ivec(&l), &ivec(&m)));
        }
    }
    let mut bad = d.clone();
    bad.twist_symmetric = IntegerMatrix::zeros(2, 2);
    assert!(matches!(twist_data(&bad, &ivec(&[1, 0]), &ivec(&[0, 1])), Err(ThetaError::BadTwistPair(_))));
    assert_eq!(mod_two(&rat(-1, 2)), rat(3, 2));
}

fn hesse_phi() -> crate::pwl::PwAffineFunction {
    let cells = vec![LatticePolytope::new(vec![ivec(&[0]), ivec(&[1])])];
    let paving = PeriodicPaving::new(IntegerMatrix::identity(1), cells, 4).unwrap();
    interpolate(&paving, 1, |v| Some(vec![rat(1, 2) * Rat::from_integer(&v[0] * &v[0])])).unwrap()
}

#[test]
fn hesse_profile() {
    let g = grp(&[3], 6);
    let e0 = SchrodingerVector::basis(&g, &[0]);
    let lifts: Vec<_> = (0..3).map(|a| (vec![a], el(a, &[-a], &[0]))).collect();
    let s = balanced_sum(&e0, &lifts).unwrap();
    let phi_map = IntegerMatrix::from_i64(&[&[3]]);
    let prof = section_valuation_profile(&s, &hesse_phi(), &phi_map, 4).unwrap();
    let vals: Vec<Rat> = prof.iter().map(|p| p.exponent.clone()).collect();
    assert_eq!(vals, vec![rat(0, 1), rat(1, 2), rat(1, 2)]);
    assert_eq!(prof[1].class, vec![int(1)]);
    assert_eq!(
        section_valuation_profile(&e0, &hesse_phi(), &phi_map, 4),
        Err(ThetaError::EmptyComponent(vec![1]))
    );
    // every balanced section has the same profile
    for t in enumerate_balanced_set(&ty(&[3]), 6, 8).unwrap() {
        assert_eq!(section_valuation_profile(&t, &hesse_phi(), &phi_map, 4).unwrap(), prof);
    }
}

fn element(d: &'static [u64], m: i64) -> impl Strategy<Value = HeisenbergElement> {
    let g = d.len();
    (0..m, prop::collection::vec(0i64..12, g), prop::collection::vec(0i64..12, g))
        .prop_map(|(t, a, b)| HeisenbergElement { t, a, b })
}

proptest! {
    #[test]
    fn associative(x in element(&[2, 4], 8), y in element(&[2, 4], 8), z in element(&[2, 4], 8)) {
        let g = grp(&[2, 4], 8);
        let l = g.mul(&g.mul(&x, &y).unwrap(), &z).unwrap();
        let r = g.mul(&x, &g.mul(&y, &z).unwrap()).unwrap();
        prop_assert_eq!(l, r);
        let xi = g.inverse(&x).unwrap();
        prop_assert_eq!(g.mul(&x, &xi).unwrap(), g.identity());
    }

    #[test]
    fn commutators_are_pairings(x in element(&[1, 3], 6), y in element(&[1, 3], 6)) {
        let g = grp(&[1, 3], 6);
        let c = g.commutator(&x, &y).unwrap();
        let expect = (g.pairing(&y.b, &x.a) - g.pairing(&x.b, &y.a)).rem_euclid(6);
        prop_assert_eq!(c, el(expect, &[0, 0], &[0, 0]));
    }
}
