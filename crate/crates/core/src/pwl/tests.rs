use super::*;
use crate::arith::{int, ivec, rat};

fn poly(v: &[&[i64]]) -> LatticePolytope {
    LatticePolytope::new(v.iter().map(|p| ivec(p)).collect())
}

fn unit_intervals() -> PeriodicPaving {
    PeriodicPaving::new(IntegerMatrix::identity(1), vec![poly(&[&[0], &[1]])], 4).unwrap()
}

fn half_square_1d() -> PwAffineFunction {
    interpolate(&unit_intervals(), 1, |v| Some(vec![rat(1, 2) * (&v[0] * &v[0])])).unwrap()
}

fn a2() -> QuadraticForm {
    QuadraticForm::from_i64(&[&[2, 1], &[1, 2]])
}

fn squared(v: &IVec) -> Rat {
    Rat::from_integer(&v[0] * &v[0])
}

#[test]
fn one_dimensional_bending() {
    let f = half_square_1d();
    let b = bending_parameters(&f).unwrap();
    assert_eq!(b.len(), 1);
    assert_eq!(b[0].1, vec![rat(1, 1)]);
    assert_eq!(f.value(&[rat(1, 2)]), rat(1, 4));
    assert_eq!(f.value(&[rat(7, 2)]), rat(25, 4));
    assert_eq!(f.bilinear(0), &RationalMatrix::from_i64(&[&[1]]));
}

#[test]
fn a2_wall_bending() {
    let f = sigma_section(&a2(), &IntegerMatrix::identity(2), 4).unwrap();
    let walls = bending_parameters(&f).unwrap();
    assert_eq!(walls.len(), 3);
    let key = poly(&[&[1, 0], &[0, 1]]).canonical_mod(f.paving().lattice()).0;
    let (_, p) = walls
        .iter()
        .find(|(w, _)| w.face.canonical_mod(f.paving().lattice()).0 == key)
        .unwrap();
    assert_eq!(p, &vec![rat(1, 1)]);
    for (_, p) in &walls {
        assert!(p[0].is_positive());
    }
    // pieces x+y on the lower triangle, 2x+2y−1 on the upper one
    let lower = f.piece_at(&f.paving().locate(&[rat(1, 4), rat(1, 4)]).unwrap());
    let upper = f.piece_at(&f.paving().locate(&[rat(3, 4), rat(3, 4)]).unwrap());
    assert_eq!(lower.linear, RationalMatrix::from_i64(&[&[1, 1]]));
    assert_eq!(lower.constant, vec![rat(0, 1)]);
    assert_eq!(upper.linear, RationalMatrix::from_i64(&[&[2, 2]]));
    assert_eq!(upper.constant, vec![rat(-1, 1)]);
}

#[test]
fn global_affine_has_no_bending() {
    let f = interpolate(&unit_intervals(), 1, |v| Some(vec![Rat::from_integer(&v[0] * 3 + 1)]))
        .unwrap();
    assert!(bending_parameters(&f).unwrap().iter().all(|(_, b)| b[0].is_zero()));
    assert_eq!(affine_regions(&f), Err(PwlError::UnboundedRegion));
}

#[test]
fn p_convexity() {
    let f = half_square_1d();
    let n = ToricMonoid::natural(1);
    assert!(is_p_convex(&f, &n, true).unwrap());
    assert!(!is_p_convex(&f.neg(), &n, false).unwrap());
    let mixed = interpolate(&unit_intervals(), 2, |v| {
        let h = rat(1, 2) * (&v[0] * &v[0]);
        Some(vec![h.clone(), -h])
    })
    .unwrap();
    let b = bending_parameters(&mixed).unwrap();
    assert_eq!(b[0].1, vec![rat(1, 1), rat(-1, 1)]);
    assert!(!is_p_convex(&mixed, &ToricMonoid::natural(2), false).unwrap());
    assert!(matches!(is_p_convex(&mixed, &n, false), Err(PwlError::RankMismatch { .. })));
}

#[test]
fn triangulation_interpolation() {
    let values: BTreeMap<IVec, Rat> =
        (-2..=3).map(|x| (ivec(&[x]), rat(x * x, 2))).collect();
    let g = interpolate_on_triangulation(&values, &unit_intervals()).unwrap();
    assert_eq!(g.value(&[rat(1, 2)]), rat(1, 4));

    let consts: BTreeMap<IVec, Rat> = (-2..=3).map(|x| (ivec(&[x]), rat(5, 1))).collect();
    let c = interpolate_on_triangulation(&consts, &unit_intervals()).unwrap();
    assert!(bending_parameters(&c).unwrap().iter().all(|(_, b)| b[0].is_zero()));

    let coarse =
        PeriodicPaving::new(IntegerMatrix::from_i64(&[&[2]]), vec![poly(&[&[0], &[2]])], 4).unwrap();
    let sq: BTreeMap<IVec, Rat> = (-2..=4).map(|x| (ivec(&[x]), rat(x * x, 1))).collect();
    let g = interpolate_on_triangulation(&sq, &coarse).unwrap();
    assert_eq!(g.value(&[rat(1, 1)]), (rat(0, 1) + rat(4, 1)) / rat(2, 1));

    let missing: BTreeMap<IVec, Rat> = [(ivec(&[0]), rat(0, 1))].into_iter().collect();
    assert!(matches!(
        interpolate_on_triangulation(&missing, &unit_intervals()),
        Err(PwlError::MissingVertexValue(_))
    ));
    let squares = PeriodicPaving::new(
        IntegerMatrix::identity(2),
        vec![poly(&[&[0, 0], &[1, 0], &[0, 1], &[1, 1]])],
        4,
    )
    .unwrap();
    assert_eq!(
        interpolate_on_triangulation(&BTreeMap::new(), &squares),
        Err(PwlError::NotSimplicial)
    );
}

#[test]
fn cone_of_triangulations() {
    let psi: BTreeMap<IVec, Rat> = (-6..=6).map(|x| (ivec(&[x]), squared(&ivec(&[x])))).collect();
    let id = IntegerMatrix::identity(1);
    assert!(cone_cy_membership(&psi, &unit_intervals(), &id).unwrap());
    let coarse =
        PeriodicPaving::new(IntegerMatrix::from_i64(&[&[2]]), vec![poly(&[&[0], &[2]])], 4).unwrap();
    assert!(!cone_cy_membership(&psi, &coarse, &id).unwrap());
    let neg: BTreeMap<IVec, Rat> = psi.iter().map(|(k, v)| (k.clone(), -v)).collect();
    assert!(!cone_cy_membership(&neg, &unit_intervals(), &id).unwrap());
    let cubic: BTreeMap<IVec, Rat> =
        (-6..=6).map(|x| (ivec(&[x]), rat(x * x * x, 1))).collect();
    assert_eq!(
        cone_cy_membership(&cubic, &unit_intervals(), &id),
        Err(PwlError::NotQuasiperiodic)
    );
}

#[test]
fn sigma_examples() {
    let one = QuadraticForm::from_i64(&[&[1]]);
    let s = sigma_section(&one, &IntegerMatrix::identity(1), 4).unwrap();
    assert_eq!(s.value(&[rat(1, 2)]), rat(1, 4));
    assert_eq!(s.bilinear(0), one.matrix());

    let s2 = sigma_section(&a2(), &IntegerMatrix::identity(2), 4).unwrap();
    let s8 = sigma_section(&a2().scale(&rat(4, 1)), &IntegerMatrix::identity(2), 4).unwrap();
    assert_eq!(s8, s2.scale(&rat(4, 1)));
    assert_eq!(s2.value(&[rat(1, 2), rat(1, 2)]), rat(1, 1));
    assert_eq!(s2.bilinear(0), a2().matrix());
    assert_eq!(affine_regions(&s2).unwrap(), s2.paving().clone());

    let not_pd = QuadraticForm::from_i64(&[&[1, 2], &[2, 1]]);
    assert_eq!(
        sigma_section(&not_pd, &IntegerMatrix::identity(2), 4),
        Err(PwlError::Delaunay(DelaunayError::NotPositiveDefinite))
    );
}

#[test]
fn sigma_on_coarser_period() {
    let p = IntegerMatrix::from_i64(&[&[2, 0], &[1, 1]]);
    let s = sigma_section(&a2(), &p, 4).unwrap();
    assert_eq!(s.paving().cells().len(), 4);
    assert_eq!(s.bilinear(0), a2().matrix());
    for x in -3..=3 {
        for y in -3..=3 {
            let v = ivec(&[x, y]);
            assert_eq!(s.value(&qvec(&v)), a2().eval_i(&v) * rat(1, 2));
        }
    }
    let regions = affine_regions(&s).unwrap();
    assert_eq!(regions, s.paving().clone());
}

#[test]
fn squares_merge_triangles() {
    // ½(x² + y²) is affine on unit squares, so a triangulation of them merges back
    let tri = PeriodicPaving::new(
        IntegerMatrix::identity(2),
        vec![poly(&[&[0, 0], &[1, 0], &[0, 1]]), poly(&[&[1, 0], &[0, 1], &[1, 1]])],
        4,
    )
    .unwrap();
    let f = interpolate(&tri, 1, |v| {
        Some(vec![rat(1, 2) * Rat::from_integer(&v[0] * &v[0] + &v[1] * &v[1])])
    })
    .unwrap();
    let merged = affine_regions(&f).unwrap();
    assert_eq!(merged.cells(), &[poly(&[&[0, 0], &[1, 0], &[0, 1], &[1, 1]])]);
}

#[test]
fn legendre_examples() {
    let f = half_square_1d();
    let t = legendre_transform(&f, 3).unwrap();
    assert_eq!(t[&ivec(&[0])], rat(0, 1));
    assert_eq!(t[&ivec(&[-1])], rat(1, 2));
    assert_eq!(t[&ivec(&[1])], &t[&ivec(&[0])] + rat(1, 2));
    assert_eq!(legendre_transform(&f.neg(), 1), Err(PwlError::NotConvex));
    let flat = interpolate(&unit_intervals(), 1, |_| Some(vec![rat(0, 1)])).unwrap();
    assert_eq!(legendre_transform(&flat, 1), Err(PwlError::Unbounded));
}

#[test]
fn legendre_quasiperiodicity_a2() {
    let q = a2();
    let f = sigma_section(&q, &IntegerMatrix::identity(2), 4).unwrap();
    for mx in -2..=2 {
        for my in -2..=2 {
            let mu = ivec(&[mx, my]);
            let (base, _) = legendre_at(&f, &mu).unwrap();
            for lx in -1..=1 {
                for ly in -1..=1 {
                    let lam = ivec(&[lx, ly]);
                    let shifted: IVec = q
                        .matrix()
                        .mul_vec(&qvec(&lam))
                        .iter()
                        .zip(&mu)
                        .map(|(a, m)| a.to_integer() + m)
                        .collect();
                    let (lhs, _) = legendre_at(&f, &shifted).unwrap();
                    let rhs = &base
                        + arith::dot_i(&lam, &mu)
                        + &f.translation_constant(&lam)[0];
                    assert_eq!(lhs, rhs, "μ={mu:?} λ={lam:?}");
                }
            }
        }
    }
}

#[test]
fn legendre_matches_brute_force() {
    let f = sigma_section(&a2(), &IntegerMatrix::identity(2), 4).unwrap();
    for mx in -3..=3 {
        for my in -3..=3 {
            let mu = ivec(&[mx, my]);
            let mut best: Option<Rat> = None;
            for x in -8..=8 {
                for y in -8..=8 {
                    let v = ivec(&[x, y]);
                    let val = f.value(&qvec(&v)) + arith::dot_i(&v, &mu);
                    if best.as_ref().is_none_or(|b| val < *b) {
                        best = Some(val);
                    }
                }
            }
            assert_eq!(legendre_at(&f, &mu).unwrap().0, -best.unwrap());
        }
    }
}

#[test]
fn addition_on_common_paving() {
    let f = half_square_1d();
    let g = f.add(&f).unwrap();
    assert_eq!(g, f.scale(&rat(2, 1)));
    let b: Vec<Rat> = bending_parameters(&g).unwrap().into_iter().map(|(_, b)| b[0].clone()).collect();
    assert_eq!(b, vec![rat(2, 1)]);
    assert_eq!(g.value(&[rat(5, 2)]), rat(13, 2));
}

#[test]
fn transversals() {
    for n in [ivec(&[1, 0]), ivec(&[2, 3]), ivec(&[0, 5, 7]), ivec(&[-3, 4])] {
        let w = transversal(&n);
        assert_eq!(arith::dot_i(&n, &w), int(1));
    }
}

#[test]
fn json_roundtrip() {
    let f = sigma_section(&a2(), &IntegerMatrix::identity(2), 4).unwrap();
    let s = serde_json::to_string(&f).unwrap();
    let g: PwAffineFunction = serde_json::from_str(&s).unwrap();
    assert_eq!(f, g);
}
