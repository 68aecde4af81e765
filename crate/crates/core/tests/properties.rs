use num::{Integer, Signed, Zero};
use num_complex::Complex64;
use proptest::prelude::*;
use tropav_core::arith::{IVec, Int, Rat};
use tropav_core::delaunay::{delaunay_subdivision, voronoi_cone_contains, QuadraticForm};
use tropav_core::linalg::{
    hermite_normal_form, polarization_type, smith_normal_form, symplectic_normal_form, IntegerMatrix,
    PolarizationType, RationalMatrix,
};
use tropav_core::monoid::{twisted_add, HomogenizedFunction, TwistedMonoidElement};
use tropav_core::pwl::{is_convex, quasiperiodic_decompose, sigma_section};
use tropav_core::siegel::{cayley_transform, gamma_action, CMatrix, RMatrix, SiegelPoint};
use tropav_core::theta::CyclotomicInteger;

fn int(x: i64) -> Int {
    Int::from(x)
}

fn matrix(rows: usize, cols: usize, entries: &[i64]) -> IntegerMatrix {
    IntegerMatrix::from_fn(rows, cols, |i, j| int(entries[i * cols + j]))
}

fn arb_matrix(rows: usize, cols: usize, bound: i64) -> impl Strategy<Value = IntegerMatrix> {
    prop::collection::vec(-bound..=bound, rows * cols).prop_map(move |e| matrix(rows, cols, &e))
}

/// Unimodular matrices as products of elementary row operations.
fn arb_unimodular(n: usize) -> impl Strategy<Value = IntegerMatrix> {
    prop::collection::vec((0..n, 0..n, -2i64..=2, any::<bool>()), 0..8).prop_map(move |ops| {
        let mut u = IntegerMatrix::identity(n);
        for (i, j, c, swap) in ops {
            if swap {
                u.swap_rows(i, j);
            } else if i != j {
                for k in 0..n {
                    let add = &u[(j, k)] * int(c);
                    u[(i, k)] += add;
                }
            }
        }
        u
    })
}

fn arb_chain(len: usize) -> impl Strategy<Value = Vec<u64>> {
    prop::collection::vec(1u64..=3, len).prop_map(|steps| {
        let mut acc = 1;
        steps.into_iter().map(|s| {
            acc *= s;
            acc
        }).collect()
    })
}

/// Positive definite integral 2×2 forms with a small reduced shape.
fn arb_form() -> impl Strategy<Value = QuadraticForm> {
    (1i64..=6, -3i64..=3, 1i64..=6)
        .prop_filter("positive definite", |(a, b, c)| a * c > b * b)
        .prop_map(|(a, b, c)| QuadraticForm::new(RationalMatrix::from_i64(&[&[a, b], &[b, c]])).unwrap())
}

fn arb_point() -> impl Strategy<Value = SiegelPoint> {
    (prop::collection::vec(-1.0f64..1.0, 4), prop::collection::vec(-1.0f64..1.0, 3)).prop_map(|(a, x)| {
        let a = RMatrix::from_row_slice(2, 2, &a);
        let y = &a * a.transpose() + RMatrix::identity(2, 2) * 2.0;
        let x = RMatrix::from_row_slice(2, 2, &[x[0], x[1], x[1], x[2]]);
        SiegelPoint::from_parts(&x, &y, 1e-12).unwrap()
    })
}

/// Words in the generators of `Sp(4, ℤ)`: translations, Levi elements and `J`.
fn arb_symplectic() -> impl Strategy<Value = IntegerMatrix> {
    let gen = (0u8..3, -1i64..=1, -1i64..=1, -1i64..=1);
    prop::collection::vec(gen, 1..4).prop_map(|word| {
        let id = IntegerMatrix::identity(2);
        let zero = IntegerMatrix::zeros(2, 2);
        let mut acc = IntegerMatrix::identity(4);
        for (kind, p, q, r) in word {
            let g = match kind {
                0 => IntegerMatrix::blocks(&id, &matrix(2, 2, &[p, q, q, r]), &zero, &id),
                1 => {
                    let u = matrix(2, 2, &[1, p, 0, 1]);
                    IntegerMatrix::blocks(&u.inverse_unimodular().unwrap().transpose(), &zero, &zero, &u)
                }
                _ => IntegerMatrix::blocks(&zero, &id, &id.neg(), &zero),
            };
            acc = acc.mul(&g);
        }
        acc
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn hermite_form_is_reduced(m in arb_matrix(3, 3, 6)) {
        let (h, u) = hermite_normal_form(&m);
        prop_assert!(u.is_unimodular());
        prop_assert_eq!(u.mul(&m), h.clone());
        let mut last_col: Option<usize> = None;
        for i in 0..h.rows() {
            let Some(p) = (0..h.cols()).find(|&j| !h[(i, j)].is_zero()) else { continue };
            prop_assert!(last_col.is_none_or(|c| p > c));
            prop_assert!(h[(i, p)].is_positive());
            for k in 0..i {
                prop_assert!(!h[(k, p)].is_negative() && h[(k, p)] < h[(i, p)]);
            }
            last_col = Some(p);
        }
        prop_assert_eq!(hermite_normal_form(&h).0, h);
    }

    #[test]
    fn smith_form_divides(m in arb_matrix(3, 2, 8)) {
        let (d, u, v) = smith_normal_form(&m);
        prop_assert!(u.is_unimodular() && v.is_unimodular());
        let s = u.mul(&m).mul(&v);
        for i in 0..s.rows() {
            for j in 0..s.cols() {
                let want = if i == j && i < d.len() { d[i].clone() } else { Int::zero() };
                prop_assert_eq!(&s[(i, j)], &want);
            }
        }
        for w in d.windows(2) {
            prop_assert!(w[0].is_zero() && w[1].is_zero() || !w[0].is_zero() && w[1].is_multiple_of(&w[0]));
        }
    }

    #[test]
    fn symplectic_basis_recovers_type(diag in arb_chain(2), b in arb_unimodular(4)) {
        let ty = PolarizationType::new(diag).unwrap();
        let binv = b.inverse_unimodular().unwrap();
        let e = binv.mul(&ty.standard_form()).mul(&binv.transpose());
        let dec = symplectic_normal_form(&e).unwrap();
        prop_assert_eq!(&dec.ptype, &ty);
        prop_assert!(dec.basis_change.is_unimodular());
        prop_assert_eq!(dec.basis_change.mul(&e).mul(&dec.basis_change.transpose()), ty.standard_form());
    }

    #[test]
    fn polarization_type_is_invariant(diag in arb_chain(3), u in arb_unimodular(3), v in arb_unimodular(3)) {
        let ty = PolarizationType::new(diag).unwrap();
        let phi = u.mul(&ty.matrix()).mul(&v);
        prop_assert_eq!(polarization_type(&phi).unwrap(), ty);
    }

    #[test]
    fn delaunay_form_in_own_cone(q in arb_form()) {
        let basis = IntegerMatrix::identity(2);
        let paving = delaunay_subdivision(&q, &basis, 6).unwrap();
        prop_assert!(voronoi_cone_contains(&paving, &q).unwrap());
        let sigma = sigma_section(&q, &basis, 6).unwrap();
        prop_assert!(is_convex(&sigma).unwrap());
        // σ is positively homogeneous
        let two = Rat::from_integer(int(2));
        let doubled = QuadraticForm::new(q.matrix().scale(&two)).unwrap();
        prop_assert_eq!(sigma_section(&doubled, &basis, 6).unwrap(), sigma.scale(&two));
    }

    #[test]
    fn quasiperiodic_rank_one(n in 1i64..=4, b in -4i64..=4, l in -4i64..=4, per in prop::collection::vec(-6i64..=6, 4)) {
        let value = |x: i64| Rat::new(int(b * x * x + l * x), int(2)) + Rat::from_integer(int(per[x.rem_euclid(n) as usize]));
        let samples = (-8..=8).map(|x| (vec![int(x)], value(x))).collect();
        let dec = quasiperiodic_decompose(&samples, &matrix(1, 1, &[n])).unwrap();
        prop_assert_eq!(&dec.bilinear, &RationalMatrix::from_i64(&[&[b]]));
        for x in -20..=20 {
            prop_assert_eq!(dec.eval(&[int(x)]), value(x));
        }
    }

    #[test]
    fn cyclotomic_ring_laws(m in prop::sample::select(vec![2usize, 3, 4, 6, 12]),
                            a in prop::collection::vec(-3i64..=3, 12),
                            b in prop::collection::vec(-3i64..=3, 12),
                            c in prop::collection::vec(-3i64..=3, 12)) {
        let (a, b, c) = (
            CyclotomicInteger::from_coeffs(m, &a),
            CyclotomicInteger::from_coeffs(m, &b),
            CyclotomicInteger::from_coeffs(m, &c),
        );
        prop_assert_eq!(a.mul(&b.add(&c)), a.mul(&b).add(&a.mul(&c)));
        prop_assert_eq!(a.mul(&b), b.mul(&a));
        prop_assert_eq!(a.rotate(m as i64), a.clone());
        let back = CyclotomicInteger::from_exponents(m, &a.exponents());
        prop_assert_eq!(back, a);
    }

    #[test]
    fn gamma_action_is_an_action(g in arb_symplectic(), h in arb_symplectic(), tau in arb_point()) {
        let d = PolarizationType::principal(2);
        let tol = 1e-10;
        let (Ok(inner), Ok(both)) = (gamma_action(&h, &tau, &d, tol), gamma_action(&g.mul(&h), &tau, &d, tol)) else {
            return Ok(());
        };
        let Ok(outer) = gamma_action(&g, &inner, &d, tol) else { return Ok(()) };
        let scale = both.tau().norm().max(1.0);
        prop_assert!((outer.tau() - both.tau()).norm() <= 1e-8 * scale);
    }

    #[test]
    fn cayley_lands_in_unit_ball(tau in arb_point()) {
        let z: CMatrix = cayley_transform(&tau, 1e-10).unwrap();
        let norm = z.clone().singular_values().iter().cloned().fold(0.0, f64::max);
        prop_assert!(norm < 1.0);
        prop_assert!((z.transpose() - &z).iter().all(|w: &Complex64| w.norm() < 1e-12));
    }

    #[test]
    fn twisted_addition_commutes(d1 in 0i64..=3, d2 in 0i64..=3, x1 in -6i64..=6, x2 in -6i64..=6, p1 in 0i64..=2, p2 in 0i64..=2) {
        let q = QuadraticForm::new(RationalMatrix::from_i64(&[&[1]])).unwrap();
        let phi = HomogenizedFunction::new(sigma_section(&q, &matrix(1, 1, &[3]), 4).unwrap());
        let el = |d: i64, x: i64, p: i64| -> TwistedMonoidElement {
            let x: IVec = vec![if d == 0 { Int::zero() } else { int(x) }];
            TwistedMonoidElement { degree: int(d), point: x, payload: vec![Rat::from_integer(int(p))] }
        };
        let (a, b) = (el(d1, x1, p1), el(d2, x2, p2));
        let ab = twisted_add(&a, &b, &phi).unwrap();
        prop_assert_eq!(&ab, &twisted_add(&b, &a, &phi).unwrap());
        prop_assert!(ab.payload[0] >= &a.payload[0] + &b.payload[0]);
        prop_assert_eq!(ab.degree, int(d1 + d2));
    }
}
