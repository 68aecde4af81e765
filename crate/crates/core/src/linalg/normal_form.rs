//! Hermite and Smith normal forms over the integers.

use num::{Integer, One, Signed, Zero};

use super::matrix::IntegerMatrix;
use crate::arith::Int;

/// Row-style Hermite normal form. Returns `(h, u)` with `h = u·m`, `u`
/// unimodular, `h` upper echelon with positive pivots and entries above each
/// pivot reduced into `[0, pivot)`. Zero rows are moved to the bottom.
pub fn hermite_normal_form(m: &IntegerMatrix) -> (IntegerMatrix, IntegerMatrix) {
    let (rows, cols) = (m.rows(), m.cols());
    let mut h = m.clone();
    let mut u = IntegerMatrix::identity(rows);
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        // gcd-combine the column below r into row r
        loop {
            let piv = (r..rows)
                .filter(|&i| !h[(i, c)].is_zero())
                .min_by(|&a, &b| h[(a, c)].abs().cmp(&h[(b, c)].abs()));
            let Some(p) = piv else { break };
            h.swap_rows(r, p);
            u.swap_rows(r, p);
            let mut done = true;
            for i in r + 1..rows {
                if h[(i, c)].is_zero() {
                    continue;
                }
                let q = h[(i, c)].div_floor(&h[(r, c)]);
                row_axpy(&mut h, i, r, &q);
                row_axpy(&mut u, i, r, &q);
                if !h[(i, c)].is_zero() {
                    done = false;
                }
            }
            if done {
                break;
            }
        }
        if h[(r, c)].is_zero() {
            continue;
        }
        if h[(r, c)].is_negative() {
            row_negate(&mut h, r);
            row_negate(&mut u, r);
        }
        for i in 0..r {
            let q = h[(i, c)].div_floor(&h[(r, c)]);
            if !q.is_zero() {
                row_axpy(&mut h, i, r, &q);
                row_axpy(&mut u, i, r, &q);
            }
        }
        r += 1;
    }
    (h, u)
}

/// `m[dst] -= q · m[src]`
fn row_axpy(m: &mut IntegerMatrix, dst: usize, src: usize, q: &Int) {
    for j in 0..m.cols() {
        let v = &m[(dst, j)] - q * &m[(src, j)];
        m[(dst, j)] = v;
    }
}

fn col_axpy(m: &mut IntegerMatrix, dst: usize, src: usize, q: &Int) {
    for i in 0..m.rows() {
        let v = &m[(i, dst)] - q * &m[(i, src)];
        m[(i, dst)] = v;
    }
}

fn row_negate(m: &mut IntegerMatrix, r: usize) {
    for j in 0..m.cols() {
        let v = -m[(r, j)].clone();
        m[(r, j)] = v;
    }
}

/// Smith normal form. Returns `(d, u, v)` with `u·m·v = diag(d)` (padded to
/// the shape of `m`), `u`, `v` unimodular, `dᵢ | dᵢ₊₁`, zeros last.
pub fn smith_normal_form(m: &IntegerMatrix) -> (Vec<Int>, IntegerMatrix, IntegerMatrix) {
    let (rows, cols) = (m.rows(), m.cols());
    let mut a = m.clone();
    let mut u = IntegerMatrix::identity(rows);
    let mut v = IntegerMatrix::identity(cols);
    let n = rows.min(cols);
    let mut t = 0;
    while t < n {
        let mut best: Option<(usize, usize)> = None;
        for i in t..rows {
            for j in t..cols {
                if a[(i, j)].is_zero() {
                    continue;
                }
                if best.is_none_or(|(bi, bj)| a[(i, j)].abs() < a[(bi, bj)].abs()) {
                    best = Some((i, j));
                }
            }
        }
        let Some((pi, pj)) = best else { break };
        a.swap_rows(t, pi);
        u.swap_rows(t, pi);
        a.swap_cols(t, pj);
        v.swap_cols(t, pj);

        let mut clean = true;
        for i in t + 1..rows {
            let q = a[(i, t)].div_floor(&a[(t, t)]);
            row_axpy(&mut a, i, t, &q);
            row_axpy(&mut u, i, t, &q);
            clean &= a[(i, t)].is_zero();
        }
        for j in t + 1..cols {
            let q = a[(t, j)].div_floor(&a[(t, t)]);
            col_axpy(&mut a, j, t, &q);
            col_axpy(&mut v, j, t, &q);
            clean &= a[(t, j)].is_zero();
        }
        if !clean {
            continue;
        }
        // divisibility: fold an offending row into row t and retry
        let bad = (t + 1..rows)
            .find(|&i| (t + 1..cols).any(|j| !a[(i, j)].is_multiple_of(&a[(t, t)])));
        if let Some(i) = bad {
            let m1 = -Int::one();
            row_axpy(&mut a, t, i, &m1);
            row_axpy(&mut u, t, i, &m1);
            continue;
        }
        if a[(t, t)].is_negative() {
            row_negate(&mut a, t);
            row_negate(&mut u, t);
        }
        t += 1;
    }
    let d = (0..n).map(|i| a[(i, i)].clone()).collect();
    (d, u, v)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{int, ivec};

    fn is_hnf(h: &IntegerMatrix) -> bool {
        let mut last: Option<usize> = None;
        let mut seen_zero = false;
        for i in 0..h.rows() {
            let lead = (0..h.cols()).find(|&j| !h[(i, j)].is_zero());
            match lead {
                None => seen_zero = true,
                Some(c) => {
                    if seen_zero || last.is_some_and(|l| c <= l) || !h[(i, c)].is_positive() {
                        return false;
                    }
                    for k in 0..i {
                        if h[(k, c)].is_negative() || h[(k, c)] >= h[(i, c)] {
                            return false;
                        }
                    }
                    last = Some(c);
                }
            }
        }
        true
    }

    #[test]
    fn hnf_examples() {
        let id = IntegerMatrix::identity(2);
        assert_eq!(hermite_normal_form(&id), (id.clone(), id.clone()));
        let d = IntegerMatrix::from_i64(&[&[2, 0], &[0, 3]]);
        assert_eq!(hermite_normal_form(&d), (d.clone(), id.clone()));

        let m = IntegerMatrix::from_i64(&[&[6, 4], &[2, 2]]);
        let (h, u) = hermite_normal_form(&m);
        assert!(is_hnf(&h));
        assert_eq!(h.det().abs(), int(4));
        assert_eq!(u.mul(&m), h);
        assert!(u.is_unimodular());
        assert_eq!(h, IntegerMatrix::from_i64(&[&[2, 0], &[0, 2]]));
    }

    #[test]
    fn hnf_rank_deficient() {
        let m = IntegerMatrix::from_i64(&[&[2, 4, 6], &[1, 2, 3], &[0, 0, 5]]);
        let (h, u) = hermite_normal_form(&m);
        assert!(is_hnf(&h));
        assert_eq!(u.mul(&m), h);
        assert!(h.row(2).iter().all(|x| x.is_zero()));
    }

    #[test]
    fn snf_examples() {
        let (d, _, _) = smith_normal_form(&IntegerMatrix::from_i64(&[&[3]]));
        assert_eq!(d, ivec(&[3]));
        let m = IntegerMatrix::from_i64(&[&[2, 4], &[6, 8]]);
        let (d, u, v) = smith_normal_form(&m);
        assert_eq!(d, ivec(&[2, 4]));
        assert_eq!(u.mul(&m).mul(&v), IntegerMatrix::diag(&d));
        let (d, _, _) = smith_normal_form(&IntegerMatrix::zeros(2, 3));
        assert_eq!(d, ivec(&[0, 0]));
    }

    #[test]
    fn snf_needs_divisibility_fix() {
        let m = IntegerMatrix::from_i64(&[&[2, 0], &[0, 3]]);
        let (d, u, v) = smith_normal_form(&m);
        assert_eq!(d, ivec(&[1, 6]));
        assert_eq!(u.mul(&m).mul(&v), IntegerMatrix::diag(&d));
    }
}
