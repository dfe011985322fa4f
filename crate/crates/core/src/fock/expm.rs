//! Dense complex matrix exponential by scaling and squaring with Padé
//! approximants of degree 3 to 13 (Higham 2005).

use ndarray::{Array2, Zip};
use num_complex::Complex64 as C64;

const THETA: [(usize, f64); 4] = [
    (3, 1.495585217958292e-2),
    (5, 2.539398330063230e-1),
    (7, 9.504178996162932e-1),
    (9, 2.097847961257068e0),
];
const THETA_13: f64 = 5.371920351148152;

const PADE_3: [f64; 4] = [120.0, 60.0, 12.0, 1.0];
const PADE_5: [f64; 6] = [30240.0, 15120.0, 3360.0, 420.0, 30.0, 1.0];
const PADE_7: [f64; 8] = [
    17297280.0, 8648640.0, 1995840.0, 277200.0, 25200.0, 1512.0, 56.0, 1.0,
];
const PADE_9: [f64; 10] = [
    17643225600.0,
    8821612800.0,
    2075673600.0,
    302702400.0,
    30270240.0,
    2162160.0,
    110880.0,
    3960.0,
    90.0,
    1.0,
];
const PADE_13: [f64; 14] = [
    64764752532480000.0,
    32382376266240000.0,
    7771770303897600.0,
    1187353796428800.0,
    129060195264000.0,
    10559470521600.0,
    670442572800.0,
    33522128640.0,
    1323241920.0,
    40840800.0,
    960960.0,
    16380.0,
    182.0,
    1.0,
];

/// `exp(A)` for a square complex matrix.
///
/// # Panics
/// Panics if `a` is not square.
pub fn expm(a: &Array2<C64>) -> Array2<C64> {
    let n = a.nrows();
    assert_eq!(n, a.ncols(), "expm needs a square matrix");
    if n == 0 {
        return Array2::zeros((0, 0));
    }
    let norm = one_norm(a);
    for (degree, theta) in THETA {
        if norm <= theta {
            let coeffs: &[f64] = match degree {
                3 => &PADE_3,
                5 => &PADE_5,
                7 => &PADE_7,
                _ => &PADE_9,
            };
            let (u, v) = pade_low(a, coeffs);
            return solve_pade(u, v);
        }
    }
    let squarings = if norm > THETA_13 {
        (norm / THETA_13).log2().ceil() as i32
    } else {
        0
    };
    let scaled = a.mapv(|x| x * 2f64.powi(-squarings));
    let (u, v) = pade_13(&scaled);
    let mut result = solve_pade(u, v);
    for _ in 0..squarings {
        result = result.dot(&result);
    }
    result
}

fn one_norm(a: &Array2<C64>) -> f64 {
    a.columns()
        .into_iter()
        .map(|col| col.iter().map(|x| x.norm()).sum::<f64>())
        .fold(0.0, f64::max)
}

fn identity(n: usize) -> Array2<C64> {
    Array2::from_diag_elem(n, C64::new(1.0, 0.0))
}

fn scaled_sum(terms: &[(f64, &Array2<C64>)]) -> Array2<C64> {
    let mut out = Array2::zeros(terms[0].1.raw_dim());
    for &(c, m) in terms {
        out.scaled_add(C64::new(c, 0.0), m);
    }
    out
}

fn pade_low(a: &Array2<C64>, b: &[f64]) -> (Array2<C64>, Array2<C64>) {
    let n = a.nrows();
    let eye = identity(n);
    let a2 = a.dot(a);
    // powers[k] = A^{2k}
    let mut powers = vec![eye, a2.clone()];
    while powers.len() * 2 < b.len() {
        let next = powers.last().unwrap().dot(&a2);
        powers.push(next);
    }
    let mut odd = Array2::zeros((n, n));
    let mut even = Array2::zeros((n, n));
    for (k, p) in powers.iter().enumerate() {
        if 2 * k + 1 < b.len() {
            odd.scaled_add(C64::new(b[2 * k + 1], 0.0), p);
        }
        even.scaled_add(C64::new(b[2 * k], 0.0), p);
    }
    (a.dot(&odd), even)
}

fn pade_13(a: &Array2<C64>) -> (Array2<C64>, Array2<C64>) {
    let b = &PADE_13;
    let eye = identity(a.nrows());
    let a2 = a.dot(a);
    let a4 = a2.dot(&a2);
    let a6 = a4.dot(&a2);
    let inner_u = scaled_sum(&[(b[13], &a6), (b[11], &a4), (b[9], &a2)]);
    let u = a6.dot(&inner_u) + scaled_sum(&[(b[7], &a6), (b[5], &a4), (b[3], &a2), (b[1], &eye)]);
    let u = a.dot(&u);
    let inner_v = scaled_sum(&[(b[12], &a6), (b[10], &a4), (b[8], &a2)]);
    let v = a6.dot(&inner_v) + scaled_sum(&[(b[6], &a6), (b[4], &a4), (b[2], &a2), (b[0], &eye)]);
    (u, v)
}

/// Solves `(V - U) X = V + U`.
fn solve_pade(u: Array2<C64>, v: Array2<C64>) -> Array2<C64> {
    let mut lhs = &v - &u;
    let mut rhs = v + u;
    lu_solve_in_place(&mut lhs, &mut rhs);
    rhs
}

/// Gaussian elimination with partial pivoting; overwrites `rhs` with the
/// solution of `lhs · X = rhs`.
fn lu_solve_in_place(lhs: &mut Array2<C64>, rhs: &mut Array2<C64>) {
    let n = lhs.nrows();
    for col in 0..n {
        let pivot = (col..n)
            .max_by(|&i, &j| lhs[[i, col]].norm().total_cmp(&lhs[[j, col]].norm()))
            .unwrap();
        if pivot != col {
            swap_rows(lhs, pivot, col);
            swap_rows(rhs, pivot, col);
        }
        let diag = lhs[[col, col]];
        let (top_l, mut bottom_l) = lhs.view_mut().split_at(ndarray::Axis(0), col + 1);
        let (top_r, mut bottom_r) = rhs.view_mut().split_at(ndarray::Axis(0), col + 1);
        let pivot_l = top_l.row(col);
        let pivot_r = top_r.row(col);
        for (mut row_l, mut row_r) in bottom_l.rows_mut().into_iter().zip(bottom_r.rows_mut()) {
            let factor = row_l[col] / diag;
            if factor.norm_sqr() == 0.0 {
                continue;
            }
            Zip::from(&mut row_l)
                .and(&pivot_l)
                .for_each(|x, &p| *x -= factor * p);
            Zip::from(&mut row_r)
                .and(&pivot_r)
                .for_each(|x, &p| *x -= factor * p);
        }
    }
    for col in (0..n).rev() {
        let diag = lhs[[col, col]];
        rhs.row_mut(col).mapv_inplace(|x| x / diag);
        let (mut top_r, bottom_r) = rhs.view_mut().split_at(ndarray::Axis(0), col);
        let solved = bottom_r.row(0);
        for i in 0..col {
            let factor = lhs[[i, col]];
            if factor.norm_sqr() == 0.0 {
                continue;
            }
            Zip::from(top_r.row_mut(i))
                .and(&solved)
                .for_each(|x, &s| *x -= factor * s);
        }
    }
}

fn swap_rows(m: &mut Array2<C64>, i: usize, j: usize) {
    let (lo, hi) = (i.min(j), i.max(j));
    let (mut top, mut bottom) = m.view_mut().split_at(ndarray::Axis(0), hi);
    Zip::from(top.row_mut(lo))
        .and(bottom.row_mut(0))
        .for_each(std::mem::swap);
}

#[cfg(test)]
mod tests {
    use super::*;

    fn max_abs_diff(a: &Array2<C64>, b: &Array2<C64>) -> f64 {
        a.iter()
            .zip(b.iter())
            .map(|(x, y)| (x - y).norm())
            .fold(0.0, f64::max)
    }

    #[test]
    fn zero_is_identity() {
        let z = Array2::<C64>::zeros((5, 5));
        assert_eq!(expm(&z), identity(5));
    }

    #[test]
    fn diagonal_exponentiates_entrywise() {
        let d = Array2::from_diag(&ndarray::arr1(&[
            C64::new(0.5, 1.0),
            C64::new(-2.0, 0.0),
            C64::new(3.0, -4.0),
        ]));
        let e = expm(&d);
        for i in 0..3 {
            assert!((e[[i, i]] - d[[i, i]].exp()).norm() < 1e-13 * d[[i, i]].exp().norm());
        }
    }

    #[test]
    fn pauli_rotation_every_degree() {
        // exp(iθσx) = cos θ I + i sin θ σx
        for theta in [1e-3, 0.1, 0.6, 1.5, 4.0, 40.0] {
            let mut m = Array2::zeros((2, 2));
            m[[0, 1]] = C64::new(0.0, theta);
            m[[1, 0]] = C64::new(0.0, theta);
            let e = expm(&m);
            let mut expected = Array2::zeros((2, 2));
            expected[[0, 0]] = C64::new(theta.cos(), 0.0);
            expected[[1, 1]] = C64::new(theta.cos(), 0.0);
            expected[[0, 1]] = C64::new(0.0, theta.sin());
            expected[[1, 0]] = C64::new(0.0, theta.sin());
            assert!(max_abs_diff(&e, &expected) < 1e-13, "theta = {theta}");
        }
    }

    #[test]
    fn nilpotent_jordan_block() {
        // exp of the 3x3 shift is I + N + N²/2
        let mut n = Array2::<C64>::zeros((3, 3));
        n[[0, 1]] = C64::new(1.0, 0.0);
        n[[1, 2]] = C64::new(1.0, 0.0);
        let e = expm(&n);
        assert!((e[[0, 2]] - C64::new(0.5, 0.0)).norm() < 1e-15);
        assert!((e[[0, 1]] - C64::new(1.0, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn pivoting_solver() {
        let mut lhs = ndarray::arr2(&[
            [C64::new(0.0, 0.0), C64::new(1.0, 0.0)],
            [C64::new(2.0, 0.0), C64::new(1.0, 1.0)],
        ]);
        let mut rhs = ndarray::arr2(&[[C64::new(3.0, 0.0)], [C64::new(5.0, 3.0)]]);
        lu_solve_in_place(&mut lhs, &mut rhs);
        // y = 3, 2x + (1+i)3 = 5+3i -> x = 1
        assert!((rhs[[0, 0]] - C64::new(1.0, 0.0)).norm() < 1e-15);
        assert!((rhs[[1, 0]] - C64::new(3.0, 0.0)).norm() < 1e-15);
    }
}
