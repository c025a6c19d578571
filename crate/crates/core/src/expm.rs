//! Matrix exponentials.
//!
//! `expm` is scaling and squaring with diagonal Padé approximants (orders 3
//! to 13, Higham 2005). `expm_action` computes `exp(tA) v` with a truncated
//! Taylor series and scaling (Al-Mohy and Higham 2011) without forming the
//! exponential; it only needs the action of `A` on a vector.

use ndarray::{Array1, Array2};
use ndarray_linalg::Inverse;

use crate::error::Result;
use crate::C64;

const PADE3: [f64; 4] = [120.0, 60.0, 12.0, 1.0];
const PADE5: [f64; 6] = [30240.0, 15120.0, 3360.0, 420.0, 30.0, 1.0];
const PADE7: [f64; 8] = [17297280.0, 8648640.0, 1995840.0, 277200.0, 25200.0, 1512.0, 56.0, 1.0];
const PADE9: [f64; 10] = [
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
const PADE13: [f64; 14] = [
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

const THETA3: f64 = 1.495585217958292e-2;
const THETA5: f64 = 2.539398330063230e-1;
const THETA7: f64 = 9.504178996162932e-1;
const THETA9: f64 = 2.097847961257068e0;
const THETA13: f64 = 5.371920351148152e0;

/// Induced 1-norm (maximum absolute column sum).
pub fn norm1(a: &Array2<C64>) -> f64 {
    a.columns()
        .into_iter()
        .map(|c| c.iter().map(|z| z.norm()).sum::<f64>())
        .fold(0.0, f64::max)
}

pub fn expm(a: &Array2<C64>) -> Result<Array2<C64>> {
    let n1 = norm1(a);
    if n1 <= THETA3 {
        return pade(a, &PADE3);
    }
    if n1 <= THETA5 {
        return pade(a, &PADE5);
    }
    if n1 <= THETA7 {
        return pade(a, &PADE7);
    }
    if n1 <= THETA9 {
        return pade(a, &PADE9);
    }
    let s = if n1 > THETA13 {
        (n1 / THETA13).log2().ceil() as i32
    } else {
        0
    };
    let scaled = a.mapv(|z| z / 2f64.powi(s));
    let mut r = pade13(&scaled)?;
    for _ in 0..s {
        r = r.dot(&r);
    }
    Ok(r)
}

fn pade(a: &Array2<C64>, b: &[f64]) -> Result<Array2<C64>> {
    let n = a.nrows();
    let ident: Array2<C64> = Array2::eye(n);
    let a2 = a.dot(a);
    let mut power = ident.clone();
    let mut u_even = Array2::<C64>::zeros((n, n));
    let mut v = Array2::<C64>::zeros((n, n));
    for k in 0..b.len() / 2 {
        if k > 0 {
            power = power.dot(&a2);
        }
        v.scaled_add(C64::new(b[2 * k], 0.0), &power);
        u_even.scaled_add(C64::new(b[2 * k + 1], 0.0), &power);
    }
    let u = a.dot(&u_even);
    solve_pade(&u, &v)
}

fn pade13(a: &Array2<C64>) -> Result<Array2<C64>> {
    let n = a.nrows();
    let b = PADE13.map(|x| C64::new(x, 0.0));
    let ident: Array2<C64> = Array2::eye(n);
    let a2 = a.dot(a);
    let a4 = a2.dot(&a2);
    let a6 = a4.dot(&a2);
    let inner_u = &a6 * b[13] + &a4 * b[11] + &a2 * b[9];
    let u = a.dot(&(a6.dot(&inner_u) + &a6 * b[7] + &a4 * b[5] + &a2 * b[3] + &ident * b[1]));
    let inner_v = &a6 * b[12] + &a4 * b[10] + &a2 * b[8];
    let v = a6.dot(&inner_v) + &a6 * b[6] + &a4 * b[4] + &a2 * b[2] + &ident * b[0];
    solve_pade(&u, &v)
}

fn solve_pade(u: &Array2<C64>, v: &Array2<C64>) -> Result<Array2<C64>> {
    let q = v - u;
    let p = v + u;
    let qinv = q.inv()?;
    Ok(qinv.dot(&p))
}

// Backward-error bounds for the degree-m truncated Taylor series in double
// precision, for the degrees this implementation chooses from.
const TAYLOR_THETA: [(usize, f64); 8] = [
    (20, 1.438),
    (25, 2.431),
    (30, 3.551),
    (35, 4.7),
    (40, 6.0),
    (45, 7.2),
    (50, 8.5),
    (55, 9.9),
];

/// `exp(t (A)) v` where `apply(v) = A v`, `shift` is a scalar `mu` used to
/// reduce the norm (typically `trace(A)/n`), and `norm1_shifted` bounds
/// `||A - mu I||_1`.
pub fn expm_action<F>(apply: F, shift: C64, norm1_shifted: f64, t: f64, v: &Array1<C64>) -> Array1<C64>
where
    F: Fn(&Array1<C64>) -> Array1<C64>,
{
    if t == 0.0 || norm1_shifted == 0.0 && shift == C64::new(0.0, 0.0) {
        return v.clone();
    }
    let scaled_norm = t.abs() * norm1_shifted;
    let (m, s) = TAYLOR_THETA
        .iter()
        .map(|&(m, theta)| (m, ((scaled_norm / theta).ceil() as usize).max(1)))
        .min_by_key(|&(m, s)| m * s)
        .expect("table is nonempty");
    let tol = f64::EPSILON / 2.0;
    let step = t / s as f64;
    let eta = (shift * step).exp();
    let inf = |x: &Array1<C64>| x.iter().fold(0.0f64, |acc, z| acc.max(z.norm()));

    let mut f = v.clone();
    for _ in 0..s {
        let mut b = f.clone();
        let mut c1 = inf(&b);
        for k in 1..=m {
            let ab = apply(&b);
            let factor = C64::new(step / k as f64, 0.0);
            b = (&ab - &b.mapv(|z| z * shift)).mapv(|z| z * factor);
            let c2 = inf(&b);
            f = &f + &b;
            if c1 + c2 <= tol * inf(&f) {
                break;
            }
            c1 = c2;
        }
        f.mapv_inplace(|z| z * eta);
    }
    f
}

#[cfg(test)]
mod tests {
    use super::*;
    use ndarray_linalg::{Eig, Inverse};

    fn sample(n: usize, scale: f64) -> Array2<C64> {
        Array2::from_shape_fn((n, n), |(i, j)| {
            let x = ((i * 7 + j * 13) % 11) as f64 / 11.0 - 0.45;
            let y = ((i * 3 + j * 5) % 7) as f64 / 7.0 - 0.5;
            C64::new(x, y) * scale
        })
    }

    // independent route: eigendecomposition of a diagonalizable matrix
    fn expm_eig(a: &Array2<C64>) -> Array2<C64> {
        let (e, v) = a.eig().unwrap();
        let vinv = v.inv().unwrap();
        let n = a.nrows();
        let d = Array2::from_shape_fn((n, n), |(i, j)| v[[i, j]] * e[j].exp());
        d.dot(&vinv)
    }

    #[test]
    fn pade_matches_eigendecomposition() {
        for &scale in &[1e-3, 0.05, 0.3, 1.0, 4.0, 20.0] {
            let a = sample(6, scale);
            let e1 = expm(&a).unwrap();
            let e2 = expm_eig(&a);
            let rel = crate::operator::max_abs(&(&e1 - &e2)) / crate::operator::max_abs(&e2);
            assert!(rel < 1e-10, "scale {scale}: rel {rel}");
        }
    }

    #[test]
    fn zero_matrix_gives_identity() {
        let a = Array2::<C64>::zeros((3, 3));
        assert_eq!(expm(&a).unwrap(), Array2::<C64>::eye(3));
    }

    #[test]
    fn action_matches_dense_exponential() {
        for &scale in &[0.1, 2.0, 15.0] {
            let a = sample(8, scale);
            let v = Array1::from_shape_fn(8, |k| C64::new(1.0 / (k + 1) as f64, 0.2 * k as f64));
            let mu = a.diag().sum() / 8.0;
            let shifted = &a - &(Array2::<C64>::eye(8) * mu);
            let dense = expm(&a.mapv(|z| z * 0.7)).unwrap().dot(&v);
            let act = expm_action(|x| a.dot(x), mu, norm1(&shifted), 0.7, &v);
            let err = (&dense - &act).iter().fold(0.0f64, |m, z| m.max(z.norm()));
            let size = dense.iter().fold(0.0f64, |m, z| m.max(z.norm()));
            assert!(err / size < 1e-11, "scale {scale}: {err}");
        }
    }
}
