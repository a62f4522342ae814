//! Jacobi-preconditioned BiCGSTAB for the implicit diffusion step.
//!
//! The mapped Laplacian is symmetric positive-definite on straight grids
//! and picks up mild nonsymmetry from the cross-derivative terms on curved
//! ones; BiCGSTAB covers both. The contract is the relative residual.

/// Solve `A x = b` given `apply(x, out)` and the diagonal of `A`.
/// Returns the relative residual reached.
pub fn bicgstab<F>(
    apply: F,
    diag: &[f64],
    b: &[f64],
    x: &mut [f64],
    tol: f64,
    max_iter: usize,
) -> f64
where
    F: Fn(&[f64], &mut [f64]),
{
    let n = b.len();
    let bnorm = b.iter().map(|v| v * v).sum::<f64>().sqrt().max(1e-300);
    let mut r = vec![0.0; n];
    let mut tmp = vec![0.0; n];
    apply(x, &mut tmp);
    for i in 0..n {
        r[i] = b[i] - tmp[i];
    }
    let r0 = r.clone();
    let mut rho = 1.0f64;
    let mut alpha = 1.0f64;
    let mut omega = 1.0f64;
    let mut v = vec![0.0; n];
    let mut p = vec![0.0; n];
    let mut s = vec![0.0; n];
    let mut t = vec![0.0; n];
    let mut phat = vec![0.0; n];
    let mut shat = vec![0.0; n];

    let dot = |a: &[f64], b: &[f64]| a.iter().zip(b).map(|(x, y)| x * y).sum::<f64>();
    let norm = |a: &[f64]| dot(a, a).sqrt();

    let mut res = norm(&r) / bnorm;
    if res <= tol {
        return res;
    }
    for _ in 0..max_iter {
        let rho_new = dot(&r0, &r);
        if rho_new.abs() < 1e-300 {
            break;
        }
        let beta = (rho_new / rho) * (alpha / omega);
        rho = rho_new;
        for i in 0..n {
            p[i] = r[i] + beta * (p[i] - omega * v[i]);
        }
        for i in 0..n {
            phat[i] = p[i] / diag[i];
        }
        apply(&phat, &mut v);
        alpha = rho / dot(&r0, &v);
        for i in 0..n {
            s[i] = r[i] - alpha * v[i];
        }
        if norm(&s) / bnorm <= tol {
            for i in 0..n {
                x[i] += alpha * phat[i];
            }
            apply(x, &mut tmp);
            for i in 0..n {
                r[i] = b[i] - tmp[i];
            }
            return norm(&r) / bnorm;
        }
        for i in 0..n {
            shat[i] = s[i] / diag[i];
        }
        apply(&shat, &mut t);
        let tt = dot(&t, &t);
        if tt < 1e-300 {
            break;
        }
        omega = dot(&t, &s) / tt;
        for i in 0..n {
            x[i] += alpha * phat[i] + omega * shat[i];
            r[i] = s[i] - omega * t[i];
        }
        res = norm(&r) / bnorm;
        if res <= tol {
            return res;
        }
        if omega.abs() < 1e-300 {
            break;
        }
    }
    res
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn solves_diagonally_dominant_system() {
        // Tridiagonal A = tridiag(-1, 4, -1), n = 50.
        let n = 50;
        let apply = |x: &[f64], out: &mut [f64]| {
            for i in 0..n {
                let mut v = 4.0 * x[i];
                if i > 0 {
                    v -= x[i - 1];
                }
                if i + 1 < n {
                    v -= x[i + 1];
                }
                out[i] = v;
            }
        };
        let diag = vec![4.0; n];
        let x_true: Vec<f64> = (0..n).map(|i| (i as f64 * 0.3).sin()).collect();
        let mut b = vec![0.0; n];
        apply(&x_true, &mut b);
        let mut x = vec![0.0; n];
        let res = bicgstab(apply, &diag, &b, &mut x, 1e-12, 500);
        assert!(res <= 1e-12, "residual {res}");
        for i in 0..n {
            assert!((x[i] - x_true[i]).abs() < 1e-9);
        }
    }
}
