//! Dense complex linear solves for the handful of tiny systems in the crate.

use num_complex::Complex64;

/// Solve `a x = b` by Gaussian elimination with partial pivoting.
///
/// Returns `None` when a pivot underflows relative to the matrix scale.
#[allow(clippy::needless_range_loop)]
pub(crate) fn solve<const N: usize>(mut a: [[Complex64; N]; N], mut b: [Complex64; N]) -> Option<[Complex64; N]> {
    let scale = a.iter().flatten().map(|z| z.norm()).fold(0.0f64, f64::max);
    if scale == 0.0 {
        return None;
    }
    for col in 0..N {
        let mut piv = col;
        for row in col + 1..N {
            if a[row][col].norm_sqr() > a[piv][col].norm_sqr() {
                piv = row;
            }
        }
        if a[piv][col].norm() <= 1e-300_f64.max(scale * 1e-15) {
            return None;
        }
        a.swap(col, piv);
        b.swap(col, piv);
        let inv = a[col][col].inv();
        for row in col + 1..N {
            let f = a[row][col] * inv;
            if f == Complex64::new(0.0, 0.0) {
                continue;
            }
            for k in col..N {
                let t = a[col][k];
                a[row][k] -= f * t;
            }
            let t = b[col];
            b[row] -= f * t;
        }
    }
    let mut x = [Complex64::new(0.0, 0.0); N];
    for row in (0..N).rev() {
        let mut acc = b[row];
        for k in row + 1..N {
            acc -= a[row][k] * x[k];
        }
        x[row] = acc / a[row][row];
    }
    Some(x)
}
