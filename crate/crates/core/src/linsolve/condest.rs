use super::Factorization;

const MAX_SWEEPS: usize = 5;

/// Lower-bound estimate of `‖A⁻¹‖₁` from a factorization of `A`
/// (Hager's method with Higham's refinements).
///
/// Panics if the factorization is singular.
pub fn inverse_norm_one_estimate(lu: &dyn Factorization) -> f64 {
    assert!(
        !lu.is_singular(),
        "cannot estimate the inverse of a singular matrix"
    );
    let n = lu.dim();
    if n == 0 {
        return 0.0;
    }

    let mut x = vec![1.0 / n as f64; n];
    let mut est = 0.0_f64;
    let mut last_j = None;
    for sweep in 0..MAX_SWEEPS {
        let mut y = x.clone();
        lu.solve_in_place(&mut y);
        let norm = y.iter().map(|v| v.abs()).sum::<f64>();
        if sweep > 0 && norm <= est {
            break;
        }
        est = norm;

        let mut z: Vec<f64> = y
            .iter()
            .map(|&v| if v >= 0.0 { 1.0 } else { -1.0 })
            .collect();
        lu.solve_transpose_in_place(&mut z);
        let (j, zmax) = z.iter().enumerate().fold((0, -1.0), |best, (i, v)| {
            if v.abs() > best.1 {
                (i, v.abs())
            } else {
                best
            }
        });
        let ztx: f64 = z.iter().zip(&x).map(|(a, b)| a * b).sum();
        if sweep > 0 && zmax <= ztx {
            break;
        }
        if last_j == Some(j) {
            break;
        }
        x.iter_mut().for_each(|v| *v = 0.0);
        x[j] = 1.0;
        last_j = Some(j);
    }

    // alternating test vector catches cancellation the power sweep misses
    if n > 1 {
        let mut b: Vec<f64> = (0..n)
            .map(|i| {
                let s = if i % 2 == 0 { 1.0 } else { -1.0 };
                s * (1.0 + i as f64 / (n - 1) as f64)
            })
            .collect();
        lu.solve_in_place(&mut b);
        let alt = 2.0 * b.iter().map(|v| v.abs()).sum::<f64>() / (3.0 * n as f64);
        est = est.max(alt);
    }
    est
}
