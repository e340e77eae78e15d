use nalgebra::SMatrix;

/// Frobenius-norm condition number of a square matrix:
/// `kappa = (1/n) * sqrt(tr(M^T M) * tr((M^T M)^-1))`.
///
/// Returns `(kappa, 1/kappa)`. A singular matrix yields
/// `(f64::INFINITY, 0.0)`. By the AM-GM inequality kappa is at least 1, so
/// the inverse always lies in `[0, 1]`.
pub fn frobenius_condition<const N: usize>(m: &SMatrix<f64, N, N>) -> (f64, f64) {
    let gram = m.transpose() * m;
    let tr = gram.trace();
    let inv_tr = match gram.try_inverse() {
        Some(inv) => inv.trace(),
        None => return (f64::INFINITY, 0.0),
    };
    let kappa = (tr * inv_tr).sqrt() / N as f64;
    if !kappa.is_finite() || kappa <= 0.0 {
        return (f64::INFINITY, 0.0);
    }
    // Rounding can nick the AM-GM bound from below; keep the range contract.
    let kappa = kappa.max(1.0);
    (kappa, 1.0 / kappa)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use nalgebra::{Matrix2, Matrix3};

    #[test]
    fn identity_is_perfectly_conditioned() {
        let (kappa, inv) = frobenius_condition(&Matrix3::<f64>::identity());
        assert_relative_eq!(kappa, 1.0, max_relative = 1e-15);
        assert_relative_eq!(inv, 1.0, max_relative = 1e-15);
    }

    #[test]
    fn diagonal_two_by_two_closed_form() {
        // diag(1,2): (1/2) * sqrt(5 * 1.25) = 1.25.
        let m = Matrix2::new(1.0, 0.0, 0.0, 2.0);
        let (kappa, inv) = frobenius_condition(&m);
        assert_relative_eq!(kappa, 1.25, max_relative = 1e-14);
        assert_relative_eq!(inv, 0.8, max_relative = 1e-14);
    }

    #[test]
    fn rank_deficient_is_singular() {
        let m = Matrix3::new(1.0, 2.0, 3.0, 2.0, 4.0, 6.0, 0.5, 1.0, 1.5);
        let (kappa, inv) = frobenius_condition(&m);
        assert!(kappa.is_infinite());
        assert_eq!(inv, 0.0);
    }

    #[test]
    fn scale_invariance() {
        let m = Matrix3::new(1.2, -0.3, 0.0, 0.4, 2.0, -1.0, 0.7, 0.1, 1.5);
        let (kappa, _) = frobenius_condition(&m);
        for c in [3.0, -0.5, 1e6, 1e-6] {
            let (kc, _) = frobenius_condition(&(m * c));
            assert_relative_eq!(kc, kappa, max_relative = 1e-12);
        }
    }
}
