use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Derivative {
    pub value: f64,
    pub error: f64,
}

fn five_point<F: FnMut(f64) -> f64>(f: &mut F, x: f64, h: f64) -> (f64, f64) {
    let fm2 = f(x - 2.0 * h);
    let fm1 = f(x - h);
    let fp1 = f(x + h);
    let fp2 = f(x + 2.0 * h);
    let d = (fm2 - 8.0 * fm1 + 8.0 * fp1 - fp2) / (12.0 * h);
    let magnitude = fm2.abs() + fm1.abs() + fp1.abs() + fp2.abs();
    (d, magnitude)
}

/// Five-point central difference at steps h and h/2 combined by one Richardson step.
///
/// The error estimate is the Richardson correction plus a roundoff term, so it is an
/// upper bound for polynomials up to degree 4 where the stencil itself is exact.
pub fn derivative_central<F: FnMut(f64) -> f64>(mut f: F, x: f64, h: f64) -> Result<Derivative> {
    let h = h.abs();
    if !(h > 0.0) || x + 0.5 * h == x || x - 0.5 * h == x || h < 64.0 * f64::EPSILON * x.abs() {
        return Err(Error::StepUnderflow { step: h, abscissa: x });
    }
    let (coarse, mag_coarse) = five_point(&mut f, x, h);
    let (fine, mag_fine) = five_point(&mut f, x, 0.5 * h);
    let value = (16.0 * fine - coarse) / 15.0;
    let roundoff = 4.0 * f64::EPSILON * (mag_coarse / h + 2.0 * mag_fine / h) + 4.0 * f64::EPSILON * value.abs();
    Ok(Derivative {
        value,
        error: (value - fine).abs() + roundoff,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn quadratic_is_exact() {
        let d = derivative_central(|x| x * x, 3.0, 1e-2).unwrap();
        assert!((d.value - 6.0).abs() < 1e-12);
    }

    #[test]
    fn exponential_at_origin() {
        let d = derivative_central(f64::exp, 0.0, 1e-3).unwrap();
        assert!((d.value - 1.0).abs() < 1e-8);
    }

    #[test]
    fn error_bound_on_quartic_family() {
        let x0: f64 = 1.7;
        for degree in 0..=4 {
            for &h in &[1e-1, 1e-2, 1e-3] {
                let coeffs = [0.3, -1.2, 2.5, 0.7, -0.4];
                let f = |x: f64| (0..=degree).map(|k| coeffs[k] * x.powi(k as i32)).sum::<f64>();
                let exact: f64 = (1..=degree).map(|k| coeffs[k] * k as f64 * x0.powi(k as i32 - 1)).sum();
                let d = derivative_central(f, x0, h).unwrap();
                assert!((d.value - exact).abs() <= d.error, "degree {degree}, h {h}: {} vs {}", d.value, exact);
            }
        }
    }

    #[test]
    fn underflowing_step_is_rejected() {
        assert!(derivative_central(|x| x, 1.0e10, 1e-10).is_err());
        assert!(derivative_central(|x| x, 1.0, 0.0).is_err());
    }
}
