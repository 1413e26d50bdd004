use crate::error::{Error, Result};
use crate::scalar::Scalar;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GoldenResult<T> {
    pub x: T,
    pub value: T,
    pub iterations: usize,
}

/// Golden-section search for the maximum of `f` on `[lo, hi]`.
///
/// Returns the better of the converged interior point and the two endpoints,
/// so monotone functions land on the right boundary.
pub fn golden_section_search<T: Scalar, F: FnMut(T) -> T>(
    mut f: F,
    lo: T,
    hi: T,
    tol: T,
) -> Result<GoldenResult<T>> {
    if !(lo < hi) {
        return Err(Error::InvalidParams(format!("empty bracket [{lo}, {hi}]")));
    }
    let mut eval = |x: T| -> Result<T> {
        let v = f(x);
        if v.is_finite() {
            Ok(v)
        } else {
            Err(Error::OracleEval(x.to_f64_lossy()))
        }
    };
    let inv_phi = (T::lit(5.0).sqrt() - T::one()) / T::two();
    let (mut a, mut b) = (lo, hi);
    let mut x1 = b - inv_phi * (b - a);
    let mut x2 = a + inv_phi * (b - a);
    let mut f1 = eval(x1)?;
    let mut f2 = eval(x2)?;
    let mut iterations = 0;
    while b - a > tol {
        iterations += 1;
        if f1 < f2 {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + inv_phi * (b - a);
            f2 = eval(x2)?;
        } else {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - inv_phi * (b - a);
            f1 = eval(x1)?;
        }
        if iterations > 10_000 {
            break;
        }
    }
    let (mut x, mut value) = if f1 >= f2 { (x1, f1) } else { (x2, f2) };
    for end in [lo, hi] {
        let v = eval(end)?;
        if v > value {
            x = end;
            value = v;
        }
    }
    Ok(GoldenResult { x, value, iterations })
}

/// Convenience wrapper returning `(argmax, max)`.
pub fn golden_section<T: Scalar, F: FnMut(T) -> T>(f: F, lo: T, hi: T, tol: T) -> Result<(T, T)> {
    golden_section_search(f, lo, hi, tol).map(|g| (g.x, g.value))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parabola_peak() {
        let (x, v) = golden_section(|r: f64| -(r - 1.0) * (r - 1.0), 0.0, 2.0, 1e-10).unwrap();
        assert!((x - 1.0).abs() <= 1e-10);
        assert!(v.abs() < 1e-19);
    }

    #[test]
    fn constant_function() {
        let (x, v) = golden_section(|_r: f64| 3.0, -1.0, 4.0, 1e-6).unwrap();
        assert!((-1.0..=4.0).contains(&x));
        assert_eq!(v, 3.0);
    }

    #[test]
    fn monotone_function_hits_endpoint() {
        let (x, _) = golden_section(|r: f64| r, 0.0, 1.0, 1e-9).unwrap();
        assert_eq!(x, 1.0);
    }

    #[test]
    fn iteration_count_follows_golden_ratio() {
        let g = golden_section_search(|r: f64| -(r - 0.3).powi(2), 0.0, 1.0, 1e-8).unwrap();
        let expect = (1.0f64 / 1e-8).ln() / 1.618_033_988_749_895f64.ln();
        assert!((g.iterations as f64 - expect).abs() <= 2.0, "{} vs {}", g.iterations, expect);
    }

    #[test]
    fn non_finite_value_is_an_error() {
        let r = golden_section(|r: f64| if r > 0.5 { f64::NAN } else { r }, 0.0, 1.0, 1e-6);
        assert!(matches!(r, Err(Error::OracleEval(_))));
    }

    #[test]
    fn source_only_example() {
        // (sqrt(1 - r^2) + r)^2 / (1 + r^2), peak 1.5 at r = 1/sqrt(5)
        let f = |r: f64| ((1.0 - r * r).max(0.0).sqrt() + r).powi(2) / (1.0 + r * r);
        let (x, v) = golden_section(f, 0.0, 1.0, 1e-12).unwrap();
        assert!((x - 1.0 / 5f64.sqrt()).abs() < 1e-8);
        assert!((v - 1.5).abs() < 1e-12);
    }
}
