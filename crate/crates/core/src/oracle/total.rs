//! Sampling, coordinate-ascent and eigenvalue checks for the total-power problem.

use num_complex::Complex;
use rand::Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::linalg::CMatrix;
use crate::model::{capacity_dest, DerivedModel, NetworkInstance};
use crate::oracle::{phase_aligned_distance, OracleReport};
use crate::rng::{complex_normal, stream_rng, ORACLE_NAMESPACE};
use crate::scalar::Scalar;
use crate::total::solve_total_with_alpha;

/// Sampling streams; results do not depend on how many threads run them.
const CHUNKS: usize = 16;
const ASCENT_SWEEPS: usize = 200;

fn to_boundary<T: Scalar>(d: &CMatrix<T>, w: &mut [Complex<T>], p_tot: T) -> bool {
    let q = d.quad_form(w);
    if !(q > T::zero()) {
        return false;
    }
    let s = (p_tot / q).sqrt();
    for z in w.iter_mut() {
        *z *= s;
    }
    true
}

/// Best destination capacity found by random directions on the power
/// boundary, refined by coordinate ascent, compared against the analytic solver.
pub fn oracle_total<T: Scalar>(
    instance: &NetworkInstance<T>,
    p1: T,
    alpha: T,
    p_tot: T,
    n_samples: usize,
    seed: u64,
) -> Result<OracleReport> {
    if n_samples == 0 {
        return Err(Error::InvalidParams("n_samples must be at least 1".into()));
    }
    let analytic = solve_total_with_alpha(instance, p1, alpha, p_tot)?;
    let d = DerivedModel::new(instance, p1, alpha, None)?.d_matrix();
    let n = instance.relays() + 1;
    let objective = |w: &[Complex<T>]| capacity_dest(instance, p1, alpha, w);

    let per_chunk = n_samples.div_ceil(CHUNKS);
    let best = (0..CHUNKS)
        .into_par_iter()
        .map(|chunk| {
            let mut rng = stream_rng(seed, ORACLE_NAMESPACE, 1, chunk as u64);
            let count = per_chunk.min(n_samples.saturating_sub(chunk * per_chunk));
            let mut best: Option<(T, Vec<Complex<T>>)> = None;
            for _ in 0..count {
                let mut w: Vec<Complex<T>> = (0..n)
                    .map(|_| {
                        let z = complex_normal(&mut rng, 1.0);
                        Complex::new(T::lit(z.re), T::lit(z.im))
                    })
                    .collect();
                if !to_boundary(&d, &mut w, p_tot) {
                    continue;
                }
                let v = objective(&w);
                if best.as_ref().is_none_or(|(b, _)| v > *b) {
                    best = Some((v, w));
                }
            }
            best
        })
        .collect::<Vec<_>>()
        .into_iter()
        .flatten()
        .fold(None::<(T, Vec<Complex<T>>)>, |acc, cand| match acc {
            Some(a) if a.0 >= cand.0 => Some(a),
            _ => Some(cand),
        });
    let (mut value, mut w) = best.ok_or_else(|| Error::InvalidParams("no usable samples".into()))?;

    // coordinate ascent, renormalizing onto the D-ellipsoid after every move
    let units = [
        Complex::new(T::one(), T::zero()),
        Complex::new(-T::one(), T::zero()),
        Complex::new(T::zero(), T::one()),
        Complex::new(T::zero(), -T::one()),
    ];
    let scale = w.iter().map(|z| z.norm()).fold(T::zero(), T::max).max(T::lit(1e-6));
    let mut step = scale * T::lit(0.25);
    let mut evals = n_samples;
    for _ in 0..ASCENT_SWEEPS {
        let mut improved = false;
        for j in 0..n {
            for &dir in &units {
                let mut cand = w.clone();
                cand[j] += dir * step;
                if !to_boundary(&d, &mut cand, p_tot) {
                    continue;
                }
                evals += 1;
                let v = objective(&cand);
                if v > value {
                    value = v;
                    w = cand;
                    improved = true;
                }
            }
        }
        if !improved {
            step *= T::half();
            if step < scale * T::lit(1e-12) {
                break;
            }
        }
    }
    Ok(OracleReport::new(
        analytic.c_d.to_f64_lossy(),
        value.to_f64_lossy(),
        phase_aligned_distance(&analytic.w, &w),
        evals,
    ))
}

/// Inverse by Gauss-Jordan elimination with partial pivoting.
fn invert<T: Scalar>(a: &CMatrix<T>) -> Result<CMatrix<T>> {
    let n = a.dim();
    let mut m = a.clone();
    let mut inv = CMatrix::from_real_diag(&vec![T::one(); n]);
    for col in 0..n {
        let piv = (col..n)
            .max_by(|&i, &j| m[(i, col)].norm().partial_cmp(&m[(j, col)].norm()).unwrap())
            .unwrap();
        if m[(piv, col)].norm() == T::zero() {
            return Err(Error::NotPositiveDefinite);
        }
        if piv != col {
            for k in 0..n {
                let t = m[(col, k)];
                m[(col, k)] = m[(piv, k)];
                m[(piv, k)] = t;
                let t = inv[(col, k)];
                inv[(col, k)] = inv[(piv, k)];
                inv[(piv, k)] = t;
            }
        }
        let p = m[(col, col)];
        for k in 0..n {
            m[(col, k)] /= p;
            inv[(col, k)] /= p;
        }
        for i in 0..n {
            if i == col {
                continue;
            }
            let f = m[(i, col)];
            if f.norm() == T::zero() {
                continue;
            }
            for k in 0..n {
                m[(i, k)] = m[(i, k)] - f * m[(col, k)];
                inv[(i, k)] = inv[(i, k)] - f * inv[(col, k)];
            }
        }
    }
    Ok(inv)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EigenCheck<T> {
    pub eigenvalue: T,
    pub iterations: usize,
}

/// Dominant eigenvalue of D~^{-1} conj(h) h^T by power iteration.
///
/// D~ is inverted by Gauss-Jordan elimination rather than the Cholesky
/// path the solver uses.
pub fn power_iteration_eigenvalue<T: Scalar>(
    derived: &DerivedModel<T>,
    p_tot: T,
    max_iter: usize,
    tol: T,
    seed: u64,
) -> Result<EigenCheck<T>> {
    let mut d_tilde = derived.d_matrix();
    d_tilde.scale(T::one() / p_tot);
    d_tilde.add_assign(&derived.d_h_matrix());
    let inv = invert(&d_tilde)?;
    let n = derived.h.len();
    let mut op = CMatrix::zeros(n);
    for i in 0..n {
        for j in 0..n {
            let mut s = Complex::new(T::zero(), T::zero());
            for k in 0..n {
                s += inv[(i, k)] * derived.h[k].conj();
            }
            op[(i, j)] = s * derived.h[j];
        }
    }
    let mut rng = stream_rng(seed, ORACLE_NAMESPACE, 2, 0);
    let mut x: Vec<Complex<T>> = (0..n)
        .map(|_| Complex::new(T::lit(rng.random::<f64>() + 0.1), T::lit(rng.random::<f64>())))
        .collect();
    let mut lambda = T::zero();
    for it in 1..=max_iter {
        let y = op.mul_vec(&x);
        let norm = y.iter().map(|z| z.norm_sqr()).sum::<T>().sqrt();
        if norm == T::zero() {
            return Ok(EigenCheck { eigenvalue: T::zero(), iterations: it });
        }
        x = y.into_iter().map(|z| z / norm).collect();
        let ax = op.mul_vec(&x);
        let next = x
            .iter()
            .zip(&ax)
            .fold(Complex::new(T::zero(), T::zero()), |acc, (a, b)| acc + a.conj() * b)
            .re;
        if (next - lambda).abs() <= tol * next.abs() {
            return Ok(EigenCheck { eigenvalue: next, iterations: it });
        }
        lambda = next;
    }
    Ok(EigenCheck { eigenvalue: lambda, iterations: max_iter })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::Diagnostics;
    use crate::testutil::{c, random_instance};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn analytic_wins_single_relay() {
        let mut rng = ChaCha8Rng::seed_from_u64(50);
        let inst = random_instance(&mut rng, 1);
        let rep = oracle_total(&inst, 1.5, 0.5, 2.0, 100_000, 7).unwrap();
        assert!(rep.gap >= -1e-6, "{rep:?}");
        assert!(rep.gap <= 1e-6, "ascent should reach the optimum: {rep:?}");
    }

    #[test]
    fn no_relays_oracle_is_exact() {
        let inst = NetworkInstance::new(c(0.4, -0.2), vec![], vec![], 1.0).unwrap();
        let rep = oracle_total(&inst, 1.0, 0.7, 3.0, 10, 1).unwrap();
        assert!(rep.gap.abs() < 1e-14, "{rep:?}");
    }

    #[test]
    fn rank_one_power_iteration_converges_immediately() {
        let mut rng = ChaCha8Rng::seed_from_u64(51);
        let inst = random_instance(&mut rng, 4);
        let sol = solve_total_with_alpha(&inst, 1.0, 0.4, 2.5).unwrap();
        let Diagnostics::Total(d) = sol.diagnostics else { unreachable!() };
        let dm = DerivedModel::new(&inst, 1.0, 0.4, None).unwrap();
        let eig = power_iteration_eigenvalue(&dm, 2.5, 50, 1e-13, 3).unwrap();
        assert!(eig.iterations <= 2, "{eig:?}");
        assert!((eig.eigenvalue - d.rayleigh_value).abs() <= 1e-10 * d.rayleigh_value);
    }

    #[test]
    fn gauss_jordan_inverse() {
        let mut rng = ChaCha8Rng::seed_from_u64(52);
        let inst = random_instance(&mut rng, 3);
        let d = DerivedModel::new(&inst, 1.0, 0.4, None).unwrap().d_matrix();
        let inv = invert(&d).unwrap();
        for j in 0..4 {
            let mut e = [Complex::new(0.0, 0.0); 4];
            e[j] = Complex::new(1.0, 0.0);
            let col: Vec<_> = (0..4).map(|i| inv[(i, j)]).collect();
            let back = d.mul_vec(&col);
            for i in 0..4 {
                assert!((back[i] - e[i]).norm() < 1e-12);
            }
        }
    }
}
