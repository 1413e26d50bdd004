//! Real polynomial roots through companion-matrix eigenvalues.
//!
//! The companion matrix is already upper Hessenberg, so after balancing it
//! goes straight into a Francis double-shift QR iteration. Each eigenvalue is
//! then polished with a few Newton steps on the original polynomial.

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::scalar::Scalar;

const MAX_SWEEPS: usize = 60;

/// Roots of `coeffs[0] x^n + coeffs[1] x^(n-1) + ... + coeffs[n]`.
///
/// Leading coefficients with magnitude at most `lead_tol * max|c|` are
/// dropped before the companion matrix is built, so a nominal quartic with a
/// vanishing leading term is solved as a cubic (or lower).
pub fn roots<T: Scalar>(coeffs: &[T], lead_tol: T) -> Result<Vec<Complex<T>>> {
    let scale = coeffs.iter().fold(T::zero(), |m, c| m.max(c.abs()));
    if scale == T::zero() {
        return Ok(Vec::new());
    }
    let start = coeffs
        .iter()
        .position(|c| c.abs() > lead_tol * scale)
        .unwrap_or(coeffs.len());
    let p = &coeffs[start..];
    let n = p.len().saturating_sub(1);
    if n == 0 {
        return Ok(Vec::new());
    }
    let lead = p[0];
    let mut a = vec![vec![T::zero(); n]; n];
    for j in 0..n {
        a[0][j] = -p[j + 1] / lead;
    }
    for i in 1..n {
        a[i][i - 1] = T::one();
    }
    balance(&mut a);
    let mut out = hessenberg_eigenvalues(a)?;
    for z in &mut out {
        *z = polish(p, *z);
    }
    Ok(out)
}

/// Horner evaluation at a complex point, returning (p(z), p'(z)).
pub fn eval_complex<T: Scalar>(p: &[T], z: Complex<T>) -> (Complex<T>, Complex<T>) {
    let zero = Complex::new(T::zero(), T::zero());
    let mut v = zero;
    let mut d = zero;
    for &c in p {
        d = d * z + v;
        v = v * z + c;
    }
    (v, d)
}

pub fn eval<T: Scalar>(p: &[T], x: T) -> T {
    p.iter().fold(T::zero(), |acc, &c| acc * x + c)
}

fn polish<T: Scalar>(p: &[T], mut z: Complex<T>) -> Complex<T> {
    let (mut fz, _) = eval_complex(p, z);
    for _ in 0..4 {
        let (_, d) = eval_complex(p, z);
        if d.norm() == T::zero() {
            break;
        }
        let cand = z - fz / d;
        let (fc, _) = eval_complex(p, cand);
        if !(fc.norm() < fz.norm()) {
            break;
        }
        z = cand;
        fz = fc;
    }
    z
}

fn balance<T: Scalar>(a: &mut [Vec<T>]) {
    let n = a.len();
    let radix = T::two();
    let sqrdx = radix * radix;
    let mut done = false;
    while !done {
        done = true;
        for i in 0..n {
            let mut r = T::zero();
            let mut c = T::zero();
            for j in 0..n {
                if j != i {
                    c += a[j][i].abs();
                    r += a[i][j].abs();
                }
            }
            if c != T::zero() && r != T::zero() {
                let mut g = r / radix;
                let mut f = T::one();
                let s = c + r;
                while c < g {
                    f *= radix;
                    c *= sqrdx;
                }
                g = r * radix;
                while c > g {
                    f /= radix;
                    c /= sqrdx;
                }
                if (c + r) / f < T::lit(0.95) * s {
                    done = false;
                    let ginv = T::one() / f;
                    for v in a[i].iter_mut() {
                        *v *= ginv;
                    }
                    for row in a.iter_mut() {
                        row[i] *= f;
                    }
                }
            }
        }
    }
}

fn sign<T: Scalar>(a: T, b: T) -> T {
    if b >= T::zero() {
        a.abs()
    } else {
        -a.abs()
    }
}

/// Eigenvalues of an upper Hessenberg matrix (destroyed in the process).
fn hessenberg_eigenvalues<T: Scalar>(mut a: Vec<Vec<T>>) -> Result<Vec<Complex<T>>> {
    let n = a.len();
    let mut out = Vec::with_capacity(n);
    let mut anorm = T::zero();
    for i in 0..n {
        for j in i.saturating_sub(1)..n {
            anorm += a[i][j].abs();
        }
    }
    let zero = T::zero();
    let mut nn = n as isize - 1;
    let mut t = zero;
    while nn >= 0 {
        let mut its = 0usize;
        loop {
            let nu = nn as usize;
            let mut l = 0usize;
            for ll in (1..=nu).rev() {
                let mut s = a[ll - 1][ll - 1].abs() + a[ll][ll].abs();
                if s == zero {
                    s = anorm;
                }
                if a[ll][ll - 1].abs() + s == s {
                    a[ll][ll - 1] = zero;
                    l = ll;
                    break;
                }
            }
            let mut x = a[nu][nu];
            if l == nu {
                out.push(Complex::new(x + t, zero));
                nn -= 1;
                break;
            }
            let mut y = a[nu - 1][nu - 1];
            let mut w = a[nu][nu - 1] * a[nu - 1][nu];
            if l == nu - 1 {
                let p = T::half() * (y - x);
                let q = p * p + w;
                let mut z = q.abs().sqrt();
                x += t;
                if q >= zero {
                    z = p + sign(z, p);
                    let r1 = x + z;
                    let r2 = if z != zero { x - w / z } else { r1 };
                    out.push(Complex::new(r1, zero));
                    out.push(Complex::new(r2, zero));
                } else {
                    out.push(Complex::new(x + p, z));
                    out.push(Complex::new(x + p, -z));
                }
                nn -= 2;
                break;
            }
            if its == MAX_SWEEPS {
                return Err(Error::NoConvergence);
            }
            if its == 10 || its == 20 {
                t += x;
                for i in 0..=nu {
                    a[i][i] -= x;
                }
                let s = a[nu][nu - 1].abs() + a[nu - 1][nu - 2].abs();
                x = T::lit(0.75) * s;
                y = x;
                w = T::lit(-0.4375) * s * s;
            }
            its += 1;

            let (mut p, mut q, mut r);
            let mut m = nu - 2;
            loop {
                let z = a[m][m];
                let rr = x - z;
                let ss = y - z;
                p = (rr * ss - w) / a[m + 1][m] + a[m][m + 1];
                q = a[m + 1][m + 1] - z - rr - ss;
                r = a[m + 2][m + 1];
                let s = p.abs() + q.abs() + r.abs();
                p /= s;
                q /= s;
                r /= s;
                if m == l {
                    break;
                }
                let u = a[m][m - 1].abs() * (q.abs() + r.abs());
                let v = p.abs() * (a[m - 1][m - 1].abs() + z.abs() + a[m + 1][m + 1].abs());
                if u + v == v {
                    break;
                }
                m -= 1;
            }
            for i in m + 2..=nu {
                a[i][i - 2] = zero;
                if i != m + 2 {
                    a[i][i - 3] = zero;
                }
            }
            let mut xk = zero;
            for k in m..nu {
                if k != m {
                    p = a[k][k - 1];
                    q = a[k + 1][k - 1];
                    r = if k != nu - 1 { a[k + 2][k - 1] } else { zero };
                    xk = p.abs() + q.abs() + r.abs();
                    if xk != zero {
                        p /= xk;
                        q /= xk;
                        r /= xk;
                    }
                }
                let s = sign((p * p + q * q + r * r).sqrt(), p);
                if s != zero {
                    if k == m {
                        if l != m {
                            a[k][k - 1] = -a[k][k - 1];
                        }
                    } else {
                        a[k][k - 1] = -s * xk;
                    }
                    p += s;
                    let xx = p / s;
                    let yy = q / s;
                    let zz = r / s;
                    q /= p;
                    r /= p;
                    for j in k..=nu {
                        let mut pp = a[k][j] + q * a[k + 1][j];
                        if k != nu - 1 {
                            pp += r * a[k + 2][j];
                            a[k + 2][j] -= pp * zz;
                        }
                        a[k + 1][j] -= pp * yy;
                        a[k][j] -= pp * xx;
                    }
                    let mmin = if nu < k + 3 { nu } else { k + 3 };
                    for i in l..=mmin {
                        let mut pp = xx * a[i][k] + yy * a[i][k + 1];
                        if k != nu - 1 {
                            pp += zz * a[i][k + 2];
                            a[i][k + 2] -= pp * r;
                        }
                        a[i][k + 1] -= pp * q;
                        a[i][k] -= pp;
                    }
                }
            }
        }
    }
    Ok(out)
}
