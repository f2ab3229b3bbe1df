//! Bracketed scalar root finding (Brent's bisection/secant/inverse
//! quadratic hybrid).

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(default, deny_unknown_fields))]
pub struct Tolerance {
    /// Absolute tolerance on the root location.
    pub x_abs: f64,
    /// Largest accepted `|f(root)|`.
    pub residual: f64,
    pub max_iter: usize,
}

impl Default for Tolerance {
    fn default() -> Self {
        Tolerance {
            x_abs: 1e-12,
            residual: 1e-9,
            max_iter: 200,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Root {
    pub x: f64,
    /// `f(x)` at the returned point.
    pub residual: f64,
    pub iterations: usize,
}

/// Finds a root of `f` in `[lo, hi]`, which must bracket a sign change.
///
/// `what` names the equation in error messages.
pub fn brent<F>(what: &'static str, mut f: F, lo: f64, hi: f64, tol: &Tolerance) -> Result<Root>
where
    F: FnMut(f64) -> Result<f64>,
{
    let (mut a, mut b) = (lo, hi);
    let (mut fa, mut fb) = (f(a)?, f(b)?);
    if fa == 0.0 {
        return Ok(Root {
            x: a,
            residual: 0.0,
            iterations: 0,
        });
    }
    if fb == 0.0 {
        return Ok(Root {
            x: b,
            residual: 0.0,
            iterations: 0,
        });
    }
    if !(fa.is_finite() && fb.is_finite()) || fa.signum() == fb.signum() {
        return Err(Error::NoSignChange {
            what,
            lo,
            hi,
            f_lo: fa,
            f_hi: fb,
        });
    }

    let (mut c, mut fc) = (a, fa);
    let mut d = b - a;
    let mut e = d;
    for iter in 1..=tol.max_iter {
        if fb.signum() == fc.signum() {
            c = a;
            fc = fa;
            d = b - a;
            e = d;
        }
        if fc.abs() < fb.abs() {
            a = b;
            b = c;
            c = a;
            fa = fb;
            fb = fc;
            fc = fa;
        }
        let tol1 = 2.0 * f64::EPSILON * b.abs() + 0.5 * tol.x_abs;
        let xm = 0.5 * (c - b);
        if xm.abs() <= tol1 || fb == 0.0 {
            return finish(what, b, fb, iter, tol);
        }
        if e.abs() >= tol1 && fa.abs() > fb.abs() {
            let s = fb / fa;
            let (mut p, mut q);
            if a == c {
                // secant
                p = 2.0 * xm * s;
                q = 1.0 - s;
            } else {
                // inverse quadratic interpolation
                let qa = fa / fc;
                let r = fb / fc;
                p = s * (2.0 * xm * qa * (qa - r) - (b - a) * (r - 1.0));
                q = (qa - 1.0) * (r - 1.0) * (s - 1.0);
            }
            if p > 0.0 {
                q = -q;
            }
            p = p.abs();
            let min1 = 3.0 * xm * q - (tol1 * q).abs();
            let min2 = (e * q).abs();
            if 2.0 * p < min1.min(min2) {
                e = d;
                d = p / q;
            } else {
                d = xm;
                e = d;
            }
        } else {
            d = xm;
            e = d;
        }
        a = b;
        fa = fb;
        b += if d.abs() > tol1 { d } else { tol1.copysign(xm) };
        fb = f(b)?;
        if !fb.is_finite() {
            return Err(Error::Numeric("non-finite residual inside bracket"));
        }
    }
    finish(what, b, fb, tol.max_iter, tol)
}

fn finish(what: &'static str, x: f64, fx: f64, iterations: usize, tol: &Tolerance) -> Result<Root> {
    if fx.abs() > tol.residual {
        return Err(Error::Residual {
            what,
            x,
            residual: fx,
            tolerance: tol.residual,
        });
    }
    Ok(Root {
        x,
        residual: fx,
        iterations,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sqrt_two() {
        let r = brent(
            "x^2-2",
            |x| Ok(x * x - 2.0),
            0.0,
            2.0,
            &Tolerance::default(),
        )
        .unwrap();
        assert!((r.x - core::f64::consts::SQRT_2).abs() < 1e-12);
        assert!(r.residual.abs() < 1e-9);
    }

    #[test]
    fn endpoint_root() {
        let r = brent("x", Ok, 0.0, 1.0, &Tolerance::default()).unwrap();
        assert_eq!(r.x, 0.0);
    }

    #[test]
    fn no_sign_change() {
        let err = brent(
            "x^2+1",
            |x| Ok(x * x + 1.0),
            -1.0,
            1.0,
            &Tolerance::default(),
        )
        .unwrap_err();
        assert!(matches!(err, Error::NoSignChange { .. }));
    }

    #[test]
    fn steep_and_flat() {
        let tol = Tolerance::default();
        let r = brent(
            "cubic",
            |x| Ok((x - 0.3) * (x - 0.3) * (x - 0.3)),
            0.0,
            1.0,
            &tol,
        )
        .unwrap();
        assert!((r.x - 0.3).abs() < 1e-4);
        let r = brent("exp", |x| Ok(libm::exp(x) - 10.0), 0.0, 5.0, &tol).unwrap();
        assert!((r.x - libm::log(10.0)).abs() < 1e-12);
    }
}
