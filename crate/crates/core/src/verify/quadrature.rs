use alloc::vec::Vec;

/// Nodes and weights for `E[f(ξ)]`, `ξ ~ N(0, 1)`, with `n` points.
///
/// Hermite roots by Newton iteration on the orthonormal recurrence, then
/// rescaled from the `e^{−x²}` weight to the standard normal; weights sum
/// to one.
pub fn gauss_hermite(n: usize) -> (Vec<f64>, Vec<f64>) {
    assert!(n >= 1, "at least one quadrature node");
    let pim4 = 0.751_125_544_464_942_5; // π^{-1/4}
    let mut x = alloc::vec![0.0; n];
    let mut w = alloc::vec![0.0; n];
    let nf = n as f64;
    let m = n.div_ceil(2);
    let mut z = 0.0;
    for i in 0..m {
        z = match i {
            0 => libm::sqrt(2.0 * nf + 1.0) - 1.855_75 * libm::pow(2.0 * nf + 1.0, -1.0 / 6.0),
            1 => z - 1.14 * libm::pow(nf, 0.426) / z,
            2 => 1.86 * z - 0.86 * x[0],
            3 => 1.91 * z - 0.91 * x[1],
            _ => 2.0 * z - x[i - 2],
        };
        let mut pp = 0.0;
        for _ in 0..100 {
            let mut p1 = pim4;
            let mut p2 = 0.0;
            for j in 0..n {
                let p3 = p2;
                p2 = p1;
                let jf = j as f64;
                p1 = z * libm::sqrt(2.0 / (jf + 1.0)) * p2 - libm::sqrt(jf / (jf + 1.0)) * p3;
            }
            pp = libm::sqrt(2.0 * nf) * p2;
            let z1 = z;
            z = z1 - p1 / pp;
            if (z - z1).abs() <= 3e-15 {
                break;
            }
        }
        x[i] = z;
        x[n - 1 - i] = -z;
        w[i] = 2.0 / (pp * pp);
        w[n - 1 - i] = w[i];
    }
    let norm = libm::sqrt(core::f64::consts::PI);
    let nodes = x
        .iter()
        .rev()
        .map(|t| core::f64::consts::SQRT_2 * t)
        .collect();
    let weights = w.iter().rev().map(|v| v / norm).collect();
    (nodes, weights)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn three_points() {
        let (x, w) = gauss_hermite(3);
        let s3 = libm::sqrt(3.0);
        assert!((x[0] + s3).abs() < 1e-13 && x[1].abs() < 1e-13 && (x[2] - s3).abs() < 1e-13);
        assert!((w[0] - 1.0 / 6.0).abs() < 1e-13);
        assert!((w[1] - 2.0 / 3.0).abs() < 1e-13);
    }

    #[test]
    fn normal_moments_and_mgf() {
        for n in [4, 10, 20] {
            let (x, w) = gauss_hermite(n);
            let mom = |k: i32| {
                x.iter()
                    .zip(&w)
                    .map(|(xi, wi)| wi * libm::pow(*xi, k as f64))
                    .sum::<f64>()
            };
            assert!((mom(0) - 1.0).abs() < 1e-13);
            assert!(mom(1).abs() < 1e-13);
            assert!((mom(2) - 1.0).abs() < 1e-12);
            assert!((mom(4) - 3.0).abs() < 1e-11);
            if n < 10 {
                continue;
            }
            let a = 0.3;
            let mgf: f64 = x
                .iter()
                .zip(&w)
                .map(|(xi, wi)| wi * libm::exp(a * xi))
                .sum();
            assert!((mgf - libm::exp(a * a / 2.0)).abs() < 1e-9);
        }
    }
}
