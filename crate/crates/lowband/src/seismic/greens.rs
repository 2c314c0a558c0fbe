//! Free-space Green's function of the 2D Helmholtz equation.
//!
//! For `−Δû − κ²û = δ(x − x_s)` the outgoing solution is
//! `û(r) = (i/4)·H₀⁽¹⁾(κr)` with the Hankel function of the first kind.
//! `J₀`/`Y₀` are evaluated with the classic Abramowitz–Stegun polynomial
//! approximations (absolute error below `1.5e-7`), plenty for the 10%-
//! magnitude / 0.1-rad validation budget they serve as an oracle for.

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Bessel function of the first kind, order zero.
pub fn bessel_j0(x: f64) -> f64 {
    let ax = x.abs();
    if ax < 3.0 {
        let t = (ax / 3.0) * (ax / 3.0);
        1.0 + t * (-2.2499997
            + t * (1.2656208
                + t * (-0.3163866 + t * (0.0444479 + t * (-0.0039444 + t * 0.0002100)))))
    } else {
        let u = 3.0 / ax;
        let f0 = 0.79788456
            + u * (-0.00000077
                + u * (-0.00552740
                    + u * (-0.00009512 + u * (0.00137237 + u * (-0.00072805 + u * 0.00014476)))));
        let theta = ax - 0.78539816
            + u * (-0.04166397
                + u * (-0.00003954
                    + u * (0.00262573 + u * (-0.00054125 + u * (-0.00029333 + u * 0.00013558)))));
        f0 * theta.cos() / ax.sqrt()
    }
}

/// Bessel function of the second kind, order zero (requires `x > 0`).
pub fn bessel_y0(x: f64) -> Result<f64> {
    if !(x > 0.0) {
        return Err(Error::validation("Y0 requires x > 0"));
    }
    if x < 3.0 {
        let t = (x / 3.0) * (x / 3.0);
        let poly = 0.36746691
            + t * (0.60559366
                + t * (-0.74350384
                    + t * (0.25300117 + t * (-0.04261214 + t * (0.00427916 - t * 0.00024846)))));
        Ok(2.0 / std::f64::consts::PI * (x / 2.0).ln() * bessel_j0(x) + poly)
    } else {
        let u = 3.0 / x;
        let f0 = 0.79788456
            + u * (-0.00000077
                + u * (-0.00552740
                    + u * (-0.00009512 + u * (0.00137237 + u * (-0.00072805 + u * 0.00014476)))));
        let theta = x - 0.78539816
            + u * (-0.04166397
                + u * (-0.00003954
                    + u * (0.00262573 + u * (-0.00054125 + u * (-0.00029333 + u * 0.00013558)))));
        Ok(f0 * theta.sin() / x.sqrt())
    }
}

/// Hankel function of the first kind, order zero: `H₀⁽¹⁾ = J₀ + iY₀`.
pub fn hankel1_0(x: f64) -> Result<Complex64> {
    Ok(Complex64::new(bessel_j0(x), bessel_y0(x)?))
}

/// Free-space receiver value `(i/4)·H₀⁽¹⁾(κr)·q̂` at distance `r` from a
/// point source of spectrum `q̂`, wave number `κ = 2πf/v`.
pub fn greens_2d(f: f64, v: f64, r: f64, q_hat: Complex64) -> Result<Complex64> {
    if !(f > 0.0) || !(v > 0.0) {
        return Err(Error::validation("greens_2d requires f > 0 and v > 0"));
    }
    if !(r > 0.0) {
        return Err(Error::validation("greens_2d requires r > 0 (source singularity)"));
    }
    let kappa = 2.0 * std::f64::consts::PI * f / v;
    Ok(Complex64::new(0.0, 0.25) * hankel1_0(kappa * r)? * q_hat)
}
