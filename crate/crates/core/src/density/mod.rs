//! Density, distribution function, and quantiles of the chordal product.
//!
//! For a fixed point of Gr(M, ℂ^T) and a second point drawn uniformly, the
//! chordal product has a polynomial-with-logs density on (0, 1]. Closed forms
//! are provided for M = 1, 2, 3; for every M the density is assembled from the
//! exact partial-fraction coefficients of [`partial_fraction_coeffs`]:
//!
//! ```text
//! f_M(x;T) = prefactor(T) · [ Σ_{m,l} A_{ml} (−1)^{l−1}/(l−1)! · x^{T−m−1} log^{l−1} x
//!                           + Σ_{m,l} B_{ml} (−1)^{l−1}/(l−1)! · x^{T−m−M−1} log^{l−1} x ].
//! ```
//!
//! The cdf integrates each `x^a log^b x` term analytically, and quantiles are
//! obtained by bisection. Term sums are evaluated in double-double precision
//! because the alternating terms cancel almost completely against the huge
//! prefactor, which would strip plain f64 of all significant digits.

mod dd;
mod partial_fraction;

pub use partial_fraction::{partial_fraction_coeffs, PdfModel};

use crate::{Error, Result};
use dd::Dd;

fn check_dims(t: usize, m: usize) -> Result<()> {
    if m < 1 || 2 * m > t {
        return Err(Error::InvalidDimensions { t, m });
    }
    Ok(())
}

/// Density of the chordal product at x ∈ (0, 1].
///
/// Uses the closed forms for M <= 3 and the partial-fraction assembly for
/// larger M. Values are clamped to be nonnegative.
pub fn pdf_eval(m: usize, t: usize, x: f64) -> Result<f64> {
    check_dims(t, m)?;
    if !(x > 0.0 && x <= 1.0) {
        return Err(Error::DomainError { what: "x", value: x });
    }
    if m <= 3 {
        Ok(pdf_closed(m, t, x))
    } else {
        pdf_eval_general(m, t, x)
    }
}

/// Density via the general partial-fraction formula, for any M; serves as the
/// independent cross-check of the closed forms.
pub fn pdf_eval_general(m: usize, t: usize, x: f64) -> Result<f64> {
    check_dims(t, m)?;
    if !(x > 0.0 && x <= 1.0) {
        return Err(Error::DomainError { what: "x", value: x });
    }
    let model = partial_fraction_coeffs(m);
    let pref = Dd::from_rational(&model.prefactor(t)?);
    let xd = Dd::from_f64(x);
    let ln = xd.ln();
    let sum = general_sum(&model, t, xd, ln, false);
    Ok(pref.mul(sum).to_f64().max(0.0))
}

/// Cumulative distribution function at x ∈ [0, 1]; monotone with F(0) = 0 and
/// F(1) = 1.
pub fn cdf_eval(m: usize, t: usize, x: f64) -> Result<f64> {
    check_dims(t, m)?;
    if !(0.0..=1.0).contains(&x) {
        return Err(Error::DomainError { what: "x", value: x });
    }
    if x == 0.0 {
        return Ok(0.0);
    }
    let value = if m <= 3 { cdf_closed(m, t, x) } else { cdf_general_value(m, t, x)? };
    Ok(value.clamp(0.0, 1.0))
}

/// Cdf via term-wise antiderivatives of the general formula, for any M.
pub fn cdf_eval_general(m: usize, t: usize, x: f64) -> Result<f64> {
    check_dims(t, m)?;
    if !(0.0..=1.0).contains(&x) {
        return Err(Error::DomainError { what: "x", value: x });
    }
    if x == 0.0 {
        return Ok(0.0);
    }
    Ok(cdf_general_value(m, t, x)?.clamp(0.0, 1.0))
}

/// The unique x ∈ (0, 1] with F_M(x; T) = q, for q ∈ (0, 1].
///
/// Bisection to absolute tolerance 1e-12; F_M is continuous and strictly
/// increasing on (0, 1), so bisection is unconditionally safe even where the
/// density vanishes.
pub fn invert_cdf(m: usize, t: usize, q: f64) -> Result<f64> {
    check_dims(t, m)?;
    if !(q > 0.0 && q <= 1.0) {
        return Err(Error::DomainError { what: "q", value: q });
    }
    if q == 1.0 {
        return Ok(1.0);
    }
    let (mut lo, mut hi) = (0.0f64, 1.0f64);
    while hi - lo > 1e-12 {
        let mid = 0.5 * (lo + hi);
        if cdf_eval(m, t, mid)? < q {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

fn pdf_closed(m: usize, t: usize, x: f64) -> f64 {
    let ti = t as i64;
    match m {
        1 => (ti - 1) as f64 * x.powi(t as i32 - 2),
        2 => {
            let xd = Dd::from_f64(x);
            let ln = xd.ln();
            let bracket = Dd::ONE
                .sub(xd.powi(2))
                .add(xd.mul(ln).mul_f64(2.0));
            let pref = Dd::from_int(ti - 1)
                .mul(Dd::from_int(ti - 2).powi(2))
                .mul(Dd::from_int(ti - 3))
                .mul_f64(0.5);
            pref.mul(xd.powi(t as u32 - 4)).mul(bracket).to_f64().max(0.0)
        }
        3 => {
            let xd = Dd::from_f64(x);
            let ln = xd.ln();
            let bracket = Dd::ONE
                .add(xd.mul_f64(80.0))
                .sub(xd.powi(2).mul_f64(162.0))
                .add(xd.powi(3).mul_f64(80.0))
                .add(xd.powi(4))
                .add(xd.mul(ln).mul_f64(24.0))
                .sub(xd.powi(3).mul(ln).mul_f64(24.0))
                .sub(xd.powi(2).mul(ln.powi(2)).mul_f64(36.0));
            prefactor_m3(ti)
                .mul(xd.powi(t as u32 - 6))
                .mul(bracket)
                .to_f64()
                .max(0.0)
        }
        _ => unreachable!("closed forms exist for M <= 3 only"),
    }
}

fn cdf_closed(m: usize, t: usize, x: f64) -> f64 {
    let ti = t as i64;
    match m {
        1 => x.powi(t as i32 - 1),
        2 => {
            let xd = Dd::from_f64(x);
            let ln = xd.ln();
            let bracket = inv_int(ti - 3)
                .sub(xd.mul_f64(2.0).div(Dd::from_int(ti - 2).powi(2)))
                .sub(xd.powi(2).div(Dd::from_int(ti - 1)))
                .add(xd.mul(ln).mul_f64(2.0).div(Dd::from_int(ti - 2)));
            let pref = Dd::from_int(ti - 1)
                .mul(Dd::from_int(ti - 2).powi(2))
                .mul(Dd::from_int(ti - 3))
                .mul_f64(0.5);
            pref.mul(xd.powi(t as u32 - 3)).mul(bracket).to_f64()
        }
        3 => {
            let xd = Dd::from_f64(x);
            let ln = xd.ln();
            let x2 = xd.powi(2);
            let x3 = xd.powi(3);
            let q = inv_int(ti - 5)
                .add(xd.mul_f64(80.0).div(Dd::from_int(ti - 4)))
                .sub(xd.mul_f64(24.0).div(Dd::from_int(ti - 4).powi(2)))
                .sub(x2.mul_f64(162.0).div(Dd::from_int(ti - 3)))
                .sub(x2.mul_f64(72.0).div(Dd::from_int(ti - 3).powi(3)))
                .add(x3.mul_f64(80.0).div(Dd::from_int(ti - 2)))
                .add(x3.mul_f64(24.0).div(Dd::from_int(ti - 2).powi(2)))
                .add(xd.powi(4).div(Dd::from_int(ti - 1)))
                .add(xd.mul(ln).mul_f64(24.0).div(Dd::from_int(ti - 4)))
                .add(x2.mul(ln).mul_f64(72.0).div(Dd::from_int(ti - 3).powi(2)))
                .sub(x3.mul(ln).mul_f64(24.0).div(Dd::from_int(ti - 2)))
                .sub(x2.mul(ln.powi(2)).mul_f64(36.0).div(Dd::from_int(ti - 3)));
            prefactor_m3(ti).mul(xd.powi(t as u32 - 5)).mul(q).to_f64()
        }
        _ => unreachable!("closed forms exist for M <= 3 only"),
    }
}

/// (1/288)(T−1)(T−2)²(T−3)³(T−4)²(T−5), built factor by factor so T of a few
/// hundred stays well inside range.
fn prefactor_m3(ti: i64) -> Dd {
    Dd::from_int(ti - 1)
        .mul(Dd::from_int(ti - 2).powi(2))
        .mul(Dd::from_int(ti - 3).powi(3))
        .mul(Dd::from_int(ti - 4).powi(2))
        .mul(Dd::from_int(ti - 5))
        .div(Dd::from_int(288))
}

fn inv_int(n: i64) -> Dd {
    Dd::ONE.div(Dd::from_int(n))
}

fn cdf_general_value(m: usize, t: usize, x: f64) -> Result<f64> {
    let model = partial_fraction_coeffs(m);
    let pref = Dd::from_rational(&model.prefactor(t)?);
    let xd = Dd::from_f64(x);
    let ln = xd.ln();
    let sum = general_sum(&model, t, xd, ln, true);
    Ok(pref.mul(sum).to_f64())
}

/// Σ over both coefficient tables of `coeff · kernel(x)`, where the kernel is
/// `x^a log^b x` for the density or its antiderivative for the cdf. Exponents
/// are a = T−m−1 for the A table and a = T−m−M−1 for the B table, with
/// b = l−1; 2M <= T keeps every a nonnegative.
fn general_sum(model: &PdfModel, t: usize, xd: Dd, ln: Dd, antiderivative: bool) -> Dd {
    let m_dim = model.subspace_dim();
    let kernel = |a: u32, b: u32| {
        if antiderivative {
            antiderivative_power_log(xd, ln, a, b)
        } else {
            xd.powi(a).mul(ln.powi(b))
        }
    };
    let mut acc = Dd::ZERO;
    for m in 1..=m_dim {
        for l in 1..=m {
            let a = (t - m - 1) as u32;
            acc = acc.add(model.scaled_a(m, l).mul(kernel(a, (l - 1) as u32)));
        }
    }
    for m in 1..m_dim {
        for l in 1..=(m_dim - m) {
            let a = (t - m - m_dim - 1) as u32;
            acc = acc.add(model.scaled_b(m, l).mul(kernel(a, (l - 1) as u32)));
        }
    }
    acc
}

/// ∫₀^x s^a log^b s ds, from integrating by parts b times:
/// `x^{a+1} Σ_{j=0}^{b} (−1)^j (b!/(b−j)!) log^{b−j} x / (a+1)^{j+1}`.
fn antiderivative_power_log(xd: Dd, ln: Dd, a: u32, b: u32) -> Dd {
    let mut sum = integral_power_log(a, b);
    let mut falling = 1.0;
    for j in 0..b {
        let sign = if j % 2 == 0 { 1.0 } else { -1.0 };
        let denom = Dd::from_int((a + 1) as i64).powi(j + 1);
        sum = sum.add(ln.powi(b - j).mul_f64(sign * falling).div(denom));
        falling *= (b - j) as f64;
    }
    xd.powi(a + 1).mul(sum)
}

/// The full-interval value ∫₀¹ x^a log^b x dx = (−1)^b b! / (a+1)^{b+1}; also
/// the j = b boundary term of [`antiderivative_power_log`].
fn integral_power_log(a: u32, b: u32) -> Dd {
    let sign = if b % 2 == 0 { 1.0 } else { -1.0 };
    let mut factorial = 1.0;
    for k in 1..=b {
        factorial *= k as f64;
    }
    Dd::from_f64(sign * factorial).div(Dd::from_int((a + 1) as i64).powi(b + 1))
}
