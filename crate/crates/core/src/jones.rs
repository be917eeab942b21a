//! Colored Jones polynomial J_N(T(a,b); e^{ξ/N}).
//!
//! Two evaluators that share nothing but the knot:
//!
//! * [`jones_sum_oracle`], the finite cyclotomic sum
//!   J_N = q^{ab(1−N²)/4}/(q^{N/2} − q^{−N/2}) · Σ_{ε=±1} Σ_k ε q^{abk² + (a+εb)k + ε/2},
//!   k = −(N−1)/2, …, (N−1)/2;
//! * [`jones_integral`], Φ·∫_C e^{abN(−z²/ξ+z)} τ(z) dz along a line through
//!   the origin.
//!
//! Every power of q is evaluated as exp(ξ·e/N) with e an exact rational, so no
//! branch of q^{1/2} is ever chosen.

use num_complex::Complex64;
use rug::float::Constant;
use rug::Float;
use serde::{Deserialize, Serialize};

use crate::contour::{integrate_line_detailed, LineContour, LineOptions};
use crate::error::{Error, Result};
use crate::mp::Mpc;
use crate::precision::Precision;
use crate::torus::{tau, TorusKnot};

/// Above this N the integral path is not used; evaluation goes to the sum.
pub const INTEGRAL_MAX_N: u64 = 5000;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct EvalPoint {
    xi: Complex64,
    n: u64,
}

impl EvalPoint {
    pub fn new(xi: Complex64, n: u64) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidXi("N must be positive".into()));
        }
        if !(xi.re.is_finite() && xi.im.is_finite()) {
            return Err(Error::InvalidXi(format!("{xi} is not finite")));
        }
        if xi.im < 0.0 {
            return Err(Error::InvalidXi(format!("Im xi = {} < 0", xi.im)));
        }
        Ok(EvalPoint { xi, n })
    }

    pub fn xi(&self) -> Complex64 {
        self.xi
    }

    pub fn n(&self) -> u64 {
        self.n
    }

    /// u = ξ − 2π√−1.
    pub fn u(&self) -> Complex64 {
        self.xi - Complex64::new(0.0, 2.0 * std::f64::consts::PI)
    }

    /// The integer m when ξ = 2π√−1·m up to `tol`.
    pub fn root_of_unity_index(&self, tol: f64) -> Option<i64> {
        root_index_c64(self.xi, tol)
    }
}

fn root_index_c64(xi: Complex64, tol: f64) -> Option<i64> {
    let two_pi = 2.0 * std::f64::consts::PI;
    let m = (xi.im / two_pi).round();
    let d = (xi - Complex64::new(0.0, m * two_pi)).norm();
    (d <= tol * m.abs().max(1.0)).then_some(m as i64)
}

/// The integer m when the multiprecision ξ equals 2π√−1·m to its own precision.
fn root_index_mp(xi: &Mpc) -> Option<i64> {
    let bits = xi.bits();
    let m = (xi.im() / (2.0 * std::f64::consts::PI)).round();
    let d = (xi - &(Mpc::pi_i(bits) * (2.0 * m))).abs();
    let tol = 2f64.powi(16 - bits as i32) * m.abs().max(1.0);
    (d <= tol).then_some(m as i64)
}

/// Which evaluator produced a value.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    Integral,
    Sum,
}

/// Extra bits for the sum: its terms reach e^{Re(ξ)·e/N} while the result
/// may be of order one, and the denominator 2 sinh(ξ/2) may be small.
fn sum_extra_bits(knot: &TorusKnot, n: u64, xi: Complex64, denom_ln_abs: f64) -> u32 {
    let ab = knot.ab() as f64;
    let nats = ab * (-xi.re).max(0.0) * n as f64 / 4.0 + (n as f64).ln() + denom_ln_abs.abs();
    (nats / std::f64::consts::LN_2).ceil() as u32 + 8
}

/// 4·(exponent of q) for the term (k2 = 2k, ε): ab·k2² + 2(a+εb)·k2 + 2ε + ab(1−N²).
fn four_exponent(knot: &TorusKnot, n: i64, k2: i64, eps: i64) -> i64 {
    let (a, b, ab) = (knot.a(), knot.b(), knot.ab());
    ab * k2 * k2 + 2 * (a + eps * b) * k2 + 2 * eps + ab * (1 - n * n)
}

/// J_N(T(a,b); e^{ξ/N}) by the finite sum, with J_N(unknot) = 1 and
/// J_2(K; q) = V_K(q⁻¹).
pub fn jones_sum_oracle(knot: &TorusKnot, n: u64, xi: Complex64, p: &Precision) -> Result<Mpc> {
    if root_index_c64(xi, 4.0 * f64::EPSILON).is_some() {
        let exact = Mpc::from_c64(p.bits(), xi);
        return jones_sum_oracle_mp(knot, n, &exact, p);
    }
    jones_sum_oracle_mp(knot, n, &Mpc::from_c64(p.bits() + 64, xi), p)
}

/// As [`jones_sum_oracle`] for a ξ given at (at least) working precision.
pub fn jones_sum_oracle_mp(knot: &TorusKnot, n: u64, xi: &Mpc, p: &Precision) -> Result<Mpc> {
    if n == 0 {
        return Err(Error::InvalidXi("N must be positive".into()));
    }
    if let Some(m) = root_index_mp(xi) {
        return jones_sum_at_root_of_unity(knot, n, m, p);
    }
    let xc = xi.to_c64();
    let probe = (xi.with_bits(64) / 2.0).sinh() * 2.0;
    let mut extra = sum_extra_bits(knot, n, xc, probe.ln_abs());
    // the estimate is checked against the measured cancellation and raised if short
    for _ in 0..6 {
        let bits = p.bits() + extra;
        let (value, lost) = sum_at_bits(knot, n, xi, bits)?;
        if (lost as u32) + 8 <= extra + 16 {
            return Ok(value.with_bits(p.bits()));
        }
        extra = lost.ceil() as u32 + 16;
    }
    Err(Error::ToleranceNotReached { achieved: 1.0, target: p.target_rel_tol() })
}

/// Returns the value and the bits lost to cancellation in the double sum.
fn sum_at_bits(knot: &TorusKnot, n: u64, xi: &Mpc, bits: u32) -> Result<(Mpc, f64)> {
    let xi = xi.with_bits(bits);
    let ni = n as i64;
    let h4 = &xi / (4 * ni); // ξ/(4N), multiplied by the exact 4·exponent
    let mut total = Mpc::zero(bits);
    let mut l1 = Float::with_val(bits, 0);
    for k2 in (-(ni - 1)..=(ni - 1)).step_by(2) {
        for eps in [1i64, -1] {
            let term = (&h4 * four_exponent(knot, ni, k2, eps)).exp();
            l1 += term.abs_float();
            if eps == 1 {
                total += &term;
            } else {
                total -= &term;
            }
        }
    }
    let denom = (&xi / 2.0).sinh() * 2.0;
    if denom.is_zero() {
        return Err(Error::DegenerateDenominator);
    }
    let lost = if total.is_zero() {
        bits as f64
    } else {
        let ratio = Float::with_val(bits, &l1 / total.abs_float());
        ratio.log2().to_f64().max(0.0)
    };
    Ok((total / &denom, lost))
}

/// J_N at ξ = 2π√−1·m, where q^{N/2} − q^{−N/2} vanishes. The sum numerator
/// vanishes too, and the value is the ratio of derivatives in log q:
/// Σ ε·e·q^e / ((N/2)(q^{N/2} + q^{−N/2})), with every phase reduced exactly.
pub fn jones_sum_at_root_of_unity(knot: &TorusKnot, n: u64, m: i64, p: &Precision) -> Result<Mpc> {
    let ni = n as i64;
    let bits = p.bits() + 2 * (64 - n.leading_zeros()) + 8;
    let modulus = 4 * ni;
    let two_pi = Float::with_val(bits, Constant::Pi) * 2u32;
    let mut total = Mpc::zero(bits);
    for k2 in (-(ni - 1)..=(ni - 1)).step_by(2) {
        for eps in [1i64, -1] {
            let e4 = four_exponent(knot, ni, k2, eps);
            // q^e = exp(2π√−1·m·e4/(4N))
            let r = (m.rem_euclid(modulus) as i128 * e4.rem_euclid(modulus) as i128).rem_euclid(modulus as i128) as i64;
            let phase = Mpc::cis(&(Float::with_val(bits, &two_pi * r) / modulus));
            let weight = Mpc::from_ratio(bits, eps * e4, 4);
            total += &(phase * &weight);
        }
    }
    // (N/2)(q^{N/2} + q^{−N/2}) = N·(−1)^m
    let denom = if m.rem_euclid(2) == 0 { ni } else { -ni };
    Ok((total / denom).with_bits(p.bits()))
}

/// Prefactor Φ = √(abN/(πξ)) e^{−abNξ/4 + (ab − a/b − b/a)ξ/(4N)} / (2 sinh(ξ/2)).
pub fn phi_prefactor(knot: &TorusKnot, n: u64, xi: &Mpc) -> Mpc {
    let bits = xi.bits();
    let (a, b, ab) = (knot.a(), knot.b(), knot.ab());
    let abn = Mpc::from_int(bits, ab * n as i64);
    let root = (&abn / &(Mpc::pi(bits) * xi)).sqrt();
    let shift = Mpc::from_ratio(bits, ab * ab - a * a - b * b, ab) * xi / (4 * n as i64);
    let gauss = -(&abn * xi) / 4.0;
    root * (gauss + shift).exp() / ((xi / 2.0).sinh() * 2.0)
}

/// J_N by the contour integral along the line through 0 at angle arg(ξ)/2.
pub fn jones_integral(knot: &TorusKnot, pt: &EvalPoint, p: &Precision) -> Result<Mpc> {
    let xi = pt.xi();
    if let Some(m) = pt.root_of_unity_index(1e-12) {
        return Err(Error::InvalidXi(format!("xi is 2*pi*i*{m}; the integral needs sinh(xi/2) != 0")));
    }
    let n = pt.n();
    let ab = knot.ab() as f64;
    let phi = xi.arg() / 2.0;
    let abs_xi = xi.norm();
    // along t·e^{iφ} the exponent has real part abN(−t²/|ξ| + t cos φ)
    let c = ab * n as f64 / abs_xi;
    let t_star = abs_xi * phi.cos() / 2.0;
    let rel_tol = p.target_rel_tol();
    let need = (-rel_tol.log2()).ceil() + 12.0;

    // the result can be far smaller than the integrand's peak, so both the
    // truncation and the precision follow the cancellation, first estimated
    // and then measured
    let denom_ln = ((xi / 2.0).sinh() * 2.0).norm().ln();
    let nats = (ab * n as f64 * (abs_xi - xi.re) / 8.0).max(0.0) + denom_ln.abs();
    let mut assumed = nats / std::f64::consts::LN_2 + 2.0 * (64 - n.leading_zeros()) as f64;
    for _ in 0..6 {
        let half_length = t_star.abs() + ((-rel_tol.ln() + assumed * std::f64::consts::LN_2 + 5.0) / c).sqrt();
        let contour = LineContour::through_origin(phi, half_length);
        let bits = p.bits().max((need + assumed).ceil() as u32 + 16);
        let xim = Mpc::from_c64(bits, xi);
        let coeff = Mpc::from_int(bits, knot.ab() * n as i64);
        let inv_xi = xim.recip();
        let integrand = |z: &Mpc| -> Result<Mpc> {
            let expo = &coeff * &(z - &(z.sqr() * &inv_xi));
            Ok(expo.exp() * &tau(knot, z, p)?)
        };
        let opts = LineOptions { rel_tol, bits, initial_panels: 16, max_panels: 1 << 15 };
        let res = integrate_line_detailed(integrand, &contour, &opts)?;
        let lost = res.cancellation_bits();
        if lost <= assumed + 4.0 {
            let value = phi_prefactor(knot, n, &xim) * &res.value;
            return Ok(value.with_bits(p.bits()));
        }
        assumed = lost + 8.0;
    }
    Err(Error::ToleranceNotReached { achieved: 1.0, target: rel_tol })
}

/// Evaluates with the requested method; above [`INTEGRAL_MAX_N`] the sum is
/// used regardless. Returns the method actually used.
pub fn evaluate(knot: &TorusKnot, pt: &EvalPoint, method: Method, p: &Precision) -> Result<(Mpc, Method)> {
    match method {
        Method::Integral if pt.n() <= INTEGRAL_MAX_N => Ok((jones_integral(knot, pt, p)?, Method::Integral)),
        _ => Ok((jones_sum_oracle(knot, pt.n(), pt.xi(), p)?, Method::Sum)),
    }
}

/// (sinh(ξ/2)/sinh(ξ/(2N)), the same times ξ/(2N sinh(ξ/2))).
pub fn unknot_bracket(n: u64, xi: &Mpc) -> Result<(Mpc, Mpc)> {
    if n == 0 {
        return Err(Error::InvalidXi("N must be positive".into()));
    }
    let bits = xi.bits();
    let tiny = 2f64.powi(16 - bits as i32);
    let half = (xi / 2.0).sinh();
    let small = (xi / (2 * n as i64)).sinh();
    if small.abs() <= tiny || half.abs() <= tiny {
        return Err(Error::DegenerateDenominator);
    }
    let bracket = &half / &small;
    let nu = &bracket * xi / &(half * (2 * n as i64));
    Ok((bracket, nu))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tre() -> TorusKnot {
        TorusKnot::new(2, 3).unwrap()
    }

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn n_one_is_one() {
        let p = Precision::default();
        for xi in [c(1.0, 0.0), c(0.3, 2.0), c(-0.5, 3.0)] {
            let v = jones_sum_oracle(&tre(), 1, xi, &p).unwrap();
            assert!((v - 1.0).abs() < 1e-28);
        }
    }

    #[test]
    fn n_two_is_mirrored_jones_polynomial() {
        // V(t) = t + t³ − t⁴, J₂(q) = q⁻¹ + q⁻³ − q⁻⁴ with q = e^{ξ/2}
        let p = Precision::default();
        for xi in [c(0.7, 0.2), c(-0.4, 1.1)] {
            let v = jones_sum_oracle(&tre(), 2, xi, &p).unwrap();
            let q = Mpc::from_c64(p.bits() + 64, xi / 2.0).exp();
            let want = q.powi(-1) + q.powi(-3) - q.powi(-4);
            assert!((&v - &want).abs() < 1e-27 * want.abs());
        }
    }

    #[test]
    fn q_equal_one_gives_one() {
        let p = Precision::default();
        for n in [2, 5, 17] {
            let v = jones_sum_oracle(&tre(), n, c(0.0, 0.0), &p).unwrap();
            assert!((v - 1.0).abs() < 1e-28);
        }
    }

    #[test]
    fn root_of_unity_path_is_continuous() {
        // approach ξ = 2πi along the real direction
        let p = Precision::default();
        let n = 7;
        let at = jones_sum_at_root_of_unity(&tre(), n, 1, &p).unwrap();
        let two_pi = 2.0 * std::f64::consts::PI;
        let near = jones_sum_oracle(&tre(), n, c(1e-9, two_pi), &p).unwrap();
        assert!((&at - &near).abs() < 1e-6 * at.abs());
    }

    #[test]
    fn integral_n_one() {
        let p = Precision::with_digits(20).unwrap();
        let pt = EvalPoint::new(c(1.0, 1.0), 1).unwrap();
        let v = jones_integral(&tre(), &pt, &p).unwrap();
        assert!((v - 1.0).abs() < 1e-15);
    }

    #[test]
    fn integral_matches_sum() {
        let p = Precision::with_digits(20).unwrap();
        for (xi, n) in [(c(1.0, 0.0), 20), (c(1.0, 0.0), 3), (c(-0.5, 3.0), 9), (c(1.0, 2.0), 12)] {
            let pt = EvalPoint::new(xi, n).unwrap();
            let i = jones_integral(&tre(), &pt, &p).unwrap();
            let s = jones_sum_oracle(&tre(), n, xi, &p).unwrap();
            assert!((&i - &s).abs() < 1e-12 * s.abs(), "xi={xi} N={n}: {i:?} vs {s:?}");
        }
    }

    #[test]
    fn integral_rejects_roots_of_unity() {
        let p = Precision::with_digits(20).unwrap();
        let pt = EvalPoint::new(c(0.0, 2.0 * std::f64::consts::PI), 5).unwrap();
        assert!(matches!(jones_integral(&tre(), &pt, &p), Err(Error::InvalidXi(_))));
    }

    #[test]
    fn eval_point_rejects_lower_half_plane() {
        assert!(EvalPoint::new(c(1.0, -0.1), 3).is_err());
        assert!(EvalPoint::new(c(1.0, 0.0), 0).is_err());
    }

    #[test]
    fn large_n_routes_to_sum() {
        let p = Precision::with_digits(16).unwrap();
        let pt = EvalPoint::new(c(1.0, 0.0), INTEGRAL_MAX_N + 1).unwrap();
        let (_, used) = evaluate(&tre(), &pt, Method::Integral, &p).unwrap();
        assert_eq!(used, Method::Sum);
    }

    #[test]
    fn unknot_bracket_examples() {
        let bits = 128;
        let xi = Mpc::new(bits, 0.8, 0.5);
        let (b1, _) = unknot_bracket(1, &xi).unwrap();
        assert!((b1 - 1.0).abs() < 1e-30);
        let one = Mpc::one(bits);
        let (_, nu) = unknot_bracket(1_000_000, &one).unwrap();
        assert!((nu - 1.0).abs() < 1e-12);
        let (b, _) = unknot_bracket(100, &one).unwrap();
        let s = (0.5f64).sinh();
        let approx = 2.0 * s * 100.0 - s / 1200.0;
        assert!((b.re() - approx).abs() < 1e-5 * b.abs());
        let two_pi_i = Mpc::pi_i(bits) * 2.0;
        assert_eq!(unknot_bracket(1, &two_pi_i), Err(Error::DegenerateDenominator));
    }
}
