//! Asymptotic expansions of J_N(T(a,b); e^{ξ/N}) as N → ∞.
//!
//! Notation: S_k(ξ) = −(2kπ√−1 − abξ)²/(4ab), T_k = 16 sin²(kπ/a) sin²(kπ/b)/(ab),
//! A_k(ξ;N) = √(−π) exp(S_k N/ξ) (N/ξ)^{1/2} T_k^{1/2}, all with principal
//! branches.
//!
//! The exponential terms enter the assembled approximant as
//! (−1)^{k+1} σ_k A_k, where σ_k = sgn(sin(kπ/a) sin(kπ/b)) restores the sign
//! of the residue of τ that T_k^{1/2} drops.

use num_complex::Complex64;
use rug::float::Constant;
use rug::Float;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::jones::{jones_sum_at_root_of_unity, jones_sum_oracle_mp};
use crate::mp::Mpc;
use crate::precision::Precision;
use crate::torus::{kt_coefficients, tau_even_derivatives, tau_pole_laurent, TorusKnot};

/// Distance from 2π√−1 within which [`expand`] switches to the ξ = 2π√−1 expansion.
pub const KT_GUARD: f64 = 1e-4;
/// Closeness to an integer at which ab|ξ|/(2π) counts as that integer.
pub const INDEX_GUARD: f64 = 1e-12;

pub fn s_k(knot: &TorusKnot, k: i64, xi: &Mpc) -> Mpc {
    let bits = xi.bits();
    let ab = knot.ab();
    let d = Mpc::pi_i(bits) * (2 * k) - &(xi * ab);
    -(d.sqr() / (4 * ab))
}

pub fn s_k_c64(knot: &TorusKnot, k: i64, xi: Complex64) -> Complex64 {
    s_k(knot, k, &Mpc::from_c64(64, xi)).to_c64()
}

/// sgn(sin(kπ/a)), exactly.
fn sin_sign(k: i64, a: i64) -> i32 {
    let r = k.rem_euclid(2 * a);
    if r == 0 || r == a {
        0
    } else if r < a {
        1
    } else {
        -1
    }
}

/// σ_k = sgn(sin(kπ/a) sin(kπ/b)); zero iff T_k = 0.
pub fn sigma_k(knot: &TorusKnot, k: i64) -> i32 {
    sin_sign(k, knot.a()) * sin_sign(k, knot.b())
}

pub fn t_k_mp(knot: &TorusKnot, k: i64, bits: u32) -> Mpc {
    if sigma_k(knot, k) == 0 {
        return Mpc::zero(bits);
    }
    let pi = Float::with_val(bits, Constant::Pi);
    let sa = Float::with_val(bits, &pi * k) / knot.a();
    let sb = Float::with_val(bits, &pi * k) / knot.b();
    let (sa, sb) = (sa.sin(), sb.sin());
    let v = Float::with_val(bits, &sa * &sa) * Float::with_val(bits, &sb * &sb) * 16u32 / knot.ab();
    Mpc::from_float(v, Float::new(bits))
}

pub fn t_k(knot: &TorusKnot, k: i64) -> f64 {
    t_k_mp(knot, k, 128).re()
}

/// A_k(ξ;N) with the positive root T_k^{1/2}.
pub fn a_k(knot: &TorusKnot, k: i64, xi: &Mpc, n: u64) -> Mpc {
    let bits = xi.bits();
    let t = t_k_mp(knot, k, bits);
    if t.is_zero() {
        return Mpc::zero(bits);
    }
    let n_over_xi = Mpc::from_int(bits, n as i64) / xi;
    // i√π built directly: negating π gives (−π, −0), whose sqrt is −i√π
    let sqrt_minus_pi = Mpc::pi(bits).sqrt().mul_i();
    sqrt_minus_pi * (s_k(knot, k, xi) * &n_over_xi).exp() * n_over_xi.sqrt() * t.sqrt()
}

pub fn a_k_c64(knot: &TorusKnot, k: i64, xi: Complex64, n: u64) -> Complex64 {
    a_k(knot, k, &Mpc::from_c64(128, xi), n).to_c64()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CaseTag {
    NotPolePosRe,
    NotPoleNonposRe,
    PoleCase,
    Kt2pii,
}

impl CaseTag {
    pub fn as_str(&self) -> &'static str {
        match self {
            CaseTag::NotPolePosRe => "not_pole_pos_re",
            CaseTag::NotPoleNonposRe => "not_pole_nonpos_re",
            CaseTag::PoleCase => "pole_case",
            CaseTag::Kt2pii => "kt_2pii",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExpansionSpec {
    pub knot: TorusKnot,
    pub xi: Complex64,
    pub n: u64,
    pub order_j: usize,
}

/// One exponential term of the assembly: `term = weight · A_k`.
#[derive(Clone, Debug)]
pub struct ExpTerm {
    pub k: i64,
    pub weight: f64,
    pub a_value: Mpc,
    pub term: Mpc,
}

#[derive(Clone, Debug)]
pub struct ExpansionReport {
    pub case_tag: CaseTag,
    pub xi: Mpc,
    pub n: u64,
    pub prefactor: Mpc,
    pub leading: Mpc,
    pub exp_terms: Vec<ExpTerm>,
    pub corrections: Vec<Mpc>,
    pub approximant: Mpc,
    pub oracle: Mpc,
    pub residual: f64,
    pub residual_is_relative: bool,
}

impl ExpansionReport {
    /// prefactor × (leading + Σ exp terms + Σ corrections), recomputed from the fields.
    pub fn reassemble(&self) -> Mpc {
        let mut s = self.leading.clone();
        for t in &self.exp_terms {
            s += &t.term;
        }
        for c in &self.corrections {
            s += c;
        }
        &self.prefactor * &s
    }

    fn finish(mut self) -> Self {
        self.approximant = self.reassemble();
        let diff = &self.approximant - &self.oracle;
        let oracle_abs = self.oracle.abs_float();
        self.residual_is_relative = oracle_abs > 1e-300;
        self.residual = if self.residual_is_relative {
            Float::with_val(oracle_abs.prec(), diff.abs_float() / &oracle_abs).to_f64()
        } else {
            diff.abs()
        };
        self
    }
}

/// How [`expand`] treats a given ξ.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Dispatch {
    PosRe,
    NonposRe { k_max: i64 },
    Pole { k: i64 },
    Kt,
}

/// Case selection from Re ξ, the position of ξ/2 relative to the pole set,
/// and ab|ξ|/(2π).
pub fn dispatch(knot: &TorusKnot, xi: Complex64) -> Result<Dispatch> {
    let two_pi = 2.0 * std::f64::consts::PI;
    if xi.im < 0.0 {
        return Err(Error::InvalidXi(format!("Im xi = {} < 0", xi.im)));
    }
    if (xi - Complex64::new(0.0, two_pi)).norm() < KT_GUARD {
        return Ok(Dispatch::Kt);
    }
    let m = (xi.im / two_pi).round();
    if (xi - Complex64::new(0.0, m * two_pi)).norm() <= INDEX_GUARD * m.abs().max(1.0) {
        return Err(Error::CaseUndefined(format!(
            "xi = 2*pi*i*{m} is a multiple of 2*pi*i other than 2*pi*i itself"
        )));
    }
    let ab = knot.ab();
    let index = ab as f64 * xi.norm() / two_pi;
    let nearest = index.round();
    let on_integer = (index - nearest).abs() <= INDEX_GUARD * nearest.max(1.0);
    if xi.re.abs() <= INDEX_GUARD * xi.norm().max(1.0) && on_integer && knot.poles().contains_index(nearest as i64) {
        return Ok(Dispatch::Pole { k: nearest as i64 });
    }
    if xi.re > 0.0 {
        return Ok(Dispatch::PosRe);
    }
    let k_max = if on_integer { nearest as i64 } else { index.floor() as i64 };
    Ok(Dispatch::NonposRe { k_max })
}

fn base_prefactor(knot: &TorusKnot, xi: &Mpc, n: u64) -> Mpc {
    let (a, b, ab) = (knot.a(), knot.b(), knot.ab());
    (Mpc::from_ratio(xi.bits(), ab * ab - a * a - b * b, ab) * xi / (4 * n as i64)).exp()
}

/// The (ξ/(4abN))^j / j! weights applied to τ^{(2j)}, j = 0..=J.
fn correction_weights(knot: &TorusKnot, xi: &Mpc, n: u64, order_j: usize) -> Vec<Mpc> {
    let step = xi / (4 * knot.ab() * n as i64);
    let mut w = Vec::with_capacity(order_j + 1);
    let mut cur = Mpc::one(xi.bits());
    for j in 0..=order_j {
        if j > 0 {
            cur = cur * &step / j as i64;
        }
        w.push(cur.clone());
    }
    w
}

fn signed_term(knot: &TorusKnot, k: i64, xi: &Mpc, n: u64, half: bool) -> ExpTerm {
    let alt = if k.rem_euclid(2) == 1 { 1.0 } else { -1.0 };
    let weight = alt * sigma_k(knot, k) as f64 * if half { 0.5 } else { 1.0 };
    let a_value = a_k(knot, k, xi, n);
    let term = &a_value * weight;
    ExpTerm { k, weight, a_value, term }
}

/// Assembles the expansion selected by [`dispatch`] and compares it with the
/// sum oracle.
pub fn expand(spec: &ExpansionSpec, p: &Precision) -> Result<ExpansionReport> {
    let knot = &spec.knot;
    if spec.n == 0 {
        return Err(Error::InvalidXi("N must be positive".into()));
    }
    let bits = p.bits();
    let case = dispatch(knot, spec.xi)?;
    let (tag, xi) = match case {
        Dispatch::Kt => return expand_kt_2pii(knot, spec.n, spec.order_j, p),
        Dispatch::PosRe => (CaseTag::NotPolePosRe, Mpc::from_c64(bits, spec.xi)),
        Dispatch::NonposRe { .. } => (CaseTag::NotPoleNonposRe, Mpc::from_c64(bits, spec.xi)),
        // the pole lies exactly on the imaginary axis; use it at full precision
        Dispatch::Pole { k } => (CaseTag::PoleCase, Mpc::pi_i(bits) * (2 * k) / knot.ab()),
    };
    let n = spec.n;
    let z0 = &xi / 2.0;
    let ladder = match case {
        Dispatch::Pole { k } => tau_pole_laurent(knot, k, spec.order_j, p)?.1,
        _ => tau_even_derivatives(knot, &z0, spec.order_j, p)?,
    };
    let weights = correction_weights(knot, &xi, n, spec.order_j);
    let leading = ladder[0].clone();
    let corrections: Vec<Mpc> = ladder.iter().zip(&weights).skip(1).map(|(d, w)| d * w).collect();
    let exp_terms: Vec<ExpTerm> = match case {
        Dispatch::PosRe | Dispatch::Kt => Vec::new(),
        Dispatch::NonposRe { k_max } => (1..=k_max).map(|k| signed_term(knot, k, &xi, n, false)).collect(),
        Dispatch::Pole { k } => {
            let mut v: Vec<ExpTerm> = (1..k).map(|kk| signed_term(knot, kk, &xi, n, false)).collect();
            v.push(signed_term(knot, k, &xi, n, true));
            v
        }
    };
    let prefactor = base_prefactor(knot, &xi, n) / ((&xi / 2.0).sinh() * 2.0);
    let oracle_xi = match case {
        Dispatch::Pole { .. } => xi.with_bits(bits + 64),
        _ => Mpc::from_c64(bits + 64, spec.xi),
    };
    let oracle = jones_sum_oracle_mp(knot, n, &oracle_xi, p)?;
    Ok(ExpansionReport {
        case_tag: tag,
        xi,
        n,
        prefactor,
        leading,
        exp_terms,
        corrections,
        approximant: Mpc::zero(bits),
        oracle,
        residual: 0.0,
        residual_is_relative: true,
    }
    .finish())
}

/// The expansion at ξ = 2π√−1:
/// e^{(ab−a/b−b/a)ξ/(4N)} [ (π^{3/2}/(2ab)) (N/ξ)^{3/2} Σ_{k=1}^{ab−1} (−1)^{k+1} k² e^{S_k N/ξ} σ_k T_k^{1/2}
///   + ¼ Σ_{j=1}^{j_max} a_j/j! (ξ/(4abN))^{j−1} ].
///
/// In the report, `leading` is the j = 1 term (zero when j_max = 0) and
/// `corrections` holds j = 2..=j_max.
pub fn expand_kt_2pii(knot: &TorusKnot, n: u64, j_max: usize, p: &Precision) -> Result<ExpansionReport> {
    if n == 0 {
        return Err(Error::InvalidXi("N must be positive".into()));
    }
    let bits = p.bits();
    let ab = knot.ab();
    let xi = Mpc::pi_i(bits) * 2.0;
    let n_over_xi = Mpc::from_int(bits, n as i64) / &xi;
    let pi = Mpc::pi(bits);
    let scale = &pi * &pi.sqrt() / (2 * ab) * &n_over_xi * &n_over_xi.sqrt();
    let mut exp_terms = Vec::new();
    for k in 1..ab {
        let sigma = sigma_k(knot, k);
        if sigma == 0 {
            continue;
        }
        let alt = if k % 2 == 1 { 1.0 } else { -1.0 };
        let weight = alt * (k * k) as f64 * sigma as f64;
        let a_value = (s_k(knot, k, &xi) * &n_over_xi).exp() * t_k_mp(knot, k, bits).sqrt();
        let term = &scale * &a_value * weight;
        exp_terms.push(ExpTerm { k, weight, a_value, term });
    }
    let coeffs = kt_coefficients(knot, j_max, p)?;
    let step = &xi / (4 * ab * n as i64);
    let mut series = Vec::with_capacity(j_max);
    let mut power = Mpc::one(bits);
    let mut fact = Mpc::one(bits);
    for (j, a_j) in coeffs.iter().enumerate().skip(1) {
        fact = fact * j as i64;
        if j > 1 {
            power *= &step;
        }
        series.push(a_j / &fact * &power / 4.0);
    }
    let leading = if series.is_empty() { Mpc::zero(bits) } else { series.remove(0) };
    let oracle = jones_sum_at_root_of_unity(knot, n, 1, p)?;
    Ok(ExpansionReport {
        case_tag: CaseTag::Kt2pii,
        prefactor: base_prefactor(knot, &xi, n),
        xi,
        n,
        leading,
        exp_terms,
        corrections: series,
        approximant: Mpc::zero(bits),
        oracle,
        residual: 0.0,
        residual_is_relative: true,
    }
    .finish())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Region {
    Converges,
    Diverges,
    BoundaryOscillates,
}

impl Region {
    pub fn as_str(&self) -> &'static str {
        match self {
            Region::Converges => "converges",
            Region::Diverges => "diverges",
            Region::BoundaryOscillates => "boundary_oscillates",
        }
    }
}

/// Where J_N(e^{ξ/N}) converges as N → ∞: everywhere with Re ξ > 0, and
/// inside |ξ| < 2π/(ab) otherwise.
pub fn classify_region(knot: &TorusKnot, xi: Complex64) -> Region {
    if xi.re > 0.0 {
        return Region::Converges;
    }
    let radius = 2.0 * std::f64::consts::PI / knot.ab() as f64;
    let r = xi.norm();
    if (r - radius).abs() <= INDEX_GUARD * radius.max(1.0) {
        Region::BoundaryOscillates
    } else if r < radius {
        Region::Converges
    } else {
        Region::Diverges
    }
}

#[cfg(test)]
#[allow(clippy::approx_constant)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;
    use std::f64::consts::PI;

    fn tre() -> TorusKnot {
        TorusKnot::new(2, 3).unwrap()
    }

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn s_examples() {
        let bits = 160;
        let k = tre();
        let xi = Mpc::pi_i(bits) * 2.0;
        assert!((s_k(&k, 1, &xi) - 25.0 * PI * PI / 6.0).abs() < 1e-12);
        assert!(s_k(&k, 6, &xi).abs() < 1e-40);
        let at_zero = Mpc::pi_i(bits) * 2.0 / 6i64;
        assert!(s_k(&k, 1, &at_zero).abs() < 1e-40);
    }

    #[test]
    fn t_examples() {
        let k = tre();
        assert!((t_k(&k, 1) - 2.0).abs() < 1e-15);
        assert_eq!(t_k(&k, 6), 0.0);
        assert!((t_k(&k, 5) - 2.0).abs() < 1e-15);
        assert_eq!(sigma_k(&k, 1), 1);
        assert_eq!(sigma_k(&k, 5), -1);
    }

    #[test]
    fn a_examples() {
        let k = tre();
        assert_eq!(a_k_c64(&k, 6, c(0.3, 1.0), 10), c(0.0, 0.0));
        let a = a_k_c64(&k, 1, c(0.0, 2.0 * PI), 10);
        let want = PI.sqrt() * (10.0 / (2.0 * PI)).sqrt() * 2f64.sqrt();
        assert!((a.norm() - want).abs() < 1e-12 * want);
        // at ξ = −1 + 4i, k = 1 < ab|ξ|/(2π) with Re ξ < 0, so Re(S_1/ξ) > 0 and A_1 grows
        let xi = c(-1.0, 4.0);
        assert!((s_k_c64(&k, 1, xi) / xi).re > 0.0);
        assert!(a_k_c64(&k, 1, xi, 400).norm() > a_k_c64(&k, 1, xi, 200).norm());
        // ab|ξ|/(2π) ≈ 3.94, so k = 5 is on the decaying side
        let decay = (s_k_c64(&k, 5, xi) / xi).re;
        assert!(decay < 0.0);
        assert!(a_k_c64(&k, 5, xi, 400).norm() < a_k_c64(&k, 5, xi, 200).norm());
    }

    #[test]
    fn decay_criterion_matches_closed_form() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let k = TorusKnot::new(3, 5).unwrap();
        for _ in 0..50 {
            let xi = c(rng.gen_range(-2.0..2.0), rng.gen_range(0.01..6.0));
            let kk = rng.gen_range(1..15);
            let re = (s_k_c64(&k, kk, xi) / xi).re;
            let closed = ((kk * kk) as f64 * PI * PI / (15.0 * xi.norm_sqr()) - 15.0 / 4.0) * xi.re;
            assert!((re - closed).abs() < 1e-9 * closed.abs().max(1.0));
            let positive = (xi.re > 0.0) == (kk as f64 > 15.0 * xi.norm() / (2.0 * PI));
            assert_eq!(re > 0.0, positive);
        }
    }

    #[test]
    fn s_vanishes_on_the_imaginary_axis_at_matching_modulus() {
        let bits = 160;
        let k = TorusKnot::new(2, 5).unwrap();
        for kk in 1..10 {
            let xi = Mpc::pi_i(bits) * (2 * kk) / 10i64;
            assert!(s_k(&k, kk, &xi).abs() < 1e-40);
        }
    }

    #[test]
    fn dispatch_cases() {
        let k = tre();
        assert_eq!(dispatch(&k, c(1.0, 0.0)).unwrap(), Dispatch::PosRe);
        assert_eq!(dispatch(&k, c(-0.5, 3.0)).unwrap(), Dispatch::NonposRe { k_max: 2 });
        assert_eq!(dispatch(&k, c(0.0, PI / 3.0)).unwrap(), Dispatch::Pole { k: 1 });
        assert_eq!(dispatch(&k, c(0.0, 6.2832)).unwrap(), Dispatch::Kt);
        assert!(matches!(dispatch(&k, c(0.0, 4.0 * PI)), Err(Error::CaseUndefined(_))));
        assert!(matches!(dispatch(&k, c(0.0, 0.0)), Err(Error::CaseUndefined(_))));
        // ξ/2 = 2πi/6 is a removable point, not a pole
        assert_eq!(dispatch(&k, c(0.0, 2.0 * PI / 3.0)).unwrap(), Dispatch::NonposRe { k_max: 2 });
    }

    #[test]
    fn positive_real_part_expansion() {
        let p = Precision::with_digits(20).unwrap();
        let spec = ExpansionSpec { knot: tre(), xi: c(1.0, 0.0), n: 200, order_j: 2 };
        let r = expand(&spec, &p).unwrap();
        assert_eq!(r.case_tag, CaseTag::NotPolePosRe);
        assert!(r.residual < 1e-6, "{}", r.residual);
        assert!(r.exp_terms.is_empty());
    }

    #[test]
    fn nonpositive_real_part_expansion() {
        let p = Precision::with_digits(20).unwrap();
        for (a, b) in [(2, 3), (2, 5), (3, 5)] {
            let spec = ExpansionSpec { knot: TorusKnot::new(a, b).unwrap(), xi: c(-0.5, 3.0), n: 100, order_j: 2 };
            let r = expand(&spec, &p).unwrap();
            assert_eq!(r.case_tag, CaseTag::NotPoleNonposRe);
            assert!(r.residual < 1e-4, "({a},{b}) {}", r.residual);
        }
    }

    #[test]
    fn adding_an_order_adds_one_correction() {
        let p = Precision::with_digits(20).unwrap();
        let s1 = ExpansionSpec { knot: tre(), xi: c(0.4, 1.0), n: 50, order_j: 1 };
        let s2 = ExpansionSpec { order_j: 2, ..s1 };
        let r1 = expand(&s1, &p).unwrap();
        let r2 = expand(&s2, &p).unwrap();
        let step = &r2.prefactor * &r2.corrections[1];
        assert!((&r2.approximant - &r1.approximant - &step).abs() < 1e-18 * r2.approximant.abs());
    }

    #[test]
    fn pole_case_expansion() {
        let p = Precision::with_digits(20).unwrap();
        let spec = ExpansionSpec { knot: tre(), xi: c(0.0, PI / 3.0), n: 100, order_j: 2 };
        let r = expand(&spec, &p).unwrap();
        assert_eq!(r.case_tag, CaseTag::PoleCase);
        assert_eq!(r.exp_terms.len(), 1);
        assert_eq!(r.exp_terms[0].weight, 0.5);
        assert!(r.residual < 1e-6, "{}", r.residual);
    }

    #[test]
    fn kt_expansion() {
        let p = Precision::with_digits(20).unwrap();
        let r = expand_kt_2pii(&tre(), 500, 3, &p).unwrap();
        assert_eq!(r.case_tag, CaseTag::Kt2pii);
        assert_eq!(r.exp_terms.iter().map(|t| t.k).collect::<Vec<_>>(), vec![1, 5]);
        assert!((&r.leading - 1.0).abs() < 1e-15);
        assert!(r.residual < 1e-2, "{}", r.residual);
        let routed = expand(&ExpansionSpec { knot: tre(), xi: c(0.0, 6.2832), n: 500, order_j: 3 }, &p).unwrap();
        assert_eq!(routed.case_tag, CaseTag::Kt2pii);
    }

    #[test]
    fn regions() {
        let k = tre();
        assert_eq!(classify_region(&k, c(1.0, 0.0)), Region::Converges);
        assert_eq!(classify_region(&k, c(-0.05, 0.1)), Region::Converges);
        assert_eq!(classify_region(&k, c(0.0, 3.0)), Region::Diverges);
        assert_eq!(classify_region(&k, c(0.0, PI / 3.0)), Region::BoundaryOscillates);
        assert_eq!(classify_region(&k, c(0.0, 1.5)), Region::Diverges);
    }
}
