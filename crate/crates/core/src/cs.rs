//! Chern–Simons bundle elements and twisted Reidemeister torsion of T(a,b).
//!
//! A point [s, t; z] of the ℂ*-bundle over Hom(π₁(∂M), ℂ) is acted on by the
//! group G generated by
//!
//! * X: (s, t; z) ↦ (s+1, t; z e^{−8π√−1 t}),
//! * Y: (s, t; z) ↦ (s, t+1; z e^{8π√−1 s}),
//! * B: (s, t; z) ↦ (−s, −t; z).
//!
//! For PSL(2;ℂ) representations the translations are by half-integers as well;
//! the same formulas with fractional exponents satisfy every relation of G.

use rug::Float;

use crate::asymptotics::s_k;
use crate::charvar::{alpha_beta_from_k, v_k};
use crate::error::{Error, Result};
use crate::mp::Mpc;
use crate::precision::Precision;
use crate::torus::TorusKnot;

#[derive(Clone, Debug, PartialEq)]
pub struct BundleElement {
    pub s: Mpc,
    pub t: Mpc,
    pub z: Mpc,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Generator {
    X,
    Y,
    B,
    XInv,
    YInv,
}

/// Which translations (s, t) ↦ (s+m, t+n) count as elements of G.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Lattice {
    /// m, n ∈ ℤ (SL(2;ℂ)).
    Integer,
    /// m, n ∈ ½ℤ (PSL(2;ℂ)).
    HalfInteger,
}

impl Lattice {
    fn steps(&self) -> f64 {
        match self {
            Lattice::Integer => 1.0,
            Lattice::HalfInteger => 2.0,
        }
    }
}

impl BundleElement {
    pub fn new(s: Mpc, t: Mpc, z: Mpc) -> Result<Self> {
        if z.is_zero() {
            return Err(Error::ZeroArgument);
        }
        Ok(BundleElement { s, t, z })
    }

    fn bits(&self) -> u32 {
        self.z.bits()
    }

    /// X^m: (s+m, t; z e^{−8π√−1 m t}).
    pub fn shift_s(&self, m: f64) -> Self {
        let phase = (Mpc::pi_i(self.bits()) * (-8.0 * m) * &self.t).exp();
        BundleElement { s: &self.s + m, t: self.t.clone(), z: &self.z * &phase }
    }

    /// Y^n: (s, t+n; z e^{8π√−1 n s}).
    pub fn shift_t(&self, n: f64) -> Self {
        let phase = (Mpc::pi_i(self.bits()) * (8.0 * n) * &self.s).exp();
        BundleElement { s: self.s.clone(), t: &self.t + n, z: &self.z * &phase }
    }

    pub fn negate(&self) -> Self {
        BundleElement { s: -&self.s, t: -&self.t, z: self.z.clone() }
    }

    pub fn approx_eq(&self, other: &Self, tol: f64) -> bool {
        let close = |x: &Mpc, y: &Mpc| (x - y).abs() <= tol * y.abs().max(1.0);
        close(&self.s, &other.s) && close(&self.t, &other.t) && close(&self.z, &other.z)
    }
}

pub fn g_act(generator: Generator, e: &BundleElement) -> BundleElement {
    match generator {
        Generator::X => e.shift_s(1.0),
        Generator::XInv => e.shift_s(-1.0),
        Generator::Y => e.shift_t(1.0),
        Generator::YInv => e.shift_t(-1.0),
        Generator::B => e.negate(),
    }
}

/// Applies a word right to left, as group elements compose.
pub fn g_word(word: &[Generator], e: &BundleElement) -> BundleElement {
    word.iter().rev().fold(e.clone(), |acc, g| g_act(*g, &acc))
}

/// The nearest lattice value to a complex shift, if the shift is within `tol`
/// of one.
fn lattice_value(d: &Mpc, lattice: Lattice, tol: f64) -> Option<f64> {
    let steps = lattice.steps();
    let m = (d.re() * steps).round() / steps;
    let off = (d - m).abs();
    (off <= tol * m.abs().max(1.0)).then_some(m)
}

/// The element of the G-orbit of `e` whose coordinates are (s, t): an
/// optional B followed by the translation that the coordinate differences
/// dictate.
pub fn transport_to(e: &BundleElement, s: &Mpc, t: &Mpc, lattice: Lattice, tol: f64) -> Result<BundleElement> {
    let mut last = (0.0, 0.0);
    for flipped in [false, true] {
        let start = if flipped { e.negate() } else { e.clone() };
        let ds = s - &start.s;
        let dt = t - &start.t;
        match (lattice_value(&ds, lattice, tol), lattice_value(&dt, lattice, tol)) {
            (Some(m), Some(n)) => {
                let moved = start.shift_t(n).shift_s(m);
                // land exactly on the requested coordinates
                return Ok(BundleElement { s: s.clone(), t: t.clone(), z: moved.z });
            }
            _ => last = (ds.re(), dt.re()),
        }
    }
    Err(Error::NonIntegerShift { ds: last.0, dt: last.1 })
}

/// Orbit equality: the dictated G-word maps `e1` onto `e2` within the
/// precision's tolerance.
pub fn equivalent(e1: &BundleElement, e2: &BundleElement, p: &Precision, lattice: Lattice) -> Result<bool> {
    let tol = p.target_rel_tol();
    let moved = transport_to(e1, &e2.s, &e2.t, lattice, tol)?;
    Ok((&moved.z - &e2.z).abs() <= tol * e2.z.abs().max(1.0))
}

/// (c, d) with ad − bc = 1 and the least non-negative d.
pub fn cd_pair(knot: &TorusKnot) -> (i64, i64) {
    let (a, b) = (knot.a(), knot.b());
    let d = (0..b).find(|d| (a * d).rem_euclid(b) == 1).expect("a invertible mod b");
    ((a * d - 1) / b, d)
}

fn four_pi_i(bits: u32) -> Mpc {
    Mpc::pi_i(bits) * 4.0
}

/// [u/(4π√−1), ½ − abu/(4π√−1); exp(−8π√−1((βad + εαbc)²/(4ab) − u/(8π√−1)))].
pub fn cs_dubois_kashaev(knot: &TorusKnot, alpha: i64, beta: i64, epsilon: i64, u: &Mpc) -> Result<BundleElement> {
    if epsilon != 1 && epsilon != -1 {
        return Err(Error::InvalidComponent { alpha, beta });
    }
    let (a, b, ab) = (knot.a(), knot.b(), knot.ab());
    crate::charvar::k_pair_from_alpha_beta(knot, alpha, beta)?;
    let bits = u.bits();
    let (c, d) = cd_pair(knot);
    let x = beta * a * d + epsilon * alpha * b * c;
    let s = u / &four_pi_i(bits);
    let t = Mpc::from_ratio(bits, 1, 2) - &(u * ab / &four_pi_i(bits));
    // −8π√−1·(x²/(4ab)) + u, with x² reduced mod 4ab·... kept exact as a ratio
    let square = Mpc::from_ratio(bits, (x * x).rem_euclid(ab), ab);
    let z = (u - &(Mpc::pi_i(bits) * 2.0 * &square)).exp();
    BundleElement::new(s, t, z)
}

/// [u/(4π√−1), v_k(u)/(4π√−1); exp((2/(π√−1))(S_k(ξ) − π√−1u − u v_k(u)/4))],
/// u = ξ − 2π√−1.
pub fn cs_closed_form(knot: &TorusKnot, k: i64, xi: &Mpc) -> Result<BundleElement> {
    alpha_beta_from_k(knot, k)?;
    let bits = xi.bits();
    let u = xi - &(Mpc::pi_i(bits) * 2.0);
    let v = v_k(knot, k, &u);
    let cs = cs_closed_value(knot, k, xi);
    let z = (cs * 2.0 / &Mpc::pi_i(bits)).exp();
    BundleElement::new(&u / &four_pi_i(bits), &v / &four_pi_i(bits), z)
}

/// S_k(ξ) − π√−1 u − u v_k(u)/4, u = ξ − 2π√−1.
pub fn cs_closed_value(knot: &TorusKnot, k: i64, xi: &Mpc) -> Mpc {
    let bits = xi.bits();
    let u = xi - &(Mpc::pi_i(bits) * 2.0);
    let v = v_k(knot, k, &u);
    s_k(knot, k, xi) - &(Mpc::pi_i(bits) * &u) - &(&u * &v / 4.0)
}

/// A complex number modulo π², stored with real part in [0, π²).
#[derive(Clone, Debug, PartialEq)]
pub struct CSValue {
    value: Mpc,
}

impl CSValue {
    pub fn new(value: Mpc) -> Self {
        let bits = value.bits();
        let pi2 = Float::with_val(bits, rug::float::Constant::Pi).square();
        let re = Float::with_val(bits, value.inner().real());
        let q = Float::with_val(bits, &re / &pi2).floor();
        let reduced = re - q * &pi2;
        let im = Float::with_val(bits, value.inner().imag());
        CSValue { value: Mpc::from_float(reduced, im) }
    }

    pub fn value(&self) -> &Mpc {
        &self.value
    }

    /// Distance to `other` modulo π².
    pub fn distance(&self, other: &CSValue) -> f64 {
        let pi2 = std::f64::consts::PI.powi(2);
        let d = (&self.value - &other.value).to_c64();
        let re = d.re - (d.re / pi2).round() * pi2;
        (re * re + d.im * d.im).sqrt()
    }

    pub fn approx_eq(&self, other: &CSValue, tol: f64) -> bool {
        self.distance(other) <= tol * self.value.abs().max(1.0)
    }
}

/// CS_{u,v} = (π√−1/2) log z, for an element already sitting over (u, v).
pub fn cs_extract(e: &BundleElement, u: &Mpc, v: &Mpc, tol: f64) -> Result<CSValue> {
    let bits = e.bits();
    let s = u / &four_pi_i(bits);
    let t = v / &four_pi_i(bits);
    let close = |x: &Mpc, y: &Mpc| (x - y).abs() <= tol * y.abs().max(1.0);
    if !close(&e.s, &s) || !close(&e.t, &t) {
        return Err(Error::CoordinateMismatch);
    }
    Ok(CSValue::new(Mpc::pi_i(bits) / 2.0 * &e.z.ln()))
}

fn check_alpha_beta(knot: &TorusKnot, alpha: i64, beta: i64) -> Result<()> {
    crate::charvar::k_pair_from_alpha_beta(knot, alpha, beta).map(|_| ())
}

fn sin_sq(x: i64, m: i64) -> f64 {
    (x as f64 * std::f64::consts::PI / m as f64).sin().powi(2)
}

/// 𝕋_λ = (16/(a²b²)) sin²(απ/a) sin²(βπ/b).
pub fn torsion_lambda(knot: &TorusKnot, alpha: i64, beta: i64) -> Result<f64> {
    check_alpha_beta(knot, alpha, beta)?;
    let ab = knot.ab() as f64;
    Ok(16.0 / (ab * ab) * sin_sq(alpha, knot.a()) * sin_sq(beta, knot.b()))
}

/// 𝕋_μ, known up to sign: `abs` = ab·𝕋_λ, with the sign left undetermined.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TorsionMu {
    pub abs: f64,
    pub sign_determined: bool,
}

pub fn torsion_mu(knot: &TorusKnot, alpha: i64, beta: i64) -> Result<TorsionMu> {
    let lambda = torsion_lambda(knot, alpha, beta)?;
    Ok(TorsionMu { abs: knot.ab() as f64 * lambda, sign_determined: false })
}

/// Half-lattice Y-shift carrying the Dubois–Kashaev element of k onto the
/// closed form: (k − ab − 2)/2.
pub fn dk_to_closed_shift(knot: &TorusKnot, k: i64) -> f64 {
    (k - knot.ab() - 2) as f64 / 2.0
}
