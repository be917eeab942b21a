//! Contour quadrature in the complex plane.
//!
//! * [`integrate_line`]: composite Gauss–Legendre panels along a truncated
//!   straight line, refined by panel doubling.
//! * [`laurent_coefficients`], [`cauchy_derivatives`], [`laurent_at_simple_pole`]:
//!   trapezoid rule on a circle, which converges geometrically for periodic
//!   analytic integrands.
//!
//! All sums run in ascending node order so results are reproducible bit for
//! bit.

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use num_complex::Complex64;
use rug::float::Constant;
use rug::Float;

use crate::error::{Error, Result};
use crate::mp::Mpc;
use crate::precision::Precision;

/// A straight line `base + t·e^{iφ}`, `t ∈ [−half_length, half_length]`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LineContour {
    pub base: Complex64,
    pub angle: f64,
    pub half_length: f64,
}

impl LineContour {
    pub fn new(base: Complex64, angle: f64, half_length: f64) -> Self {
        LineContour { base, angle, half_length }
    }

    /// Line through the origin.
    pub fn through_origin(angle: f64, half_length: f64) -> Self {
        Self::new(Complex64::new(0.0, 0.0), angle, half_length)
    }
}

/// Knobs for [`integrate_line_with`].
#[derive(Clone, Copy, Debug)]
pub struct LineOptions {
    pub rel_tol: f64,
    pub bits: u32,
    pub initial_panels: usize,
    pub max_panels: usize,
}

impl LineOptions {
    pub fn from_precision(p: &Precision) -> Self {
        LineOptions {
            rel_tol: p.target_rel_tol(),
            bits: p.bits(),
            initial_panels: 16,
            max_panels: 1 << 15,
        }
    }
}

/// Times the truncation may be doubled before the tail test gives up.
const TAIL_DOUBLINGS: usize = 2;
/// Samples used to estimate the peak magnitude for the tail test.
const TAIL_SAMPLES: usize = 64;

/// ∫ f(z) dz along the full line described by `c`.
pub fn integrate_line<F>(f: F, c: &LineContour, p: &Precision) -> Result<Mpc>
where
    F: Fn(&Mpc) -> Result<Mpc>,
{
    integrate_line_with(f, c, &LineOptions::from_precision(p))
}

pub fn integrate_line_with<F>(f: F, c: &LineContour, opts: &LineOptions) -> Result<Mpc>
where
    F: Fn(&Mpc) -> Result<Mpc>,
{
    integrate_line_detailed(f, c, opts).map(|r| r.value)
}

/// Result of a line quadrature together with ∫|f| along the same nodes.
#[derive(Clone, Debug)]
pub struct LineIntegral {
    pub value: Mpc,
    pub abs_integral: f64,
    pub panels: usize,
    pub half_length: f64,
}

impl LineIntegral {
    /// Bits lost to cancellation, log2(∫|f| / |∫f|).
    pub fn cancellation_bits(&self) -> f64 {
        let v = self.value.abs();
        if v == 0.0 {
            return f64::INFINITY;
        }
        (self.abs_integral / v).log2().max(0.0)
    }
}

pub fn integrate_line_detailed<F>(f: F, c: &LineContour, opts: &LineOptions) -> Result<LineIntegral>
where
    F: Fn(&Mpc) -> Result<Mpc>,
{
    let bits = opts.bits;
    let angle = Float::with_val(bits, c.angle);
    let dir = Mpc::cis(&angle);
    let base = Mpc::from_c64(bits, c.base);
    let point = |t: &Float| -> Mpc {
        let t = Mpc::from_float(t.clone(), Float::new(bits));
        &base + &(&dir * &t)
    };

    let half = truncate(&f, &point, c.half_length, opts.rel_tol, bits)?;

    let nodes = gauss_legendre(gl_order(bits), bits);
    let mut panels = opts.initial_panels.max(1);
    let (mut prev, _) = composite(&f, &point, &dir, half, panels, &nodes, bits)?;
    let mut last_change = f64::INFINITY;
    let mut stalls = 0;
    while panels < opts.max_panels {
        panels *= 2;
        let (next, l1) = composite(&f, &point, &dir, half, panels, &nodes, bits)?;
        // roundoff floor relative to ∫|f|, so integrals that cancel to zero converge
        let floor = l1 * 2f64.powi(8 - bits as i32);
        let scale = next.abs().max(floor / opts.rel_tol).max(f64::MIN_POSITIVE);
        let change = (&next - &prev).abs() / scale;
        if change <= opts.rel_tol {
            return Ok(LineIntegral { value: next, abs_integral: l1, panels, half_length: half });
        }
        // geometric convergence should shrink the change at every doubling once
        // the panels resolve the integrand
        if change >= last_change && panels > 64 * opts.initial_panels.max(1) {
            stalls += 1;
            if stalls >= 3 {
                return Err(Error::ToleranceNotReached { achieved: change, target: opts.rel_tol });
            }
        }
        last_change = change;
        prev = next;
    }
    Err(Error::ToleranceNotReached { achieved: last_change, target: opts.rel_tol })
}

/// Picks the truncation: the integrand magnitude at both ends must sit below
/// `rel_tol` times the largest sampled magnitude.
fn truncate<F, P>(f: &F, point: &P, half_length: f64, rel_tol: f64, bits: u32) -> Result<f64>
where
    F: Fn(&Mpc) -> Result<Mpc>,
    P: Fn(&Float) -> Mpc,
{
    let mut half = half_length;
    let mut last = (0.0, 0.0);
    for _ in 0..=TAIL_DOUBLINGS {
        let mut peak = f64::NEG_INFINITY;
        for i in 0..=TAIL_SAMPLES {
            let t = -half + 2.0 * half * (i as f64) / (TAIL_SAMPLES as f64);
            let v = f(&point(&Float::with_val(bits, t)))?;
            peak = peak.max(v.ln_abs());
        }
        let lo = f(&point(&Float::with_val(bits, -half)))?.ln_abs();
        let hi = f(&point(&Float::with_val(bits, half)))?.ln_abs();
        let tail = lo.max(hi);
        if tail <= peak + rel_tol.ln() {
            return Ok(half);
        }
        last = (tail, peak);
        half *= 2.0;
    }
    Err(Error::NonDecayingIntegrand { tail: last.0.exp(), peak: last.1.exp() })
}

fn composite<F, P>(
    f: &F,
    point: &P,
    dir: &Mpc,
    half: f64,
    panels: usize,
    nodes: &[(Float, Float)],
    bits: u32,
) -> Result<(Mpc, f64)>
where
    F: Fn(&Mpc) -> Result<Mpc>,
    P: Fn(&Float) -> Mpc,
{
    let mut l1 = 0.0;
    let width = Float::with_val(bits, 2.0 * half) / (panels as u32);
    let half_width = Float::with_val(bits, &width / 2u32);
    let mut total = Mpc::zero(bits);
    for k in 0..panels {
        let mid = Float::with_val(bits, -half) + Float::with_val(bits, &width * (k as u32)) + &half_width;
        let mut panel = Mpc::zero(bits);
        for (x, w) in nodes {
            let t = Float::with_val(bits, &half_width * x) + &mid;
            let v = f(&point(&t))?;
            l1 += v.abs() * w.to_f64();
            panel += &(v * &Mpc::from_float(w.clone(), Float::new(bits)));
        }
        total += &panel;
    }
    l1 *= half_width.to_f64();
    let jac = Mpc::from_float(half_width, Float::new(bits));
    Ok((total * &jac * dir, l1))
}

/// Gauss–Legendre order used at a given binary precision (always even so no
/// node lands on a panel midpoint).
pub fn gl_order(bits: u32) -> usize {
    let m = (bits as usize / 4).clamp(16, 64);
    m + (m & 1)
}

type NodeTable = Arc<Vec<(Float, Float)>>;

fn node_cache() -> &'static Mutex<HashMap<(usize, u32), NodeTable>> {
    static CACHE: OnceLock<Mutex<HashMap<(usize, u32), NodeTable>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

/// Gauss–Legendre nodes and weights on [−1, 1] at `bits` precision, in
/// ascending node order.
pub fn gauss_legendre(order: usize, bits: u32) -> NodeTable {
    let key = (order, bits);
    if let Some(t) = node_cache().lock().unwrap().get(&key) {
        return t.clone();
    }
    let table = Arc::new(compute_gauss_legendre(order, bits));
    node_cache().lock().unwrap().insert(key, table.clone());
    table
}

fn legendre_with_derivative(n: usize, x: &Float, bits: u32) -> (Float, Float) {
    let mut p0 = Float::with_val(bits, 1);
    let mut p1 = x.clone();
    for k in 2..=n {
        // k P_k = (2k−1) x P_{k−1} − (k−1) P_{k−2}
        let a = Float::with_val(bits, x * &p1) * ((2 * k - 1) as u32);
        let b = Float::with_val(bits, &p0 * ((k - 1) as u32));
        let p2 = (a - b) / (k as u32);
        p0 = p1;
        p1 = p2;
    }
    // P'_n = n (x P_n − P_{n−1}) / (x² − 1)
    let x2m1 = Float::with_val(bits, x * x) - 1u32;
    let num = (Float::with_val(bits, x * &p1) - &p0) * (n as u32);
    (p1, num / x2m1)
}

fn compute_gauss_legendre(n: usize, bits: u32) -> Vec<(Float, Float)> {
    let work = bits + 16;
    let pi = Float::with_val(work, Constant::Pi);
    let eps = Float::with_val(work, Float::i_exp(1, -(bits as i32) + 4));
    let mut out = Vec::with_capacity(n);
    for i in 1..=n {
        // Tricomi's initial guess, then Newton at full precision.
        let theta = Float::with_val(work, &pi * (4.0 * i as f64 - 1.0)) / (4.0 * n as f64 + 2.0);
        let mut x = theta.cos();
        for _ in 0..200 {
            let (p, dp) = legendre_with_derivative(n, &x, work);
            let dx = p / &dp;
            x -= &dx;
            if dx.abs() < eps {
                break;
            }
        }
        let (_, dp) = legendre_with_derivative(n, &x, work);
        let one_minus_x2 = Float::with_val(work, 1) - Float::with_val(work, &x * &x);
        let w = Float::with_val(work, 2) / (one_minus_x2 * Float::with_val(work, &dp * &dp));
        out.push((Float::with_val(bits, &x), Float::with_val(bits, &w)));
    }
    out.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap());
    out
}

/// Largest trapezoid size tried on a circle before giving up.
const MAX_CIRCLE_NODES: usize = 1 << 14;

fn check_disk(z0: &Mpc, radius: f64, singularities: &[Complex64]) -> Result<()> {
    let c = z0.to_c64();
    for s in singularities {
        let d = (s - c).norm();
        // the center itself may be the (known) pole of a Laurent expansion
        if d <= radius * (1.0 + 1e-12) && d > radius * 1e-9 {
            return Err(Error::RadiusTooLarge { radius, distance: d });
        }
    }
    Ok(())
}

/// Laurent coefficients c_n (any sign of n) of f about `z0`, from the
/// trapezoid rule on the circle |z − z0| = radius. The circle must avoid every
/// listed singularity other than one at the center.
pub fn laurent_coefficients<F>(
    f: F,
    z0: &Mpc,
    radius: f64,
    orders: &[i32],
    singularities: &[Complex64],
    p: &Precision,
) -> Result<Vec<Mpc>>
where
    F: Fn(&Mpc) -> Result<Mpc>,
{
    if !(radius.is_finite() && radius > 0.0) {
        return Err(Error::RadiusTooLarge { radius, distance: 0.0 });
    }
    check_disk(z0, radius, singularities)?;
    let bits = p.bits();
    let tol = p.target_rel_tol();
    let max_order = orders.iter().map(|n| n.unsigned_abs() as usize).max().unwrap_or(0);
    let mut m = (2 * (max_order + 1)).next_power_of_two().max(32);
    let mut prev: Option<Vec<Mpc>> = None;
    let mut last_change = f64::INFINITY;
    while m <= MAX_CIRCLE_NODES {
        let (coeffs, fmax) = circle_pass(&f, z0, radius, orders, m, bits)?;
        if let Some(old) = &prev {
            let mut worst: f64 = 0.0;
            let mut ok = true;
            for ((n, new), old) in orders.iter().zip(&coeffs).zip(old) {
                // floor: Cauchy-bound scale fmax / r^n, so vanishing coefficients converge
                let cauchy = fmax * radius.powi(-*n);
                let scale = new.abs().max(1e-3 * cauchy);
                let change = (new - old).abs() / scale.max(f64::MIN_POSITIVE);
                worst = worst.max(change);
                if change > tol {
                    ok = false;
                }
            }
            if ok {
                return Ok(coeffs);
            }
            last_change = worst;
        }
        prev = Some(coeffs);
        m *= 2;
    }
    Err(Error::ToleranceNotReached { achieved: last_change, target: tol })
}

fn circle_pass<F>(f: &F, z0: &Mpc, radius: f64, orders: &[i32], m: usize, bits: u32) -> Result<(Vec<Mpc>, f64)>
where
    F: Fn(&Mpc) -> Result<Mpc>,
{
    let two_pi = Float::with_val(bits, Constant::Pi) * 2u32;
    let roots: Vec<Mpc> = (0..m)
        .map(|j| Mpc::cis(&(Float::with_val(bits, &two_pi * (j as u32)) / (m as u32))))
        .collect();
    let r = Mpc::new(bits, radius, 0.0);
    let mut values = Vec::with_capacity(m);
    let mut fmax: f64 = 0.0;
    for w in &roots {
        let v = f(&(z0 + &(&r * w)))?;
        fmax = fmax.max(v.abs());
        values.push(v);
    }
    let mut coeffs = Vec::with_capacity(orders.len());
    for &n in orders {
        let mut acc = Mpc::zero(bits);
        for (j, v) in values.iter().enumerate() {
            // ω^{−jn}
            let idx = ((-(j as i64) * n as i64).rem_euclid(m as i64)) as usize;
            acc += &(v * &roots[idx]);
        }
        let scale = r.powi(-n) / (m as i64);
        coeffs.push(acc * &scale);
    }
    Ok((coeffs, fmax))
}

/// f^{(n)}(z0) for each requested order.
pub fn cauchy_derivatives<F>(
    f: F,
    z0: &Mpc,
    radius: f64,
    orders: &[u32],
    singularities: &[Complex64],
    p: &Precision,
) -> Result<Vec<Mpc>>
where
    F: Fn(&Mpc) -> Result<Mpc>,
{
    let signed: Vec<i32> = orders.iter().map(|&n| n as i32).collect();
    let coeffs = laurent_coefficients(f, z0, radius, &signed, singularities, p)?;
    Ok(coeffs
        .into_iter()
        .zip(orders)
        .map(|(c, &n)| c * &factorial(n, p.bits()))
        .collect())
}

/// (residue, constant term) of f about a simple pole at `z0`.
pub fn laurent_at_simple_pole<F>(
    f: F,
    z0: &Mpc,
    radius: f64,
    singularities: &[Complex64],
    p: &Precision,
) -> Result<(Mpc, Mpc)>
where
    F: Fn(&Mpc) -> Result<Mpc>,
{
    let mut c = laurent_coefficients(f, z0, radius, &[-1, 0], singularities, p)?;
    let c0 = c.pop().unwrap();
    let cm1 = c.pop().unwrap();
    Ok((cm1, c0))
}

pub fn factorial(n: u32, bits: u32) -> Mpc {
    let mut x = Float::with_val(bits, 1);
    for k in 2..=n {
        x *= k;
    }
    Mpc::from_float(x, Float::new(bits))
}
