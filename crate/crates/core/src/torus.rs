//! Closed-form invariants of the torus knot T(a,b).

use num_complex::Complex64;
use num_integer::Integer;
use serde::{Deserialize, Serialize};

use crate::contour::{factorial, laurent_coefficients};
use crate::error::{Error, Result};
use crate::mp::Mpc;
use crate::precision::Precision;

/// T(a,b) with gcd(a,b) = 1, b odd, a ≥ 2, b ≥ 3.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct TorusKnot {
    a: i64,
    b: i64,
}

impl TorusKnot {
    pub fn new(a: i64, b: i64) -> Result<Self> {
        if a < 2 || b < 3 {
            return Err(Error::InvalidKnot { a, b, reason: "need a >= 2 and b >= 3" });
        }
        if b % 2 == 0 {
            return Err(Error::InvalidKnot { a, b, reason: "b must be odd" });
        }
        if a.gcd(&b) != 1 {
            return Err(Error::InvalidKnot { a, b, reason: "a and b must be coprime" });
        }
        Ok(TorusKnot { a, b })
    }

    pub fn a(&self) -> i64 {
        self.a
    }

    pub fn b(&self) -> i64 {
        self.b
    }

    pub fn ab(&self) -> i64 {
        self.a * self.b
    }

    /// Genus (a−1)(b−1)/2, also the half-degree of Δ.
    pub fn genus(&self) -> i64 {
        (self.a - 1) * (self.b - 1) / 2
    }

    /// Every valid knot with a·b ≤ `bound`, ordered by (a, b).
    pub fn all_with_ab_at_most(bound: i64) -> Vec<TorusKnot> {
        let mut out = Vec::new();
        for a in 2..=bound / 3 {
            for b in 3..=bound / a {
                if let Ok(k) = TorusKnot::new(a, b) {
                    out.push(k);
                }
            }
        }
        out
    }

    pub fn poles(&self) -> PoleSet {
        PoleSet { knot: *self }
    }
}

/// The genuine poles kπ√−1/(ab) of τ, a∤k and b∤k.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PoleSet {
    knot: TorusKnot,
}

impl PoleSet {
    pub fn knot(&self) -> TorusKnot {
        self.knot
    }

    pub fn contains_index(&self, k: i64) -> bool {
        k % self.knot.a != 0 && k % self.knot.b != 0
    }

    /// Spacing π/(ab) between consecutive zeros of sinh(abz).
    pub fn spacing(&self) -> f64 {
        std::f64::consts::PI / self.knot.ab() as f64
    }

    pub fn point(&self, k: i64, bits: u32) -> Mpc {
        Mpc::pi_i(bits) * k / self.knot.ab()
    }

    pub fn point_c64(&self, k: i64) -> Complex64 {
        Complex64::new(0.0, k as f64 * self.spacing())
    }

    /// Positive pole indices in ascending order, without end.
    pub fn iter(&self) -> impl Iterator<Item = i64> + '_ {
        (1..).filter(move |&k| self.contains_index(k))
    }

    /// Index and distance of the zero of sinh(abz) closest to `z`.
    pub fn nearest_sinh_zero(&self, z: Complex64) -> (i64, f64) {
        let k = (z.im / self.spacing()).round() as i64;
        (k, (z - self.point_c64(k)).norm())
    }

    /// Poles within `radius` of `z` (used to feed the disk checks).
    pub fn near(&self, z: Complex64, radius: f64) -> Vec<Complex64> {
        let s = self.spacing();
        let lo = ((z.im - radius) / s).floor() as i64;
        let hi = ((z.im + radius) / s).ceil() as i64;
        (lo..=hi)
            .filter(|&k| self.contains_index(k))
            .map(|k| self.point_c64(k))
            .filter(|p| (p - z).norm() <= radius)
            .collect()
    }
}

/// All k in [1, k_max] with a∤k and b∤k.
pub fn pole_indices(knot: &TorusKnot, k_max: i64) -> Vec<i64> {
    knot.poles().iter().take_while(|&k| k <= k_max).collect()
}

/// Coefficients c_0..c_{2g} of (t^{ab}−1)(t−1)/((t^a−1)(t^b−1)), by exact
/// polynomial long division.
pub fn alexander_coefficients(knot: &TorusKnot) -> Vec<i64> {
    let (a, b, ab) = (knot.a as usize, knot.b as usize, knot.ab() as usize);
    // numerator t^{ab+1} − t^{ab} − t + 1
    let mut num = vec![0i64; ab + 2];
    num[ab + 1] += 1;
    num[ab] -= 1;
    num[1] -= 1;
    num[0] += 1;
    // denominator t^{a+b} − t^a − t^b + 1
    let mut den = vec![0i64; a + b + 1];
    den[a + b] += 1;
    den[a] -= 1;
    den[b] -= 1;
    den[0] += 1;
    let dn = den.len() - 1;
    let mut quot = vec![0i64; num.len() - dn];
    for i in (0..quot.len()).rev() {
        let c = num[i + dn];
        quot[i] = c;
        for (j, d) in den.iter().enumerate() {
            num[i + j] -= c * d;
        }
    }
    debug_assert!(num.iter().all(|&r| r == 0));
    quot
}

/// Δ(T(a,b); t), normalized so Δ(t) = Δ(t⁻¹) and Δ(1) = 1.
pub fn alexander(knot: &TorusKnot, t: &Mpc) -> Result<Mpc> {
    if t.is_zero() {
        return Err(Error::ZeroArgument);
    }
    let bits = t.bits();
    let mut acc = Mpc::zero(bits);
    for c in alexander_coefficients(knot).iter().rev() {
        acc = acc * t + *c;
    }
    Ok(acc * &t.powi(-(knot.genus() as i32)))
}

/// Richardson levels for removable points.
const RICHARDSON_LEVELS: usize = 4;

/// τ_{a,b}(z) = 2 sinh(az) sinh(bz)/sinh(abz).
///
/// Near a removable zero of sinh(abz) the value is the limit of symmetric
/// averages f(z ± h·d), extrapolated in h².
pub fn tau(knot: &TorusKnot, z: &Mpc, p: &Precision) -> Result<Mpc> {
    let poles = knot.poles();
    let (k, dist) = poles.nearest_sinh_zero(z.to_c64());
    let digits = p.working_digits() as f64;
    if poles.contains_index(k) {
        if dist < 10f64.powf(-digits / 2.0) * poles.spacing() {
            return Err(Error::PoleHit { k });
        }
        return Ok(tau_direct(knot, z));
    }
    let h = poles.spacing() * 10f64.powf(-digits / 9.0);
    if dist >= h {
        return Ok(tau_direct(knot, z));
    }
    // step perpendicular to the offset from the zero, so no sample lands on it
    let bits = z.bits();
    let offset = z - &poles.point(k, bits);
    let dir = if offset.is_zero() {
        Mpc::one(bits)
    } else {
        (offset.clone() / offset.abs_mpc()).mul_i()
    };
    let mut table: Vec<Mpc> = Vec::with_capacity(RICHARDSON_LEVELS);
    for l in 0..RICHARDSON_LEVELS {
        let step = &dir * (h / (1u64 << l) as f64);
        let avg = (tau_direct(knot, &(z + &step)) + tau_direct(knot, &(z - &step))) / 2.0;
        table.push(avg);
    }
    // Neville in h²: each halving of h divides the leading error by 4^m
    for m in 1..RICHARDSON_LEVELS {
        let factor = 4f64.powi(m as i32);
        for l in (m..RICHARDSON_LEVELS).rev() {
            table[l] = (&table[l] * factor - &table[l - 1]) / (factor - 1.0);
        }
    }
    Ok(table.pop().unwrap())
}

fn tau_direct(knot: &TorusKnot, z: &Mpc) -> Mpc {
    let num = (z * knot.a).sinh() * (z * knot.b).sinh() * 2.0;
    num / (z * knot.ab()).sinh()
}

/// Closed-form residue of τ at kπ√−1/(ab): (−1)^{k+1}·2 sin(kπ/a) sin(kπ/b)/(ab).
pub fn tau_residue(knot: &TorusKnot, k: i64) -> f64 {
    let pi = std::f64::consts::PI;
    let sign = if k.rem_euclid(2) == 1 { 1.0 } else { -1.0 };
    sign * 2.0 * (k as f64 * pi / knot.a as f64).sin() * (k as f64 * pi / knot.b as f64).sin()
        / knot.ab() as f64
}

fn even_orders(j_max: usize) -> Vec<i32> {
    (0..=j_max).map(|j| 2 * j as i32).collect()
}

/// τ^{(2j)}(z0) for j = 0..=j_max.
pub fn tau_even_derivatives(knot: &TorusKnot, z0: &Mpc, j_max: usize, p: &Precision) -> Result<Vec<Mpc>> {
    let poles = knot.poles();
    let c = z0.to_c64();
    let (k, dist) = poles.nearest_sinh_zero(c);
    if poles.contains_index(k) && dist < 10f64.powf(-(p.working_digits() as f64) / 2.0) * poles.spacing() {
        return Err(Error::PoleHit { k });
    }
    // half the distance to the nearest pole or other zero of sinh(abz)
    let s = poles.spacing();
    let mut nearest = f64::INFINITY;
    for kk in [k - 1, k, k + 1] {
        let d = (c - poles.point_c64(kk)).norm();
        let is_center = d < 1e-9 * s && !poles.contains_index(kk);
        if !is_center {
            nearest = nearest.min(d);
        }
    }
    let radius = 0.5 * nearest;
    let sing = poles.near(c, 2.0 * radius);
    let coeffs = laurent_coefficients(|z| tau(knot, z, p), z0, radius, &even_orders(j_max), &sing, p)?;
    Ok(scale_to_derivatives(coeffs, p.bits()))
}

/// Laurent data of τ at the pole kπ√−1/(ab): the residue and the even
/// derivatives of the regular part, (2j)!·c_{2j}, j = 0..=j_max.
pub fn tau_pole_laurent(knot: &TorusKnot, k: i64, j_max: usize, p: &Precision) -> Result<(Mpc, Vec<Mpc>)> {
    let poles = knot.poles();
    if !poles.contains_index(k) {
        return Err(Error::InvalidK { k });
    }
    let center = poles.point(k, p.bits());
    let radius = 0.5 * poles.spacing();
    let mut orders = vec![-1];
    orders.extend(even_orders(j_max));
    let sing = poles.near(center.to_c64(), 2.0 * radius);
    let mut coeffs = laurent_coefficients(|z| tau(knot, z, p), &center, radius, &orders, &sing, p)?;
    let residue = coeffs.remove(0);
    Ok((residue, scale_to_derivatives(coeffs, p.bits())))
}

fn scale_to_derivatives(coeffs: Vec<Mpc>, bits: u32) -> Vec<Mpc> {
    coeffs
        .into_iter()
        .enumerate()
        .map(|(j, c)| c * &factorial(2 * j as u32, bits))
        .collect()
}

/// a_l = (d/dz)^{2l}[z·τ(z)] at z = 0, l = 0..=l_max.
pub fn kt_coefficients(knot: &TorusKnot, l_max: usize, p: &Precision) -> Result<Vec<Mpc>> {
    let poles = knot.poles();
    let radius = 0.5 * poles.spacing();
    let z0 = Mpc::zero(p.bits());
    let sing = poles.near(Complex64::new(0.0, 0.0), 2.0 * radius);
    let coeffs = laurent_coefficients(|z| Ok(z * &tau(knot, z, p)?), &z0, radius, &even_orders(l_max), &sing, p)?;
    Ok(scale_to_derivatives(coeffs, p.bits()))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tre() -> TorusKnot {
        TorusKnot::new(2, 3).unwrap()
    }

    #[test]
    fn knot_validation() {
        assert!(TorusKnot::new(2, 4).is_err());
        assert!(TorusKnot::new(3, 9).is_err());
        assert!(TorusKnot::new(1, 3).is_err());
        assert!(TorusKnot::new(4, 5).is_ok());
    }

    #[test]
    fn alexander_trefoil_coefficients() {
        assert_eq!(alexander_coefficients(&tre()), vec![1, -1, 1]);
        let t35 = TorusKnot::new(3, 5).unwrap();
        assert_eq!(alexander_coefficients(&t35), vec![1, -1, 0, 1, -1, 1, 0, -1, 1]);
    }

    #[test]
    fn alexander_values() {
        let p = Precision::default();
        let one = Mpc::one(p.bits());
        assert!((alexander(&tre(), &one).unwrap() - 1.0).abs() < 1e-30);
        let two = Mpc::new(p.bits(), 2.0, 0.0);
        assert!((alexander(&tre(), &two).unwrap() - 1.5).abs() < 1e-30);
        let t = Mpc::new(p.bits(), 1.7, 0.3);
        let d1 = alexander(&tre(), &t).unwrap();
        let d2 = alexander(&tre(), &t.recip()).unwrap();
        assert!((d1 - d2).abs() < 1e-30);
        assert_eq!(alexander(&tre(), &Mpc::zero(64)), Err(Error::ZeroArgument));
    }

    #[test]
    fn pole_index_examples() {
        assert_eq!(pole_indices(&tre(), 6), vec![1, 5]);
        assert_eq!(pole_indices(&tre(), 12), vec![1, 5, 7, 11]);
        assert_eq!(pole_indices(&TorusKnot::new(3, 5).unwrap(), 5), vec![1, 2, 4]);
    }

    #[test]
    fn tau_near_zero_and_at_pole() {
        let p = Precision::default();
        let z = Mpc::zero(p.bits());
        assert!(tau(&tre(), &z, &p).unwrap().abs() < 1e-40);
        let pole = tre().poles().point(1, p.bits());
        assert_eq!(tau(&tre(), &pole, &p), Err(Error::PoleHit { k: 1 }));
    }

    #[test]
    fn tau_matches_alexander_form() {
        let p = Precision::default();
        let z = Mpc::new(p.bits(), 0.4, 0.0);
        let lhs = tau(&tre(), &z, &p).unwrap();
        let rhs = z.sinh() * 2.0 / alexander(&tre(), &(&z * 2.0).exp()).unwrap();
        assert!((&lhs - &rhs).abs() < 1e-28 * rhs.abs());
    }

    #[test]
    fn tau_at_removable_point() {
        // z = 2πi/6 has k = 2, divisible by a = 2
        let p = Precision::default();
        let k = tre();
        let z = k.poles().point(2, p.bits());
        let lhs = tau(&k, &z, &p).unwrap();
        let rhs = z.sinh() * 2.0 / alexander(&k, &(&z * 2.0).exp()).unwrap();
        assert!((&lhs - &rhs).abs() < 1e-25 * rhs.abs(), "{lhs:?} vs {rhs:?}");
    }

    #[test]
    fn residues_match_closed_form() {
        let p = Precision::with_digits(20).unwrap();
        let k = tre();
        let (r1, _) = tau_pole_laurent(&k, 1, 0, &p).unwrap();
        assert!((r1.re() - 3f64.sqrt() / 6.0).abs() < 1e-15 && r1.im().abs() < 1e-15);
        let (r5, _) = tau_pole_laurent(&k, 5, 0, &p).unwrap();
        assert!((r5.re() + 3f64.sqrt() / 6.0).abs() < 1e-15);
        assert!((tau_residue(&k, 5) + 3f64.sqrt() / 6.0).abs() < 1e-15);
    }

    #[test]
    fn even_derivatives_at_origin_vanish() {
        let p = Precision::with_digits(20).unwrap();
        let d = tau_even_derivatives(&tre(), &Mpc::zero(p.bits()), 2, &p).unwrap();
        for v in d {
            assert!(v.abs() < 1e-15);
        }
    }

    #[test]
    fn second_derivative_matches_finite_difference() {
        let p = Precision::with_digits(20).unwrap();
        let bits = p.bits();
        let z0 = Mpc::new(bits, 0.5, 0.0);
        let d = tau_even_derivatives(&tre(), &z0, 1, &p).unwrap();
        let t0 = tau(&tre(), &z0, &p).unwrap();
        assert!((&d[0] - &t0).abs() < 1e-15);
        let h = 1e-4;
        let fp = tau(&tre(), &(&z0 + h), &p).unwrap();
        let fm = tau(&tre(), &(&z0 - h), &p).unwrap();
        let fd = (fp + fm - t0 * 2.0) / (h * h);
        assert!((&d[1] - &fd).abs() < 1e-6 * d[1].abs());
    }

    #[test]
    fn kt_coefficients_low_orders() {
        let p = Precision::with_digits(20).unwrap();
        // frozen from a symbolic Taylor expansion of z·τ(z)
        let expected = [
            ((2, 3), [0.0, 4.0, -184.0, 20172.0, -4120688.0]),
            ((2, 5), [0.0, 4.0, -568.0, 175692.0, -99883376.0]),
            ((3, 5), [0.0, 4.0, -1528.0, 1128972.0, -1469002736.0]),
        ];
        for ((a, b), want) in expected {
            let got = kt_coefficients(&TorusKnot::new(a, b).unwrap(), 4, &p).unwrap();
            assert!(got[0].abs() < 1e-12);
            for l in 1..5 {
                assert!((&got[l] - want[l]).abs() < 1e-14 * want[l].abs(), "({a},{b}) l={l}: {:?}", got[l]);
            }
        }
    }

    #[test]
    fn oddness_and_half_period() {
        let p = Precision::default();
        let k = tre();
        for i in 0..20 {
            let z = Mpc::new(p.bits(), -0.9 + 0.09 * i as f64, 0.37 - 0.05 * i as f64);
            let f = tau(&k, &z, &p).unwrap();
            assert_eq!(tau(&k, &(-&z), &p).unwrap(), -&f);
            let shifted = tau(&k, &(&z + &Mpc::pi_i(p.bits())), &p).unwrap();
            assert!((shifted + &f).abs() < 1e-28 * f.abs());
        }
    }
}
