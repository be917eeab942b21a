//! Combinatorics of the SL(2;ℂ) character variety of T(a,b).
//!
//! Irreducible components are labelled by (α, β) with 1 ≤ α ≤ a−1,
//! 1 ≤ β ≤ b−1, α ≡ β (mod 2); each is hit by exactly two indices k in
//! [1, ab−1] with a∤k, b∤k.

use num_integer::Integer;

use crate::error::{Error, Result};
use crate::mp::Mpc;
use crate::torus::TorusKnot;

/// A valid index k with its component and CRT pair.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct RepIndex {
    pub knot: TorusKnot,
    pub k: i64,
    pub alpha: i64,
    pub beta: i64,
    pub k1: i64,
    pub k2: i64,
}

impl RepIndex {
    pub fn new(knot: &TorusKnot, k: i64) -> Result<Self> {
        let (alpha, beta) = alpha_beta_from_k(knot, k)?;
        let (k1, k2) = k_pair_from_alpha_beta(knot, alpha, beta)?;
        Ok(RepIndex { knot: *knot, k, alpha, beta, k1, k2 })
    }
}

/// Indices k in [1, ab−1] with a∤k and b∤k, ascending.
pub fn valid_indices(knot: &TorusKnot) -> Vec<i64> {
    (1..knot.ab()).filter(|&k| knot.poles().contains_index(k)).collect()
}

pub fn alpha_beta_from_k(knot: &TorusKnot, k: i64) -> Result<(i64, i64)> {
    let (a, b) = (knot.a(), knot.b());
    if k < 1 || k % a == 0 || k % b == 0 {
        return Err(Error::InvalidK { k });
    }
    let alpha = k.rem_euclid(a);
    let beta_prime = k.rem_euclid(b);
    // b is odd, so exactly one of β′ and b − β′ matches the parity of α
    let beta = if (beta_prime - alpha).rem_euclid(2) == 0 { beta_prime } else { b - beta_prime };
    Ok((alpha, beta))
}

fn check_component(knot: &TorusKnot, alpha: i64, beta: i64) -> Result<()> {
    if !(1..knot.a()).contains(&alpha) || !(1..knot.b()).contains(&beta) {
        return Err(Error::InvalidComponent { alpha, beta });
    }
    if (alpha - beta).rem_euclid(2) != 0 {
        return Err(Error::ParityViolation { alpha, beta });
    }
    Ok(())
}

/// x ≡ r (mod a), x ≡ s (mod b), normalized to [0, ab).
pub fn crt(a: i64, r: i64, b: i64, s: i64) -> i64 {
    let eg = a.extended_gcd(&b);
    debug_assert_eq!(eg.gcd, 1);
    let m = a * b;
    // x = r + a·((s − r)·a⁻¹ mod b)
    let t = ((s - r).rem_euclid(b) as i128 * eg.x.rem_euclid(b) as i128).rem_euclid(b as i128) as i64;
    (r + a * t).rem_euclid(m)
}

/// (k₁, k₂) with k₁ ≡ α (mod a), k₁ ≡ −β (mod b), k₂ ≡ α (mod a), k₂ ≡ β (mod b).
pub fn k_pair_from_alpha_beta(knot: &TorusKnot, alpha: i64, beta: i64) -> Result<(i64, i64)> {
    check_component(knot, alpha, beta)?;
    let (a, b) = (knot.a(), knot.b());
    Ok((crt(a, alpha, b, -beta), crt(a, alpha, b, beta)))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Component {
    pub alpha: i64,
    pub beta: i64,
    pub preimages: Vec<i64>,
}

/// The (a−1)(b−1)/2 components, ordered by (α, β), each with its two k.
pub fn enumerate_components(knot: &TorusKnot) -> Vec<Component> {
    let mut out: Vec<Component> = Vec::new();
    for k in valid_indices(knot) {
        let (alpha, beta) = alpha_beta_from_k(knot, k).expect("valid index");
        match out.iter_mut().find(|c| c.alpha == alpha && c.beta == beta) {
            Some(c) => c.preimages.push(k),
            None => out.push(Component { alpha, beta, preimages: vec![k] }),
        }
    }
    out.sort_by_key(|c| (c.alpha, c.beta));
    out
}

/// Traces of x and y under the reducible representation labelled by t:
/// (t^b + t^{−b}, t^a + t^{−a}).
pub fn reducible_traces(knot: &TorusKnot, t: &Mpc) -> Result<(Mpc, Mpc)> {
    if t.is_zero() {
        return Err(Error::ZeroArgument);
    }
    let tb = t.powi(knot.b() as i32);
    let ta = t.powi(knot.a() as i32);
    Ok((&tb + &tb.recip(), &ta + &ta.recip()))
}

/// v_k(u) = −ab(u + 2π√−1) + 2(k−1)π√−1.
pub fn v_k(knot: &TorusKnot, k: i64, u: &Mpc) -> Mpc {
    let bits = u.bits();
    let two_pi_i = Mpc::pi_i(bits) * 2.0;
    -((u + &two_pi_i) * knot.ab()) + Mpc::pi_i(bits) * (2 * (k - 1))
}

/// dS_k/dξ = (2kπ√−1 − abξ)/2.
pub fn ds_dxi(knot: &TorusKnot, k: i64, xi: &Mpc) -> Mpc {
    (Mpc::pi_i(xi.bits()) * (2 * k) - &(xi * knot.ab())) / 2.0
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::asymptotics::s_k;
    use std::f64::consts::PI;

    fn knot(a: i64, b: i64) -> TorusKnot {
        TorusKnot::new(a, b).unwrap()
    }

    #[test]
    fn alpha_beta_examples() {
        assert_eq!(alpha_beta_from_k(&knot(2, 3), 1).unwrap(), (1, 1));
        assert_eq!(alpha_beta_from_k(&knot(2, 3), 5).unwrap(), (1, 1));
        assert_eq!(alpha_beta_from_k(&knot(3, 5), 2).unwrap(), (2, 2));
        assert_eq!(alpha_beta_from_k(&knot(2, 3), 3), Err(Error::InvalidK { k: 3 }));
    }

    #[test]
    fn k_pair_examples() {
        assert_eq!(k_pair_from_alpha_beta(&knot(2, 3), 1, 1).unwrap(), (5, 1));
        assert_eq!(k_pair_from_alpha_beta(&knot(3, 5), 1, 1).unwrap(), (4, 1));
        assert_eq!(
            k_pair_from_alpha_beta(&knot(3, 5), 1, 2),
            Err(Error::ParityViolation { alpha: 1, beta: 2 })
        );
    }

    #[test]
    fn round_trip_and_partner() {
        for kn in TorusKnot::all_with_ab_at_most(35) {
            let (a, b) = (kn.a(), kn.b());
            for k in valid_indices(&kn) {
                let r = RepIndex::new(&kn, k).unwrap();
                let mut pair = [r.k1, r.k2];
                pair.sort();
                let mut want = [k, crt(a, k.rem_euclid(a), b, (-k).rem_euclid(b))];
                want.sort();
                assert_eq!(pair, want, "{kn:?} k={k}");
                for kk in pair {
                    assert_eq!(alpha_beta_from_k(&kn, kk).unwrap(), (r.alpha, r.beta));
                }
            }
        }
    }

    #[test]
    fn component_counts() {
        let c = enumerate_components(&knot(2, 3));
        assert_eq!(c, vec![Component { alpha: 1, beta: 1, preimages: vec![1, 5] }]);
        assert_eq!(enumerate_components(&knot(2, 5)).len(), 2);
        let c35 = enumerate_components(&knot(3, 5));
        assert_eq!(c35.len(), 4);
        assert!(c35.iter().all(|c| c.preimages.len() == 2));
    }

    #[test]
    fn traces() {
        let bits = 128;
        let (x, y) = reducible_traces(&knot(2, 3), &Mpc::one(bits)).unwrap();
        assert!((x - 2.0).abs() < 1e-30 && (y - 2.0).abs() < 1e-30);
        let t = (Mpc::pi_i(bits) * 5i64 / 6i64).exp();
        let (x, _) = reducible_traces(&knot(2, 3), &t).unwrap();
        assert!(x.abs() < 1e-30);
        let t = Mpc::new(bits, 0.7, 0.4);
        let (x1, y1) = reducible_traces(&knot(3, 5), &t).unwrap();
        let (x2, y2) = reducible_traces(&knot(3, 5), &t.recip()).unwrap();
        assert!((x1 - x2).abs() < 1e-30 && (y1 - y2).abs() < 1e-30);
    }

    #[test]
    fn v_k_examples() {
        let bits = 128;
        let k = knot(2, 3);
        let v = v_k(&k, 1, &Mpc::zero(bits));
        assert!((v.im() + 12.0 * PI).abs() < 1e-13 && v.re() == 0.0);
        let u = Mpc::new(bits, 0.3, 0.1);
        let slope = (v_k(&k, 2, &(&u + 1e-3)) - v_k(&k, 2, &u)) / 1e-3;
        assert!((slope + 6.0).abs() < 1e-20);
        // v_k(u) = 2 S_k'(ξ) − 2π√−1 at ξ = u + 2π√−1, S′ by central differences
        let xi = &u + &(Mpc::pi_i(bits) * 2.0);
        let h = 1e-8;
        let fd = (s_k(&k, 2, &(&xi + h)) - s_k(&k, 2, &(&xi - h))) / (2.0 * h);
        let lhs = v_k(&k, 2, &u);
        let rhs = fd * 2.0 - Mpc::pi_i(bits) * 2.0;
        assert!((&lhs - &rhs).abs() < 1e-12);
        let exact = ds_dxi(&k, 2, &xi) * 2.0 - Mpc::pi_i(bits) * 2.0;
        assert!((lhs - exact).abs() < 1e-30);
    }

    #[test]
    fn sin_squared_invariance() {
        for (a, b) in [(2, 3), (2, 5), (3, 5), (3, 7)] {
            let kn = knot(a, b);
            for k in valid_indices(&kn) {
                let (al, be) = alpha_beta_from_k(&kn, k).unwrap();
                let f = |x: i64, y: i64| {
                    let s = (x as f64 * PI / a as f64).sin();
                    let t = (y as f64 * PI / b as f64).sin();
                    s * s * t * t
                };
                assert!((f(al, be) - f(k, k)).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn crt_small() {
        assert_eq!(crt(2, 1, 3, 2), 5);
        assert_eq!(crt(3, 1, 5, 4), 4);
        assert_eq!(crt(7, 3, 11, 0), 66);
    }
}
