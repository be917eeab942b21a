//! Figure-eight knot E: the eigenvalue curve, its torsions, and a numerical
//! harness comparing J_N(E; e^{ξ/N}) against a conjectural limit.

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::jones::unknot_bracket;
use crate::mp::Mpc;
use crate::precision::Precision;

/// Which root of the A-polynomial in ℓ: `Plus` is ℓ(m), `Minus` is ℓ(m)⁻¹.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Branch {
    Plus,
    Minus,
}

#[derive(Clone, Debug)]
pub struct MeridianParam {
    m: Mpc,
    sqrt_disc: Mpc,
}

impl MeridianParam {
    pub fn new(m: Mpc) -> Result<Self> {
        if m.is_zero() {
            return Err(Error::ZeroArgument);
        }
        let sqrt_disc = disc(&m).sqrt();
        Ok(MeridianParam { m, sqrt_disc })
    }

    pub fn from_c64(m: Complex64, p: &Precision) -> Result<Self> {
        Self::new(Mpc::from_c64(p.bits(), m))
    }

    pub fn m(&self) -> &Mpc {
        &self.m
    }

    pub fn sqrt_disc(&self) -> &Mpc {
        &self.sqrt_disc
    }
}

/// (m + m⁻¹ + 1)(m + m⁻¹ − 3).
fn disc(m: &Mpc) -> Mpc {
    let w = m + &m.recip();
    (&w + 1.0) * (&w - 3.0)
}

fn quartic(m: &Mpc) -> Mpc {
    let mi = m.recip();
    m.sqr() - m - 2.0 - &mi + &mi.sqr()
}

pub fn ell(mp: &MeridianParam, branch: Branch) -> Mpc {
    let m = &mp.m;
    let l = quartic(m) / 2.0 + &((m - &m.recip()) / 2.0 * &mp.sqrt_disc);
    match branch {
        Branch::Plus => l,
        Branch::Minus => l.recip(),
    }
}

/// ℓ − (m²−m−2−m⁻¹+m⁻²) + ℓ⁻¹.
pub fn a_poly_residual(m: &Mpc, l: &Mpc) -> Result<Mpc> {
    if m.is_zero() || l.is_zero() {
        return Err(Error::ZeroArgument);
    }
    Ok(l - &quartic(m) + &l.recip())
}

/// dℓ/dm = (2m − 1 + m⁻² − 2m⁻³)/(1 − ℓ⁻²), valid on either branch.
pub fn dell_dm(mp: &MeridianParam, branch: Branch) -> Result<Mpc> {
    let m = &mp.m;
    let l = ell(mp, branch);
    let den = Mpc::one(m.bits()) - &l.sqr().recip();
    if den.abs() < 1e-30 {
        return Err(Error::DegenerateDiscriminant);
    }
    let mi = m.recip();
    let num = m * 2.0 - 1.0 + &mi.sqr() - &(mi.powi(3) * 2.0);
    Ok(num / &den)
}

/// 𝕋_λ^E = 1/(2m + 2m⁻¹ − 1).
pub fn torsion_lambda_e(mp: &MeridianParam) -> Result<Mpc> {
    let den = (&mp.m + &mp.m.recip()) * 2.0 - 1.0;
    if den.abs() < 1e-30 {
        return Err(Error::DegenerateDenominator);
    }
    Ok(den.recip())
}

/// Deviation between (2m+2m⁻¹−1)² and 17 + 4(ℓ + ℓ⁻¹), and the sign s with
/// 1/√(17+4Tr) = s·𝕋_λ^E for the principal square root.
pub fn torsion_lambda_cross_check(mp: &MeridianParam) -> Result<(f64, i32)> {
    let t = torsion_lambda_e(mp)?;
    let l = ell(mp, Branch::Plus);
    let trace_form = (&l + &l.recip()) * 4.0 + 17.0;
    let square = t.recip().sqr();
    let dev = (&trace_form - &square).abs() / square.abs().max(1.0);
    let other = trace_form.sqrt().recip();
    let sign = if (&other - &t).abs() <= (&other + &t).abs() { 1 } else { -1 };
    Ok((dev, sign))
}

#[derive(Clone, Debug)]
pub struct TorsionMuE {
    /// ±2/√((m+m⁻¹+1)(m+m⁻¹−3)), sign following the branch.
    pub value: Mpc,
    /// (2m ℓ′/ℓ)·𝕋_λ^E computed through dℓ/dm.
    pub chain: Mpc,
    pub chain_deviation: f64,
}

pub fn torsion_mu_e(mp: &MeridianParam, branch: Branch) -> Result<TorsionMuE> {
    if mp.sqrt_disc.abs() < 1e-30 {
        return Err(Error::DegenerateDiscriminant);
    }
    let l = ell(mp, branch);
    let dv_du = &mp.m * 2.0 * &dell_dm(mp, branch)? / &l;
    let chain = dv_du * &torsion_lambda_e(mp)?;
    let closed = mp.sqrt_disc.recip() * 2.0;
    let value = if (&chain - &closed).abs() <= (&chain + &closed).abs() { closed } else { -closed };
    let chain_deviation = (&chain - &value).abs() / value.abs();
    Ok(TorsionMuE { value, chain, chain_deviation })
}

/// Δ(E; t) = −t + 3 − t⁻¹.
pub fn alexander_e(t: &Mpc) -> Result<Mpc> {
    if t.is_zero() {
        return Err(Error::ZeroArgument);
    }
    Ok(-t.clone() + 3.0 - &t.recip())
}

/// J_N(E; e^{ξ/N}) = Σ_{n<N} Π_{k≤n} 4 sinh(ξ(N+k)/(2N)) sinh(ξ(N−k)/(2N)).
pub fn jones_fig8(n: u64, xi: &Mpc, p: &Precision) -> Result<Mpc> {
    if n == 0 {
        return Err(Error::InvalidXi("N must be positive".into()));
    }
    let bits = p.bits().max(xi.bits()) + 64;
    let xi = xi.with_bits(bits);
    let two_n = 2 * n as i64;
    let mut term = Mpc::one(bits);
    let mut sum = Mpc::one(bits);
    for k in 1..n as i64 {
        let plus = (&xi * (n as i64 + k) / two_n).sinh();
        let minus = (&xi * (n as i64 - k) / two_n).sinh();
        term = term * &plus * &minus * 4.0;
        sum += &term;
    }
    Ok(sum.with_bits(p.bits()))
}

#[derive(Clone, Debug, Serialize)]
pub struct SpeculationRow {
    pub n: u64,
    pub log10_abs_lhs: f64,
    pub log10_residual: f64,
    pub log10_residual_nu_one: f64,
    /// J_N·2sinh(ξ/2)/ν divided by the subtracted growth term.
    pub leading_ratio: Complex64,
}

#[derive(Clone, Debug, Serialize)]
pub struct SpeculationTable {
    pub xi: Complex64,
    pub branch: Branch,
    /// Richardson estimate of H(u)/ξ, determined modulo 2π√−1.
    pub h_over_xi: Complex64,
    pub h_uncertainty: f64,
    pub target: Complex64,
    pub rows: Vec<SpeculationRow>,
}

/// d_N = log(J_{N+1}/J_N) − ½log((N+1)/N), which tends to H/ξ like N⁻².
fn growth_rate(n: u64, xi: &Mpc, p: &Precision) -> Result<Mpc> {
    let j0 = jones_fig8(n, xi, p)?;
    let j1 = jones_fig8(n + 1, xi, p)?;
    let shift = ((n + 1) as f64 / n as f64).ln() / 2.0;
    Ok((&j1 / &j0).ln() - shift)
}

/// Richardson table on d_N with error expansion in powers of 1/N starting
/// at 1/N². Returns the estimate and the last two levels' spread.
fn richardson(ns: &[u64], values: &[Mpc]) -> (Mpc, f64) {
    let mut level: Vec<Mpc> = values.to_vec();
    let mut prev_best = level.last().cloned().expect("non-empty");
    let mut spread = f64::INFINITY;
    for order in 2..(ns.len() as i32 + 1) {
        if level.len() < 2 {
            break;
        }
        let offset = ns.len() - level.len();
        let next: Vec<Mpc> = (0..level.len() - 1)
            .map(|i| {
                let r = (ns[offset + i + 1] as f64 / ns[offset + i] as f64).powi(order);
                (&level[i + 1] * r - &level[i]) / (r - 1.0)
            })
            .collect();
        let best = next.last().cloned().expect("non-empty");
        spread = (&best - &prev_best).abs();
        prev_best = best;
        level = next;
    }
    (prev_best, spread)
}

/// Rows of the bracket J_N·2sinh(ξ/2)/ν(ξ/N) − √−π e^{HN/ξ}(N/ξ)^{1/2}√𝕋_μ^E
/// against 2sinh(ξ/2)/Δ(E; e^ξ), with m = e^u, u = ξ − 2π√−1.
pub fn speculation_residual(xi: Complex64, ns: &[u64], branch: Branch, p: &Precision) -> Result<SpeculationTable> {
    if ns.len() < 3 {
        return Err(Error::ExtrapolationUnstable { spread: f64::INFINITY });
    }
    let bits = p.bits();
    let x = Mpc::from_c64(bits, xi);
    let rates = ns.iter().map(|&n| growth_rate(n, &x, p)).collect::<Result<Vec<_>>>()?;
    let (h, spread) = richardson(ns, &rates);
    if !spread.is_finite() || spread > 1e-3 * h.abs().max(1.0) {
        return Err(Error::ExtrapolationUnstable { spread });
    }
    let u = &x - &(Mpc::pi_i(bits) * 2.0);
    let mp = MeridianParam::new(u.exp())?;
    let sqrt_t = torsion_mu_e(&mp, branch)?.value.sqrt();
    let two_sinh = (&x / 2.0).sinh() * 2.0;
    let target = &two_sinh / &alexander_e(&x.exp())?;
    let sqrt_minus_pi = Mpc::pi(bits).sqrt().mul_i();
    let rows = ns
        .iter()
        .map(|&n| {
            let j = jones_fig8(n, &x, p)?;
            let (_, nu) = unknot_bracket(n, &x)?;
            let n_over_xi = Mpc::from_int(bits, n as i64) / &x;
            let growth = (&h * n as i64).exp() * &n_over_xi.sqrt() * &sqrt_minus_pi * &sqrt_t;
            let scaled = &j * &two_sinh;
            let main = &scaled / &nu;
            let lhs = &main - &growth;
            let lhs_nu_one = &scaled - &growth;
            let log10 = |z: Mpc| z.ln_abs() / std::f64::consts::LN_10;
            Ok(SpeculationRow {
                n,
                log10_abs_lhs: log10(lhs.clone()),
                log10_residual: log10(&lhs - &target),
                log10_residual_nu_one: log10(&lhs_nu_one - &target),
                leading_ratio: (&main / &growth).to_c64(),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(SpeculationTable { xi, branch, h_over_xi: h.to_c64(), h_uncertainty: spread, target: target.to_c64(), rows })
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn prec() -> Precision {
        Precision::default()
    }

    fn param(re: f64, im: f64) -> MeridianParam {
        MeridianParam::from_c64(Complex64::new(re, im), &prec()).unwrap()
    }

    fn samples() -> Vec<MeridianParam> {
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        (0..20)
            .map(|_| {
                let th: f64 = rng.gen_range(0.1..6.2);
                param(1.3 * th.cos(), 1.3 * th.sin())
            })
            .collect()
    }

    #[test]
    fn ell_examples() {
        let l = ell(&param(1.0, 0.0), Branch::Plus);
        assert!((l.to_c64() - Complex64::new(-1.0, 0.0)).norm() < 1e-30);
        for mp in samples() {
            for br in [Branch::Plus, Branch::Minus] {
                let r = a_poly_residual(mp.m(), &ell(&mp, br)).unwrap();
                assert!(r.abs() < 1e-25);
            }
            let prod = ell(&mp, Branch::Plus) * &ell_other_root(&mp);
            assert!((prod - 1.0).abs() < 1e-25);
        }
    }

    fn ell_other_root(mp: &MeridianParam) -> Mpc {
        let m = mp.m();
        quartic(m) / 2.0 - &((m - &m.recip()) / 2.0 * mp.sqrt_disc())
    }

    #[test]
    fn a_poly_examples() {
        let bits = prec().bits();
        let one = Mpc::one(bits);
        assert!(a_poly_residual(&one, &(-one.clone())).unwrap().abs() < 1e-30);
        assert!((a_poly_residual(&one, &one).unwrap() - 4.0).abs() < 1e-30);
    }

    #[test]
    fn torsion_lambda_examples() {
        let t = torsion_lambda_e(&param(1.0, 0.0)).unwrap();
        assert!((t - &Mpc::from_ratio(prec().bits(), 1, 3)).abs() < 1e-30);
        let t = torsion_lambda_e(&param(2.0, 0.0)).unwrap();
        assert!((t - 0.25).abs() < 1e-30);
        let (dev, sign) = torsion_lambda_cross_check(&param(1.0, 0.0)).unwrap();
        assert!(dev < 1e-28 && sign == 1);
        for mp in samples() {
            assert!(torsion_lambda_cross_check(&mp).unwrap().0 < 1e-25);
        }
    }

    #[test]
    fn torsion_mu_examples() {
        let mu = torsion_mu_e(&param(1.0, 0.0), Branch::Plus);
        // at m = 1, ℓ = −1 makes dℓ/dm singular; only the closed form is defined
        assert!(mu.is_err() || (mu.unwrap().value.abs() - 2.0 / 3f64.sqrt()).abs() < 1e-12);
        for mp in samples() {
            for br in [Branch::Plus, Branch::Minus] {
                let mu = torsion_mu_e(&mp, br).unwrap();
                assert!(mu.chain_deviation < 1e-20, "{}", mu.chain_deviation);
            }
        }
    }

    #[test]
    fn derivative_against_finite_difference() {
        let bits = prec().bits();
        let mp = param(1.5, 0.0);
        let h = 1e-12;
        let fwd = ell(&MeridianParam::new(mp.m() + h).unwrap(), Branch::Plus);
        let bwd = ell(&MeridianParam::new(mp.m() - h).unwrap(), Branch::Plus);
        let fd = (fwd - bwd) / (2.0 * h);
        let d = dell_dm(&mp, Branch::Plus).unwrap();
        assert!((fd - &d).abs() < 1e-8 * d.abs(), "{bits}");
    }

    #[test]
    fn alexander_normalized() {
        let one = Mpc::one(128);
        assert!((alexander_e(&one).unwrap() - 1.0).abs() < 1e-30);
    }

    #[test]
    fn jones_small_cases() {
        let p = prec();
        let xi = Mpc::new(p.bits(), 0.7, 0.2);
        assert!((jones_fig8(1, &xi, &p).unwrap() - 1.0).abs() < 1e-30);
        // J_2(E; q) = q⁻² − q⁻¹ + 1 − q + q²
        let q = (&xi / 2.0).exp();
        let want = q.powi(-2) - &q.recip() + 1.0 - &q + &q.sqr();
        assert!((jones_fig8(2, &xi, &p).unwrap() - want).abs() < 1e-28);
    }

    #[test]
    fn small_xi_tends_to_inverse_alexander() {
        let p = prec();
        let xi = Mpc::new(p.bits(), 0.5, 0.0);
        let target = alexander_e(&xi.exp()).unwrap().recip();
        let r = |n| (jones_fig8(n, &xi, &p).unwrap() - &target).abs();
        assert!(r(400) < r(100) / 3.0);
    }
}
