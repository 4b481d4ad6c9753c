//! Catalog of closed-form laws: classical/free/Boolean stable families,
//! Cauchy, the upper-triangular-Gaussian spectral law DH_r, free Bessel,
//! ν_α, μ_{α,β}, λ_{α,ρ}, Marchenko–Pastur, point masses.

use crate::error::{Error, Result};
use crate::measures::{arg_lower, GridDensity};
use crate::specfun;
use crate::Complex;
use std::f64::consts::PI;

/// Stability index α and asymmetry ρ ranging over the admissible set:
/// α ∈ (0,1] with ρ ∈ [0,1], or α ∈ (1,2] with ρ ∈ [1−1/α, 1/α].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AdmissiblePair {
    alpha: f64,
    rho: f64,
}

impl AdmissiblePair {
    pub fn new(alpha: f64, rho: f64) -> Result<Self> {
        let ok = if alpha > 0.0 && alpha <= 1.0 {
            (0.0..=1.0).contains(&rho)
        } else if alpha > 1.0 && alpha <= 2.0 {
            rho >= 1.0 - 1.0 / alpha - 1e-12 && rho <= 1.0 / alpha + 1e-12
        } else {
            false
        };
        if !ok {
            return Err(Error::domain(format!(
                "(α, ρ) = ({alpha}, {rho}) not admissible: need α ∈ (0,1], ρ ∈ [0,1] or α ∈ (1,2], ρ ∈ [1−1/α, 1/α]"
            )));
        }
        Ok(Self { alpha, rho })
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn rho(&self) -> f64 {
        self.rho
    }
}

/// A distribution known in closed form.
#[derive(Debug, Clone, PartialEq)]
pub enum KnownLaw {
    ClassicalStable { pair: AdmissiblePair },
    FreeStable { pair: AdmissiblePair },
    BooleanStable { pair: AdmissiblePair, r: f64 },
    Cauchy { beta: f64, gamma: f64 },
    Semicircle,
    DykemaHaagerup { r: f64 },
    FreeBessel { r: f64, s: f64 },
    NuAlpha { alpha: f64 },
    MuAlphaBeta { alpha: f64, beta: f64 },
    LambdaFreeStable { pair: AdmissiblePair },
    MarchenkoPastur,
    PointMass { a: f64 },
    TwoPoint { a: f64, b: f64, w: f64 },
}

impl KnownLaw {
    pub fn validate(&self) -> Result<()> {
        match *self {
            KnownLaw::BooleanStable { r, .. } if !(r > 0.0) => {
                Err(Error::domain("BooleanStable: r must be positive"))
            }
            KnownLaw::Cauchy { gamma, .. } if gamma < 0.0 => {
                Err(Error::domain("Cauchy: γ must be nonnegative"))
            }
            KnownLaw::DykemaHaagerup { r } if r < 0.0 => {
                Err(Error::domain("DykemaHaagerup: r must be nonnegative"))
            }
            KnownLaw::FreeBessel { r, s } if r < 0.0 || s < 0.0 || r.max(s) < 1.0 => {
                Err(Error::domain("FreeBessel: need r, s ≥ 0 and max(r, s) ≥ 1"))
            }
            KnownLaw::NuAlpha { alpha } if !(alpha > 1.0 && alpha <= 2.0) => {
                Err(Error::domain("NuAlpha: α must be in (1, 2]"))
            }
            KnownLaw::MuAlphaBeta { alpha, beta } if alpha < 0.0 || beta < 0.0 => {
                Err(Error::domain("MuAlphaBeta: α, β must be nonnegative"))
            }
            KnownLaw::TwoPoint { a, b, w } if a == b || !(w > 0.0 && w < 1.0) => {
                Err(Error::domain("TwoPoint: need a ≠ b and w ∈ (0,1)"))
            }
            _ => Ok(()),
        }
    }

    /// Whether the law is ⊠-infinitely divisible on (0, ∞), i.e. has a
    /// Pick-type analytic logarithm v with Σ = e^v.
    pub fn is_boxtimes_id(&self) -> bool {
        match *self {
            KnownLaw::MarchenkoPastur | KnownLaw::NuAlpha { .. } | KnownLaw::MuAlphaBeta { .. } => {
                true
            }
            KnownLaw::PointMass { a } => a > 0.0,
            // π(r, s) embeds iff s = 1, or r ≥ 1 and s > 1
            KnownLaw::FreeBessel { r, s } => s == 1.0 || (r >= 1.0 && s > 1.0),
            // positive Boolean stable laws (ρ = 1, index < 1)
            KnownLaw::BooleanStable { pair, .. } => pair.rho == 1.0 && pair.alpha < 1.0,
            _ => false,
        }
    }
}

fn ln_upper(z: Complex) -> Complex {
    // principal log with negative reals read as the limit from above
    if z.im == 0.0 && z.re < 0.0 {
        Complex::new(z.norm().ln(), PI)
    } else {
        z.ln()
    }
}

impl KnownLaw {
    /// Closed-form Cauchy transform, where one exists.
    pub fn cauchy_transform(&self, z: Complex) -> Result<Complex> {
        match *self {
            KnownLaw::PointMass { a } => {
                if z.im == 0.0 && z.re == a {
                    return Err(Error::Boundary("cauchy_transform at the atom".into()));
                }
                Ok(1.0 / (z - a))
            }
            KnownLaw::TwoPoint { a, b, w } => {
                if z.im == 0.0 && (z.re == a || z.re == b) {
                    return Err(Error::Boundary("cauchy_transform at an atom".into()));
                }
                Ok(w / (z - a) + (1.0 - w) / (z - b))
            }
            KnownLaw::Cauchy { beta, gamma } => {
                if z.im > 0.0 {
                    Ok(1.0 / (z - beta + Complex::i() * gamma))
                } else if z.im < 0.0 {
                    Ok(1.0 / (z - beta - Complex::i() * gamma))
                } else {
                    Err(Error::Boundary("cauchy_transform: Cauchy law has full support".into()))
                }
            }
            KnownLaw::Semicircle => {
                if z.im == 0.0 && z.re.abs() <= 2.0 {
                    return Err(Error::Boundary("cauchy_transform inside [-2, 2]".into()));
                }
                Ok((z - (z - 2.0).sqrt() * (z + 2.0).sqrt()) / 2.0)
            }
            KnownLaw::MarchenkoPastur => {
                if z.im == 0.0 && (0.0..=4.0).contains(&z.re) {
                    return Err(Error::Boundary("cauchy_transform inside [0, 4]".into()));
                }
                Ok((z - z.sqrt() * (z - 4.0).sqrt()) / (2.0 * z))
            }
            KnownLaw::BooleanStable { .. } => {
                let f = self.f_transform_closed(z).unwrap();
                Ok(1.0 / f)
            }
            _ => Err(Error::domain(
                "no closed-form Cauchy transform for this law; materialize a grid first",
            )),
        }
    }

    /// Closed-form F-transform, where more direct than 1/G.
    pub fn f_transform_closed(&self, z: Complex) -> Option<Complex> {
        match *self {
            KnownLaw::BooleanStable { pair, r } => {
                // F(z) = z + r e^{iαρπ} z^{1−α} on C^+, conjugate-symmetric below
                let phase = Complex::from_polar(r, pair.alpha * pair.rho * PI);
                if z.im >= 0.0 {
                    Some(z + phase * z.powf(1.0 - pair.alpha))
                } else {
                    let zc = z.conj();
                    Some((zc + phase * zc.powf(1.0 - pair.alpha)).conj())
                }
            }
            KnownLaw::Cauchy { beta, gamma } => {
                if z.im > 0.0 {
                    Some(z - beta + Complex::i() * gamma)
                } else if z.im < 0.0 {
                    Some(z - beta - Complex::i() * gamma)
                } else {
                    None
                }
            }
            KnownLaw::PointMass { a } => Some(z - a),
            _ => None,
        }
    }

    /// Closed-form η-transform on the lower half-plane and (−∞, 0).
    pub fn eta_transform_closed(&self, z: Complex) -> Option<Complex> {
        match *self {
            KnownLaw::PointMass { a } => Some(a * z),
            KnownLaw::BooleanStable { pair, r } => {
                // η(z) = −r e^{iαρπ} z^α, branch continued from below
                let phase = Complex::from_polar(r, pair.alpha * pair.rho * PI);
                let zp = (Complex::new(z.norm().ln(), arg_lower(z)) * pair.alpha).exp();
                Some(-phase * zp)
            }
            KnownLaw::MarchenkoPastur => {
                // η(z) = (1 − sqrt(1 − 4z))/2; principal branch is correct on
                // the lower half-plane and the negative axis
                Some((1.0 - (1.0 - 4.0 * z).sqrt()) / 2.0)
            }
            _ => None,
        }
    }

    /// Mellin moment ∫ x^γ dμ in closed form, where known.
    pub fn mellin_moment(&self, gamma: f64) -> Result<f64> {
        match *self {
            KnownLaw::PointMass { a } => {
                if a <= 0.0 {
                    return Err(Error::domain("mellin_moment: point mass not in (0, ∞)"));
                }
                Ok(a.powf(gamma))
            }
            KnownLaw::TwoPoint { a, b, w } => {
                if a <= 0.0 || b <= 0.0 {
                    return Err(Error::domain("mellin_moment: atoms not in (0, ∞)"));
                }
                Ok(w * a.powf(gamma) + (1.0 - w) * b.powf(gamma))
            }
            KnownLaw::DykemaHaagerup { r } => {
                if gamma == 0.0 {
                    return Ok(1.0);
                }
                if gamma < 0.0 {
                    return Err(Error::Divergence("DH_r has no negative Mellin moments".into()));
                }
                // γ^{rγ} / Γ(2 + rγ)
                let ln = r * gamma * gamma.ln() - specfun::log_gamma(2.0 + r * gamma)?;
                Ok(ln.exp())
            }
            KnownLaw::MarchenkoPastur => {
                if gamma <= -0.5 {
                    return Err(Error::Divergence("MP Mellin moment diverges for γ ≤ −1/2".into()));
                }
                let ln = specfun::log_gamma(2.0 * gamma + 1.0)?
                    - specfun::log_gamma(gamma + 2.0)?
                    - specfun::log_gamma(gamma + 1.0)?;
                Ok(ln.exp())
            }
            _ => Err(Error::domain("no closed-form Mellin moment; materialize a grid first")),
        }
    }
}

/// Density of the Boolean stable law b_{α,ρ,r} at x ≠ 0.
pub fn boolean_stable_density(alpha: f64, rho: f64, r: f64, x: f64) -> Result<f64> {
    let pair = AdmissiblePair::new(alpha, rho)?;
    if !(r > 0.0) {
        return Err(Error::domain("boolean_stable_density: r must be positive"));
    }
    if x == 0.0 {
        return Err(Error::domain("boolean_stable_density: singular point x = 0"));
    }
    let (a, ax) = (pair.alpha, x.abs());
    let theta = if x > 0.0 { a * pair.rho * PI } else { a * (1.0 - pair.rho) * PI };
    let num = r * theta.sin() / PI * ax.powf(a - 1.0);
    let den = ax.powf(2.0 * a) + 2.0 * r * theta.cos() * ax.powf(a) + r * r;
    Ok((num / den).max(0.0))
}

/// Voiculescu transform of the free stable law f_{α,ρ} on the upper
/// half-plane: −e^{iαρπ} z^{1−α} for α ≠ 1, −iρπ − (1−2ρ) log z for α = 1.
pub fn free_stable_voiculescu(alpha: f64, rho: f64, z: Complex) -> Result<Complex> {
    let pair = AdmissiblePair::new(alpha, rho)?;
    if z.im <= 0.0 {
        return Err(Error::domain("free_stable_voiculescu: need Im z > 0"));
    }
    if (pair.alpha - 1.0).abs() < 1e-14 {
        Ok(-Complex::i() * pair.rho * PI - (1.0 - 2.0 * pair.rho) * z.ln())
    } else {
        Ok(-Complex::from_polar(1.0, pair.alpha * pair.rho * PI) * z.powf(1.0 - pair.alpha))
    }
}

/// Parametric density of the index-1 free stable law:
/// x(θ) = θ·cot θ + log(sin θ / θ), q(θ) = sin²θ/(πθ), θ ∈ (0, π).
pub fn free_stable_density_parametric(theta: f64) -> Result<(f64, f64)> {
    if !(theta > 0.0 && theta < PI) {
        return Err(Error::domain("free_stable_density_parametric: θ must be in (0, π)"));
    }
    let (s, c) = theta.sin_cos();
    let x = theta * c / s + (s / theta).ln();
    let q = s * s / (PI * theta);
    Ok((x, q))
}

/// Parametric density of DH₁: x(θ) = (sin θ/θ)e^{θ cot θ},
/// p(θ) = (sin θ/π)e^{−θ cot θ}, θ ∈ (0, π).
pub fn dh_density_parametric(theta: f64) -> Result<(f64, f64)> {
    if !(theta > 0.0 && theta < PI) {
        return Err(Error::domain("dh_density_parametric: θ must be in (0, π)"));
    }
    let (s, c) = theta.sin_cos();
    let tcot = theta * c / s;
    Ok(((s / theta) * tcot.exp(), (s / PI) * (-tcot).exp()))
}

/// The n-th moment of DH_r: n^{rn} / Γ(2 + rn), with 0^0 = 1.
pub fn dh_moment(r: f64, n: u32) -> Result<f64> {
    if r < 0.0 {
        return Err(Error::domain("dh_moment: r must be nonnegative"));
    }
    if n == 0 {
        return Ok(1.0);
    }
    let nf = n as f64;
    let ln = r * nf * nf.ln() - specfun::log_gamma(2.0 + r * nf)?;
    Ok(ln.exp())
}

/// Σ-transform together with its analytic logarithm v at a real z < 0, for
/// ⊠-infinitely divisible laws.
pub fn sigma_transform_of(law: &KnownLaw, z: f64) -> Result<(f64, f64)> {
    if !(z < 0.0) {
        return Err(Error::domain("sigma_transform_of: z must be negative"));
    }
    let v = v_function_of(law, Complex::new(z, 0.0))?;
    if v.im.abs() > 1e-9 {
        return Err(Error::Numeric(format!("sigma_transform_of: v not real at z = {z}")));
    }
    Ok((v.re.exp(), v.re))
}

/// Analytic logarithm v of Σ (Σ = e^v) on the left/lower region and, by
/// continuity from below, on the positive real axis.
pub fn v_function_of(law: &KnownLaw, z: Complex) -> Result<Complex> {
    if !law.is_boxtimes_id() {
        return Err(Error::NotBoxtimesId(format!("{law:?}")));
    }
    // interpret exactly-real positive z as the limit from the lower half-plane
    let z = if z.im == 0.0 && z.re > 0.0 { Complex::new(z.re, -1e-300) } else { z };
    match *law {
        KnownLaw::MarchenkoPastur => Ok(ln_upper(1.0 - z)),
        KnownLaw::PointMass { a } => Ok(Complex::new(-a.ln(), 0.0)),
        KnownLaw::FreeBessel { r, s } => {
            let main = r * ln_upper(1.0 - z);
            if s == 1.0 {
                Ok(main)
            } else {
                Ok(main - ln_upper(s + (1.0 - s) * z))
            }
        }
        KnownLaw::NuAlpha { alpha } => {
            // S(z) = e^{(−z)^{α−1}}, so v(z) = (z/(z−1))^{α−1}
            let w = z / (z - 1.0);
            Ok(w.powf(alpha - 1.0))
        }
        KnownLaw::MuAlphaBeta { alpha, beta } => {
            Ok(alpha * ln_upper(z / (z - 1.0)) + beta * ln_upper(1.0 - z))
        }
        KnownLaw::BooleanStable { pair, r } => {
            let c = (1.0 - pair.alpha) / pair.alpha;
            Ok(c * ln_upper(-z) - r.ln() / pair.alpha)
        }
        _ => unreachable!("is_boxtimes_id covered above"),
    }
}

/// S-transform S(w) = Σ(w/(1+w)) for laws on (0, ∞), at real w.
pub fn s_transform_of(law: &KnownLaw, w: f64) -> Result<f64> {
    match *law {
        KnownLaw::MarchenkoPastur => {
            if w <= -1.0 {
                return Err(Error::domain("s_transform: w ≤ −1"));
            }
            Ok(1.0 / (1.0 + w))
        }
        KnownLaw::PointMass { a } => Ok(1.0 / a),
        KnownLaw::FreeBessel { r, s } => {
            if w <= -s.min(1.0) {
                return Err(Error::domain("s_transform: w outside domain"));
            }
            Ok((1.0 + w).powf(1.0 - r) / (w + s))
        }
        KnownLaw::NuAlpha { alpha } => {
            if w >= 0.0 {
                return Err(Error::domain("s_transform: need w < 0"));
            }
            Ok((-w).powf(alpha - 1.0).exp())
        }
        KnownLaw::MuAlphaBeta { alpha, beta } => {
            if !(-1.0 < w && w < 0.0) {
                return Err(Error::domain("s_transform: need w ∈ (−1, 0)"));
            }
            Ok((-w).powf(alpha) / (1.0 + w).powf(beta))
        }
        KnownLaw::BooleanStable { pair, r } => {
            if !(pair.rho == 1.0 && pair.alpha < 1.0) {
                return Err(Error::NotBoxtimesId("BooleanStable with ρ ≠ 1".into()));
            }
            if !(-1.0 < w && w < 0.0) {
                return Err(Error::domain("s_transform: need w ∈ (−1, 0)"));
            }
            let c = (1.0 - pair.alpha) / pair.alpha;
            Ok((-w / (1.0 + w)).powf(c) * r.powf(-1.0 / pair.alpha))
        }
        KnownLaw::TwoPoint { a, b, w: wt } => {
            if a <= 0.0 || b <= 0.0 {
                return Err(Error::domain("s_transform: atoms not in (0, ∞)"));
            }
            if !(-1.0 < w && w < 0.0) {
                return Err(Error::domain("s_transform: need w ∈ (−1, 0)"));
            }
            let z = w / (1.0 + w);
            two_point_sigma(a, b, wt, z).map(|sig| sig)
        }
        _ => Err(Error::domain("no S-transform for this law")),
    }
}

/// Σ for a two-point law by monotone inversion of η on (−∞, 0).
fn two_point_sigma(a: f64, b: f64, w: f64, z: f64) -> Result<f64> {
    let eta = |x: f64| {
        // η(x) = 1 − x F(1/x), F = 1/G, G = w/(u−a) + (1−w)/(u−b) at u = 1/x
        let u = 1.0 / x;
        let g = w / (u - a) + (1.0 - w) / (u - b);
        1.0 - x / g
    };
    // bracket: η is increasing on (−∞,0) with range (−∞, 0)
    let (mut lo, mut hi) = (-1.0f64, -1e-12f64);
    while eta(lo) > z {
        lo *= 2.0;
        if lo < -1e12 {
            return Err(Error::domain("two_point_sigma: z below range"));
        }
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if eta(mid) < z {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let x = 0.5 * (lo + hi);
    Ok(x / z)
}

/// The ⊠-convolution power of the positive Boolean stable law:
/// b_α^{⊠t} = b_{α/(α+(1−α)t)}.
///
/// The index follows from Σ_{b_α}(z) = (−z)^{(1−α)/α} and
/// Σ_{μ^{⊠t}} = Σ_μ^t: the new index α_t satisfies
/// (1−α_t)/α_t = t·(1−α)/α. In particular α_t → 1 as t → 0 and the
/// rescaled powers approach the log-Cauchy regime.
pub fn boolean_stable_boxtimes_power(alpha: f64, t: f64) -> Result<KnownLaw> {
    if !(alpha > 0.0 && alpha < 1.0) {
        return Err(Error::domain("boolean_stable_boxtimes_power: α must be in (0,1)"));
    }
    if !(t > 0.0) {
        return Err(Error::domain("boolean_stable_boxtimes_power: t must be positive"));
    }
    let ap = alpha / (alpha + (1.0 - alpha) * t);
    Ok(KnownLaw::BooleanStable { pair: AdmissiblePair::new(ap, 1.0)?, r: 1.0 })
}

/// S-transform of the push-forward by x ↦ 1/x: S_{μ^{−1}}(z) = 1/S_μ(−1−z).
pub fn s_transform_inverse_law(law: &KnownLaw, z: f64) -> Result<f64> {
    let s = s_transform_of(law, -1.0 - z)?;
    if s == 0.0 {
        return Err(Error::Division("s_transform_inverse_law: S vanishes".into()));
    }
    Ok(1.0 / s)
}

/// Two-sided Laplace/characteristic function of the classical stable law
/// s_{α,ρ} at z on the negative imaginary axis.
pub fn classical_stable_cf(alpha: f64, rho: f64, z: Complex) -> Result<Complex> {
    let pair = AdmissiblePair::new(alpha, rho)?;
    if !(z.re == 0.0 && z.im < 0.0) {
        return Err(Error::domain("classical_stable_cf: z must lie on i(−∞, 0)"));
    }
    let (a, rh) = (pair.alpha, pair.rho);
    if (a - 1.0).abs() < 1e-14 {
        // exp(−iρπ z + (1−2ρ) z log z)
        Ok((-Complex::i() * rh * PI * z + (1.0 - 2.0 * rh) * z * z.ln()).exp())
    } else {
        let lg = specfun::log_gamma(1.0 + a)?;
        let coef = Complex::from_polar((-lg).exp(), a * rh * PI);
        Ok((-coef * z.powf(a)).exp())
    }
}

/// Density of the log-Cauchy law: γ / (π x [(log x − β)² + γ²]) on (0, ∞).
pub fn log_cauchy_density(beta: f64, gamma: f64, x: f64) -> Result<f64> {
    if !(gamma > 0.0) {
        return Err(Error::domain("log_cauchy_density: γ must be positive"));
    }
    if !(x > 0.0) {
        return Err(Error::domain("log_cauchy_density: x must be positive"));
    }
    let l = x.ln() - beta;
    Ok(gamma / (PI * x * (l * l + gamma * gamma)))
}

/// Density of the log Boolean stable law Law(e^{B_{α,ρ,r}}) at x ∈ (0,∞)\{1}.
pub fn log_boolean_stable_density(alpha: f64, rho: f64, r: f64, x: f64) -> Result<f64> {
    if !(alpha > 0.0 && alpha < 1.0) {
        return Err(Error::domain("log_boolean_stable_density: α must be in (0,1)"));
    }
    if !(x > 0.0) {
        return Err(Error::domain("log_boolean_stable_density: x must be positive"));
    }
    if x == 1.0 {
        return Err(Error::domain("log_boolean_stable_density: singular point x = 1"));
    }
    Ok(boolean_stable_density(alpha, rho, r, x.ln())? / x)
}

impl KnownLaw {
    /// Materialize the absolutely continuous part as a grid density.
    pub fn materialize(&self, n: usize) -> Result<GridDensity> {
        let n = n.max(64);
        match *self {
            KnownLaw::Semicircle => {
                let grid = crate::measures::linspace(-2.0, 2.0, n);
                let values =
                    grid.iter().map(|&x| (4.0 - x * x).max(0.0).sqrt() / (2.0 * PI)).collect();
                GridDensity::new(grid, values)
            }
            KnownLaw::MarchenkoPastur => {
                let mut grid = crate::measures::logspace(1e-9, 0.2, n / 4);
                grid.extend(crate::measures::linspace(0.2 + 1e-9, 4.0, n - n / 4));
                let values = grid
                    .iter()
                    .map(|&x| if x >= 4.0 { 0.0 } else { ((4.0 - x) / x).sqrt() / (2.0 * PI) })
                    .collect();
                GridDensity::new(grid, values)
            }
            KnownLaw::Cauchy { beta, gamma } => {
                if gamma <= 0.0 {
                    return Err(Error::domain("materialize: degenerate Cauchy is atomic"));
                }
                // tan-graded grid out to ±1e4·γ
                let delta = 1e-4f64;
                let u = crate::measures::linspace(-PI / 2.0 + delta, PI / 2.0 - delta, n);
                let grid: Vec<f64> = u.iter().map(|&t| beta + gamma * t.tan()).collect();
                let values = grid
                    .iter()
                    .map(|&x| gamma / (PI * ((x - beta).powi(2) + gamma * gamma)))
                    .collect();
                GridDensity::new(grid, values)
            }
            KnownLaw::DykemaHaagerup { r } => {
                if r == 0.0 {
                    return Err(Error::domain("materialize: DH_0 = δ_1 is atomic"));
                }
                let base = dh1_grid(n)?;
                if (r - 1.0).abs() < 1e-14 {
                    Ok(base)
                } else {
                    // DH_r = D_{r^{−r}}(DH_1^r)
                    base.power(r)?.dilate(r.powf(-r))
                }
            }
            KnownLaw::FreeStable { pair } => {
                if (pair.alpha - 2.0).abs() < 1e-14 {
                    KnownLaw::Semicircle.materialize(n)
                } else if (pair.alpha - 1.0).abs() < 1e-14 && pair.rho == 0.0 {
                    f1_grid(n)
                } else {
                    Err(Error::domain(
                        "materialize: free stable densities implemented only for α = 1 (ρ = 0) and α = 2",
                    ))
                }
            }
            KnownLaw::BooleanStable { pair, r } => {
                if !(pair.rho == 1.0) {
                    return Err(Error::domain("materialize: only positive Boolean stable laws"));
                }
                let grid = crate::measures::logspace(1e-8, 1e8, n);
                let values = grid
                    .iter()
                    .map(|&x| boolean_stable_density(pair.alpha, pair.rho, r, x))
                    .collect::<Result<Vec<_>>>()?;
                GridDensity::new(grid, values)
            }
            _ => Err(Error::domain("materialize: no density representation for this law")),
        }
    }
}

/// Invert a decreasing θ ↦ x parametrization by bisection on (0, π) and
/// return the paired density value.
fn parametric_density_at(
    param: impl Fn(f64) -> Result<(f64, f64)>,
    x: f64,
) -> Result<f64> {
    let (mut lo, mut hi) = (1e-14, PI - 1e-14);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        let (xm, _) = param(mid)?;
        if xm > x {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let (_, q) = param(0.5 * (lo + hi))?;
    Ok(q)
}

/// Density of DH₁ at x ∈ (0, e).
pub fn dh1_density_at(x: f64) -> Result<f64> {
    if x <= 0.0 || x >= std::f64::consts::E {
        return Ok(0.0);
    }
    parametric_density_at(dh_density_parametric, x)
}

/// Density of f₁ at a point x < 1 by bisecting its parametrization.
pub fn f1_density_at(x: f64) -> Result<f64> {
    if x >= 1.0 {
        return Ok(0.0);
    }
    parametric_density_at(free_stable_density_parametric, x)
}

/// Grid graded quadratically toward `hi`, resolving a √(hi − x) density edge.
fn sqrt_edge_grid(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    (0..n)
        .map(|i| {
            let t = i as f64 / (n - 1) as f64;
            hi - (hi - lo) * (1.0 - t) * (1.0 - t)
        })
        .collect()
}

/// DH₁ sampled on a log-graded grid near 0 (where the density blows up like
/// 1/(x log² x)) plus a √-edge-graded segment up to e. The ~3% of mass
/// sitting below 1e-12 carries a negligible amount of every positive moment.
fn dh1_grid(n: usize) -> Result<GridDensity> {
    let e = std::f64::consts::E;
    let mut grid = crate::measures::logspace(1e-12, 1.0, n / 2);
    grid.extend(sqrt_edge_grid(1.0 + 1e-9, e - 1e-12, n - n / 2));
    let values = grid.iter().map(|&x| dh1_density_at(x)).collect::<Result<Vec<_>>>()?;
    GridDensity::new(grid, values)
}

/// Index-1 free stable density on (−∞, 1], truncated at −60 (Cauchy-type
/// tail, ~1.7% of mass).
fn f1_grid(n: usize) -> Result<GridDensity> {
    let mut grid = crate::measures::linspace(-60.0, -2.0, n / 4);
    grid.extend(sqrt_edge_grid(-2.0 + 1e-9, 1.0 - 1e-12, n - n / 4));
    let values = grid.iter().map(|&x| f1_density_at(x)).collect::<Result<Vec<_>>>()?;
    GridDensity::new(grid, values)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::measures::grid_mellin;
    use approx::assert_relative_eq;
    use rand_chacha::ChaCha12Rng;
    use rand_core::{RngCore, SeedableRng};

    fn uniform(rng: &mut ChaCha12Rng) -> f64 {
        (rng.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    #[test]
    fn admissible_set() {
        assert!(AdmissiblePair::new(0.5, 1.0).is_ok());
        assert!(AdmissiblePair::new(1.0, 0.3).is_ok());
        assert!(AdmissiblePair::new(1.5, 0.9).is_err()); // ρ > 1/α = 2/3
        assert!(AdmissiblePair::new(1.5, 0.5).is_ok());
        assert!(AdmissiblePair::new(2.0, 0.5).is_ok());
        assert!(AdmissiblePair::new(2.0, 0.4).is_err());
        assert!(AdmissiblePair::new(2.5, 0.5).is_err());
    }

    #[test]
    fn boolean_stable_density_values() {
        // α = 1/2, ρ = 1, r = 1 at x = 1: (1/π)·1/(1 + 0 + 1) = 1/(2π)
        let d = boolean_stable_density(0.5, 1.0, 1.0, 1.0).unwrap();
        assert_relative_eq!(d, 1.0 / (2.0 * PI), max_relative = 1e-14);
        // ρ = 1 kills the negative side
        assert_eq!(boolean_stable_density(0.5, 1.0, 1.0, -2.0).unwrap(), 0.0);
        // r = 2 equals the dilation by r^{1/α} = 4 of the r = 1 law
        for &x in &[0.3, 1.0, 2.5, 7.0] {
            let lhs = boolean_stable_density(0.5, 1.0, 2.0, x).unwrap();
            let rhs = boolean_stable_density(0.5, 1.0, 1.0, x / 4.0).unwrap() / 4.0;
            assert_relative_eq!(lhs, rhs, max_relative = 1e-12);
        }
        assert!(boolean_stable_density(0.5, 1.0, 1.0, 0.0).is_err());
    }

    #[test]
    fn boolean_stable_strict_stability() {
        // D_{t^{-1/α}}(b_{α,ρ,1}^{⊎t}) has exactly the b_{α,ρ,1} density;
        // the ⊎t power is b_{α,ρ,t}
        let mut rng = ChaCha12Rng::seed_from_u64(3);
        for _ in 0..5 {
            let alpha = 0.2 + 0.75 * uniform(&mut rng);
            let rho = uniform(&mut rng);
            for &t in &[0.3f64, 0.7] {
                let s = t.powf(-1.0 / alpha);
                for i in 0..50 {
                    let x = -3.0 + 6.1 * (i as f64) / 49.0;
                    if x.abs() < 1e-3 {
                        continue;
                    }
                    let lhs = boolean_stable_density(alpha, rho, t, x / s).unwrap() / s;
                    let rhs = boolean_stable_density(alpha, rho, 1.0, x).unwrap();
                    assert!(
                        (lhs - rhs).abs() <= 1e-10 * rhs.max(1.0),
                        "α={alpha} ρ={rho} t={t} x={x}: {lhs} vs {rhs}"
                    );
                }
            }
        }
    }

    #[test]
    fn voiculescu_transform_values() {
        let z = Complex::new(0.4, 1.3);
        // Cauchy as f_{1,1/2}: φ = −iπ/2
        let phi = free_stable_voiculescu(1.0, 0.5, z).unwrap();
        assert!((phi - Complex::new(0.0, -PI / 2.0)).norm() < 1e-14);
        // semicircle: φ(z) = 1/z
        let phi = free_stable_voiculescu(2.0, 0.5, z).unwrap();
        assert!((phi - 1.0 / z).norm() < 1e-14);
        // α = 1, ρ = 1: φ = −iπ + log z
        let phi = free_stable_voiculescu(1.0, 1.0, z).unwrap();
        assert!((phi - (-Complex::i() * PI + z.ln())).norm() < 1e-14);
    }

    #[test]
    fn parametric_densities() {
        let (x, q) = free_stable_density_parametric(PI / 2.0).unwrap();
        assert_relative_eq!(x, (2.0 / PI).ln(), max_relative = 1e-14);
        assert_relative_eq!(q, 2.0 / (PI * PI), max_relative = 1e-14);
        // θ → 0: x → 1 (right end of supp f₁), q → 0
        let (x, q) = free_stable_density_parametric(1e-6).unwrap();
        assert!((x - 1.0).abs() < 1e-6 && q < 1e-6);
        // θ → π: x → −∞, q → 0
        let (x, q) = free_stable_density_parametric(PI - 1e-6).unwrap();
        assert!(x < -1e5 && q < 1e-11);

        let (x, p) = dh_density_parametric(PI / 2.0).unwrap();
        assert_relative_eq!(x, 2.0 / PI, max_relative = 1e-14);
        assert_relative_eq!(p, 1.0 / PI, max_relative = 1e-14);
        // cross-check p(x) = x^{-1} q(log x) at θ = π/2
        let (_, q) = free_stable_density_parametric(PI / 2.0).unwrap();
        assert_relative_eq!(p, q / x, max_relative = 1e-13);
        // θ → 0: x → e (right end of supp DH₁)
        let (x, _) = dh_density_parametric(1e-7).unwrap();
        assert!((x - std::f64::consts::E).abs() < 1e-6);
    }

    #[test]
    fn dh_biane_pushforward_identity() {
        // DH₁ = Law(e^{F₁}): p(x(θ)) = q(y(θ))/x(θ) with x = e^y along θ
        for &theta in &[0.3, 1.0, 2.0, 2.9] {
            let (x, p) = dh_density_parametric(theta).unwrap();
            let (y, q) = free_stable_density_parametric(theta).unwrap();
            assert_relative_eq!(x.ln(), y, max_relative = 1e-12, epsilon = 1e-12);
            assert_relative_eq!(p, q / x, max_relative = 1e-12);
        }
    }

    #[test]
    fn dh_moment_values() {
        assert_relative_eq!(dh_moment(1.0, 1).unwrap(), 0.5, max_relative = 1e-13);
        assert_relative_eq!(dh_moment(1.0, 2).unwrap(), 2.0 / 3.0, max_relative = 1e-13);
        assert_relative_eq!(dh_moment(1.0, 3).unwrap(), 9.0 / 8.0, max_relative = 1e-13);
        assert_eq!(dh_moment(3.3, 0).unwrap(), 1.0);
    }

    #[test]
    fn dh_moments_match_parametric_grid() {
        let g = KnownLaw::DykemaHaagerup { r: 1.0 }.materialize(12288).unwrap();
        for n in 1..=3u32 {
            let m = grid_mellin(&g, n as f64).unwrap();
            assert_relative_eq!(m, dh_moment(1.0, n).unwrap(), max_relative = 1e-6);
        }
    }

    #[test]
    fn f1_parametric_normalization() {
        // ∫ q dx over θ ∈ (0, π) with the Jacobian |dx/dθ|, midpoint rule
        let n = 8192;
        let mut mass = 0.0;
        let h = (PI - 2e-6) / n as f64;
        for i in 0..n {
            let t = 1e-6 + (i as f64 + 0.5) * h;
            let (_, q) = free_stable_density_parametric(t).unwrap();
            let dx = {
                let hh = 1e-6;
                let (xp, _) = free_stable_density_parametric(t + hh).unwrap();
                let (xm, _) = free_stable_density_parametric(t - hh).unwrap();
                (xp - xm) / (2.0 * hh)
            };
            mass += q * dx.abs() * h;
        }
        assert_relative_eq!(mass, 1.0, max_relative = 1e-6);
    }

    #[test]
    fn sigma_transforms() {
        // MP: Σ(−1) = 2, v = log 2
        let (s, v) = sigma_transform_of(&KnownLaw::MarchenkoPastur, -1.0).unwrap();
        assert_relative_eq!(s, 2.0, max_relative = 1e-13);
        assert_relative_eq!(v, 2.0f64.ln(), max_relative = 1e-13);
        // π(1,1) = MP
        let fb = KnownLaw::FreeBessel { r: 1.0, s: 1.0 };
        for &z in &[-0.3, -1.0, -4.0] {
            let (s1, _) = sigma_transform_of(&fb, z).unwrap();
            let (s2, _) = sigma_transform_of(&KnownLaw::MarchenkoPastur, z).unwrap();
            assert_relative_eq!(s1, s2, max_relative = 1e-13);
        }
        // positive Boolean 1/2-stable: v(−1) = 0
        let b = KnownLaw::BooleanStable { pair: AdmissiblePair::new(0.5, 1.0).unwrap(), r: 1.0 };
        let (_, v) = sigma_transform_of(&b, -1.0).unwrap();
        assert!(v.abs() < 1e-14);
        // non-ID law rejected
        assert!(sigma_transform_of(&KnownLaw::Semicircle, -1.0).is_err());
    }

    #[test]
    fn v_maps_lower_halfplane_to_upper() {
        let laws = [
            KnownLaw::MarchenkoPastur,
            KnownLaw::BooleanStable { pair: AdmissiblePair::new(0.5, 1.0).unwrap(), r: 1.0 },
            KnownLaw::NuAlpha { alpha: 1.7 },
            KnownLaw::FreeBessel { r: 2.0, s: 3.0 },
            KnownLaw::MuAlphaBeta { alpha: 1.0, beta: 2.0 },
        ];
        let mut rng = ChaCha12Rng::seed_from_u64(5);
        for law in &laws {
            for _ in 0..60 {
                let z = Complex::new(4.0 * uniform(&mut rng) - 2.0, -(1e-6 + 2.0 * uniform(&mut rng)));
                let v = v_function_of(law, z).unwrap();
                assert!(v.im >= -1e-12, "{law:?}: v({z}) = {v} leaves the closed upper half-plane");
            }
        }
    }

    #[test]
    fn boolean_stable_power_formula() {
        let index = |l: KnownLaw| match l {
            KnownLaw::BooleanStable { pair, .. } => pair.alpha(),
            _ => panic!(),
        };
        // t = 1 is the identity
        assert_relative_eq!(index(boolean_stable_boxtimes_power(0.37, 1.0).unwrap()), 0.37);
        // Σ-consistency oracle: Σ_{b_α}^t = (−z)^{t(1−α)/α} must equal
        // Σ of the output law at sampled points
        for &(alpha, t) in &[(0.5, 0.5), (0.5, 2.0), (0.3, 0.25), (0.8, 3.0)] {
            let out = boolean_stable_boxtimes_power(alpha, t).unwrap();
            for &z in &[-0.5f64, -1.7, -4.0] {
                let (sig_out, _) = sigma_transform_of(&out, z).unwrap();
                let base = KnownLaw::BooleanStable {
                    pair: AdmissiblePair::new(alpha, 1.0).unwrap(),
                    r: 1.0,
                };
                let (sig_base, _) = sigma_transform_of(&base, z).unwrap();
                assert_relative_eq!(sig_out, sig_base.powf(t), max_relative = 1e-12);
            }
        }
        // t = 1/2 at α = 1/2: index 2/3
        assert_relative_eq!(
            index(boolean_stable_boxtimes_power(0.5, 0.5).unwrap()),
            2.0 / 3.0,
            max_relative = 1e-14
        );
        // t → 0: index → 1 (the log-Cauchy regime)
        assert!(index(boolean_stable_boxtimes_power(0.5, 1e-9).unwrap()) > 1.0 - 1e-8);
    }

    #[test]
    fn s_transform_inverse() {
        // MP: S_{π^{-1}}(z) = −z
        for &z in &[-0.8, -0.5, -0.2] {
            let s = s_transform_inverse_law(&KnownLaw::MarchenkoPastur, z).unwrap();
            assert_relative_eq!(s, -z, max_relative = 1e-13);
        }
        // (μ_{α,β})^{-1} = μ_{β,α}
        let m12 = KnownLaw::MuAlphaBeta { alpha: 1.0, beta: 2.0 };
        let m21 = KnownLaw::MuAlphaBeta { alpha: 2.0, beta: 1.0 };
        for &z in &[-0.7, -0.4, -0.1] {
            let lhs = s_transform_inverse_law(&m12, z).unwrap();
            let rhs = s_transform_of(&m21, z).unwrap();
            assert_relative_eq!(lhs, rhs, max_relative = 1e-12);
        }
        // δ_a: S = 1/a, inverse has S = a
        let pm = KnownLaw::PointMass { a: 3.0 };
        assert_relative_eq!(s_transform_inverse_law(&pm, -0.5).unwrap(), 3.0);
    }

    #[test]
    fn classical_cf_values() {
        // α = 2, ρ = 1/2 at z = −i: exp(−1/2)
        let v = classical_stable_cf(2.0, 0.5, Complex::new(0.0, -1.0)).unwrap();
        assert!((v - Complex::new((-0.5f64).exp(), 0.0)).norm() < 1e-13);
        // α = 1, ρ = 1/2 at z = −i: exp(−π/2)
        let v = classical_stable_cf(1.0, 0.5, Complex::new(0.0, -1.0)).unwrap();
        assert!((v - Complex::new((-PI / 2.0).exp(), 0.0)).norm() < 1e-13);
        // modulus bounded by 1 along the axis
        for i in 1..40 {
            let z = Complex::new(0.0, -(i as f64) * 0.25);
            for &(a, r) in &[(0.5, 0.3), (1.0, 0.8), (1.7, 0.45), (2.0, 0.5)] {
                let v = classical_stable_cf(a, r, z).unwrap();
                assert!(v.norm() <= 1.0 + 1e-12, "|cf| = {} at α={a}, ρ={r}, z={z}", v.norm());
            }
        }
    }

    #[test]
    fn log_cauchy_density_values() {
        let d = log_cauchy_density(0.0, PI, 1.0).unwrap();
        assert_relative_eq!(d, 1.0 / (PI * PI), max_relative = 1e-14);
        // x·ρ(x) = 1/((log x)² + γ²)/π → 0 at the origin (the density itself
        // blows up like 1/(x log²x) but stays integrable)
        let x = 1e-8;
        let d = log_cauchy_density(0.0, PI, x).unwrap();
        assert_relative_eq!(d, 1.0 / (x * (x.ln().powi(2) + PI * PI)), max_relative = 1e-12);
        assert!(x * d < 4e-3);
        // mass over [1e-9, 1e9] matches the closed CDF of the underlying
        // Cauchy law in log coordinates (full mass 1 sits in the slow tails)
        let grid = crate::measures::logspace(1e-9, 1e9, 20001);
        let vals: Vec<f64> =
            grid.iter().map(|&x| log_cauchy_density(0.0, PI, x).unwrap()).collect();
        let mass = vals
            .windows(2)
            .zip(grid.windows(2))
            .map(|(v, g)| 0.5 * (v[0] + v[1]) * (g[1] - g[0]))
            .sum::<f64>();
        let l = 1e9f64.ln() / PI;
        let cdf_mass = ((l.atan()) - (-l).atan()) / PI;
        assert_relative_eq!(mass, cdf_mass, max_relative = 1e-6);
    }

    #[test]
    fn log_boolean_stable_density_values() {
        // push-forward relation
        for &x in &[0.3, 0.9, 1.5, std::f64::consts::E] {
            let lhs = log_boolean_stable_density(0.5, 1.0, 1.0, x).unwrap();
            let rhs = boolean_stable_density(0.5, 1.0, 1.0, x.ln()).unwrap() / x;
            assert_relative_eq!(lhs, rhs, max_relative = 1e-14);
        }
        let d = log_boolean_stable_density(0.5, 1.0, 1.0, std::f64::consts::E).unwrap();
        assert_relative_eq!(
            d,
            1.0 / (2.0 * PI * std::f64::consts::E),
            max_relative = 1e-13
        );
        // x < 1 side positive for ρ = 1/2
        let d = log_boolean_stable_density(0.5, 0.5, 1.0, 0.5).unwrap();
        assert!(d > 0.0);
        assert!(log_boolean_stable_density(0.5, 1.0, 1.0, 1.0).is_err());
    }

    #[test]
    fn mp_eta_closed_form_matches_quadratic() {
        // η_MP solves η(1−η) = z with η(x) < 0 for x < 0
        let law = KnownLaw::MarchenkoPastur;
        for &x in &[-0.1, -1.0, -10.0] {
            let e = law.eta_transform_closed(Complex::new(x, 0.0)).unwrap();
            assert!(e.im.abs() < 1e-15 && e.re < 0.0);
            let back = e * (1.0 - e);
            assert_relative_eq!(back.re, x, max_relative = 1e-13);
        }
    }

    #[test]
    fn boolean_stable_boundary_f_near_zero() {
        // F(x + i0) = x + e^{iπ/2} x^{1/2} for b_{1/2,1,1}: argument → π/2
        let law = KnownLaw::BooleanStable { pair: AdmissiblePair::new(0.5, 1.0).unwrap(), r: 1.0 };
        let f = law.f_transform_closed(Complex::new(1e-10, 1e-18)).unwrap();
        assert!((f.arg() - PI / 2.0).abs() < 1e-3);
        assert!(f.norm() < 2e-5);
    }

    #[test]
    fn free_stable_materialize_support() {
        let g = KnownLaw::FreeStable { pair: AdmissiblePair::new(1.0, 0.0).unwrap() }
            .materialize(2048)
            .unwrap();
        assert!(*g.grid().last().unwrap() <= 1.0 + 1e-9);
        let dh = KnownLaw::DykemaHaagerup { r: 1.0 }.materialize(2048).unwrap();
        assert!(*dh.grid().last().unwrap() <= std::f64::consts::E + 1e-9);
    }

    #[test]
    fn grid_mellin_on_boolean_stable_has_heavy_tail() {
        let law = KnownLaw::BooleanStable { pair: AdmissiblePair::new(0.5, 1.0).unwrap(), r: 1.0 };
        let g = law.materialize(4096).unwrap();
        // γ ≥ α diverges
        assert!(grid_mellin(&g, 0.75).is_err());
        // small positive moment converges
        assert!(grid_mellin(&g, 0.2).is_ok());
        // the linear grid mass is close to 1 thanks to the tail corrections
        let m0 = grid_mellin(&g, 0.0).unwrap();
        assert_relative_eq!(m0, 1.0, max_relative = 5e-4);
    }
}
