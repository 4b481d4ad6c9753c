//! Calculus on the class 𝓔 of maps η(x) = x·exp(−u(x)) on (−∞, 0) with
//! u continuous and non-increasing: Boolean powers, free powers through the
//! increasing homeomorphism Φ_t and its inverse ω_t, the Boolean-to-free
//! map, semigroup evaluation at arbitrary positive times, and the complex
//! continuation of the near-identity power used by the density pipelines.
//!
//! The central algebraic fact used throughout: with ω solving
//! ω·exp(t·u(ω)) = z one has η^{⊠(1+t)}(z)/z = exp(−(1+t)·u(ω)), so every
//! fractional Boolean power of it reduces to an exponential of u — taking
//! powers in that form keeps the analytic branch continuous from the
//! negative real axis without any explicit unwinding.

use crate::error::{Error, Result};
use crate::laws::{v_function_of, KnownLaw};
use crate::measures::{eta_transform, MeasureRep};
use crate::Complex;
use std::sync::Arc;

type UFn = Arc<dyn Fn(f64) -> f64 + Send + Sync>;
type CuFn = Arc<dyn Fn(Complex) -> Result<Complex> + Send + Sync>;

/// A map η(x) = x·exp(−u(x)) on (−∞, 0), represented through u, with an
/// optional complex extension of u to the left/lower region plus a real
/// interval around 1 (approached from below).
#[derive(Clone)]
pub struct EClassMap {
    u: UFn,
    complex_u: Option<CuFn>,
}

impl std::fmt::Debug for EClassMap {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("EClassMap").field("complex_u", &self.complex_u.is_some()).finish()
    }
}

impl EClassMap {
    pub fn from_u(u: impl Fn(f64) -> f64 + Send + Sync + 'static) -> Self {
        Self { u: Arc::new(u), complex_u: None }
    }

    pub fn with_complex_u(
        mut self,
        cu: impl Fn(Complex) -> Result<Complex> + Send + Sync + 'static,
    ) -> Self {
        self.complex_u = Some(Arc::new(cu));
        self
    }

    pub fn has_complex_u(&self) -> bool {
        self.complex_u.is_some()
    }

    /// u at a real x < 0.
    pub fn u(&self, x: f64) -> f64 {
        (self.u)(x)
    }

    /// u at a complex point, when the extension is available.
    pub fn u_complex(&self, z: Complex) -> Result<Complex> {
        match &self.complex_u {
            Some(cu) => cu(z),
            None => Err(Error::domain("EClassMap: no complex extension of u")),
        }
    }

    /// η(x) = x·exp(−u(x)) for x < 0.
    pub fn eta(&self, x: f64) -> Result<f64> {
        if !(x < 0.0) {
            return Err(Error::domain("EClassMap::eta: x must be negative"));
        }
        Ok(x * (-(self.u)(x)).exp())
    }

    /// Check the class invariant (u non-increasing, finite) on a 256-point
    /// logarithmic grid.
    pub fn validate(&self) -> Result<()> {
        let grid = crate::measures::logspace(1e-6, 1e6, 256);
        let mut prev = f64::INFINITY;
        for &m in grid.iter().rev() {
            // x sweeps −1e-6 down to −1e6; u must be non-decreasing that way,
            // i.e. non-increasing in x
            let x = -m;
            let ux = (self.u)(x);
            if !ux.is_finite() {
                return Err(Error::domain(format!("EClassMap: u({x}) not finite")));
            }
            if prev != f64::INFINITY && ux > prev + 1e-9 * (1.0 + prev.abs()) {
                return Err(Error::domain(format!(
                    "EClassMap: u increases at x = {x} ({prev} -> {ux})"
                )));
            }
            prev = ux;
        }
        Ok(())
    }
}

/// η-map of a probability measure μ ≠ δ₀ on [0, ∞): u(x) = log(x / η_μ(x)).
pub fn from_probability_measure(mu: &MeasureRep) -> Result<EClassMap> {
    if let MeasureRep::Known(KnownLaw::PointMass { a }) = mu {
        if *a == 0.0 {
            return Err(Error::domain("from_probability_measure: μ = δ_0 excluded"));
        }
    }
    let m = mu.clone();
    let m2 = mu.clone();
    let u = move |x: f64| -> f64 {
        let e = eta_transform(&m, Complex::new(x, 0.0)).expect("eta on the negative axis");
        (x / e.re).ln()
    };
    let cu = move |z: Complex| -> Result<Complex> {
        let z = lower_nudge(z);
        let e = eta_transform(&m2, z)?;
        // η/z lies in the closed lower half-plane union (0, ∞); −Log of it is
        // the continuous branch of u
        Ok(-(e / z).ln())
    };
    Ok(EClassMap::from_u(u).with_complex_u(cu))
}

/// The Boolean-to-free pre-image map of a ⊠-infinitely divisible law:
/// η(x) = x/Σ_μ(x) = x·exp(−v_μ(x)), in general *not* the η-transform of any
/// probability measure.
pub fn from_v_function(law: &KnownLaw) -> Result<EClassMap> {
    // surfaces a NotBoxtimesId error early
    v_function_of(law, Complex::new(-1.0, 0.0))?;
    let l = law.clone();
    let l2 = law.clone();
    let u =
        move |x: f64| v_function_of(&l, Complex::new(x, 0.0)).expect("v on the negative axis").re;
    let cu = move |z: Complex| v_function_of(&l2, z);
    Ok(EClassMap::from_u(u).with_complex_u(cu))
}

fn lower_nudge(z: Complex) -> Complex {
    if z.im == 0.0 && z.re > 0.0 {
        Complex::new(z.re, -1e-300)
    } else {
        z
    }
}

/// Multiplicative Boolean convolution power: u ↦ s·u.
pub fn boolean_power(eta: &EClassMap, s: f64) -> Result<EClassMap> {
    if !(s >= 0.0) {
        return Err(Error::domain("boolean_power: s must be nonnegative"));
    }
    let u = eta.u.clone();
    let mut out = EClassMap { u: Arc::new(move |x| s * u(x)), complex_u: None };
    if let Some(cu) = &eta.complex_u {
        let cu = cu.clone();
        out.complex_u = Some(Arc::new(move |z| cu(z).map(|v| s * v)));
    }
    Ok(out)
}

/// Solve Φ_t(w) = w·exp((t−1)·u(w)) = x for w < 0, working on the log scale
/// y = ln(−w) where ln(−Φ) is monotone increasing in y. Geometric bracket
/// expansion from y₀ = ln(−x), 80 bisection steps, 3 Newton polish steps
/// with a numeric derivative.
fn invert_phi_real(u: &UFn, t: f64, x: f64) -> Result<f64> {
    if !(x < 0.0) {
        return Err(Error::domain("free power: x must be negative"));
    }
    let tm1 = t - 1.0;
    let target = (-x).ln();
    let f = |y: f64| y + tm1 * u(-y.exp()) - target;
    let mut y0 = target;
    let mut f0 = f(y0);
    if f0 == 0.0 {
        return Ok(-y0.exp());
    }
    // expand away from y0 in the direction that moves f toward 0
    let dir = if f0 > 0.0 { -1.0 } else { 1.0 };
    let mut step = std::f64::consts::LN_2;
    let mut y1 = y0;
    let mut found = false;
    let max_span = 1e3 * std::f64::consts::LN_10; // 10^3 decades
    let mut span = 0.0;
    while span < max_span {
        y1 = y0 + dir * step;
        let f1 = f(y1);
        if f1 == 0.0 {
            return Ok(-y1.exp());
        }
        if f1.signum() != f0.signum() {
            found = true;
            break;
        }
        y0 = y1;
        f0 = f1;
        span += step;
        step *= 2.0;
    }
    if !found {
        return Err(Error::Inversion(format!(
            "free power: bracket expansion exceeded 10^3 decades at x = {x}, t = {t}"
        )));
    }
    let (mut lo, mut hi) = if y0 < y1 { (y0, y1) } else { (y1, y0) };
    for _ in 0..80 {
        let mid = 0.5 * (lo + hi);
        if f(mid) <= 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
        if hi - lo < 1e-15 * (1.0 + lo.abs()) {
            break;
        }
    }
    let mut y = 0.5 * (lo + hi);
    for _ in 0..3 {
        let h = 1e-7 * (1.0 + y.abs());
        let d = (f(y + h) - f(y - h)) / (2.0 * h);
        if d.abs() < 1e-14 {
            break;
        }
        let ny = y - f(y) / d;
        if ny.is_finite() && ny > lo - 1.0 && ny < hi + 1.0 {
            y = ny;
        }
    }
    Ok(-y.exp())
}

/// η^{⊠t}(x) = η(ω_t(x)) at a single real point, t ≥ 1.
pub fn free_power_at(eta: &EClassMap, t: f64, x: f64) -> Result<f64> {
    if !(t >= 1.0) {
        return Err(Error::domain("free_power: t must be >= 1"));
    }
    let w = invert_phi_real(&eta.u, t, x)?;
    Ok(w * (-(eta.u)(w)).exp())
}

/// Multiplicative free convolution power η^{⊠t}, t ≥ 1, as a new map in 𝓔
/// (u_t(x) = t·u(ω_t(x))).
pub fn free_power(eta: &EClassMap, t: f64) -> Result<EClassMap> {
    if !(t >= 1.0) {
        return Err(Error::domain("free_power: t must be >= 1"));
    }
    let u = eta.u.clone();
    let ut = move |x: f64| {
        let w = invert_phi_real(&u, t, x).expect("free power inversion");
        t * u(w)
    };
    Ok(EClassMap { u: Arc::new(ut), complex_u: None })
}

/// Subordination data for η^{⊠t} with respect to η.
pub struct SubordinationResult {
    pub omega: EClassMap,
    pub t: f64,
    /// max over the evaluation grid of |Φ_t(ω_t(x)) − x| / |x|
    pub residual: f64,
}

/// ω_t = Φ_t^{−1}; the result records the fixed-point residual on a
/// 64-point log grid. ω_t itself lies in 𝓔 with u_ω = (t−1)·u(ω_t(·)).
pub fn subordination(eta: &EClassMap, t: f64) -> Result<SubordinationResult> {
    if !(t >= 1.0) {
        return Err(Error::domain("subordination: t must be >= 1"));
    }
    let u = eta.u.clone();
    let u2 = eta.u.clone();
    let u3 = eta.u.clone();
    let u_omega = move |x: f64| {
        let w = invert_phi_real(&u, t, x).expect("subordination inversion");
        (t - 1.0) * u2(w)
    };
    let omega = EClassMap { u: Arc::new(u_omega), complex_u: None };

    let mut residual = 0.0f64;
    for &m in &crate::measures::logspace(1e-4, 1e4, 64) {
        let x = -m;
        let w = invert_phi_real(&u3, t, x)?;
        let back = w * ((t - 1.0) * (eta.u)(w)).exp();
        residual = residual.max((back - x).abs() / x.abs());
    }
    if residual > 1e-10 {
        return Err(Error::Inversion(format!(
            "subordination: fixed-point residual {residual:.3e} exceeds 1e-10"
        )));
    }
    Ok(SubordinationResult { omega, t, residual })
}

/// The Boolean-to-free map 𝕄(η) = (η^{⊠2})^{⊎1/2}.
pub fn bp_map(eta: &EClassMap) -> Result<EClassMap> {
    semigroup_at(eta, 1.0)
}

/// Time-t member of the ⊠-semigroup generated by 𝕄(η):
/// ξ_t = (η^{⊠(1+t)})^{⊎ t/(1+t)}, valid for every t > 0 (including t < 1).
/// Its u-function is u_ξ(x) = t·u(ω_{1+t}(x)).
pub fn semigroup_at(eta: &EClassMap, t: f64) -> Result<EClassMap> {
    if !(t > 0.0) {
        return Err(Error::domain("semigroup_at: t must be positive"));
    }
    let u = eta.u.clone();
    let u2 = eta.u.clone();
    let ut = move |x: f64| {
        let w = invert_phi_real(&u, 1.0 + t, x).expect("semigroup inversion");
        t * u2(w)
    };
    let mut out = EClassMap { u: Arc::new(ut), complex_u: None };
    if let Some(cu) = &eta.complex_u {
        let cu = cu.clone();
        let u_real = eta.u.clone();
        let cut = move |z: Complex| -> Result<Complex> {
            let w = solve_omega_complex(&cu, Some(&u_real), t, z, Some(z))?;
            Ok(t * cu(w)?)
        };
        out.complex_u = Some(Arc::new(cut));
    }
    Ok(out)
}

/// Newton solve of ω·exp(tm·u(ω)) = z with an arc-continuation fallback that
/// starts from the real solution at −|z| and rotates the target along the
/// circle |w| = |z| in ≤ 0.1-radian steps. `guess` short-circuits the
/// continuation when Newton converges directly from it.
pub(crate) fn solve_omega_complex(
    cu: &CuFn,
    u_real: Option<&UFn>,
    tm: f64,
    z: Complex,
    guess: Option<Complex>,
) -> Result<Complex> {
    if let Some(g) = guess {
        if let Ok(w) = newton_omega(cu, tm, z, g, 50) {
            return Ok(w);
        }
    }
    // arc continuation from the negative real axis
    let r = z.norm();
    if r == 0.0 {
        return Err(Error::domain("solve_omega_complex: z = 0"));
    }
    let mut w: Complex = match u_real {
        Some(u) => invert_phi_real(u, 1.0 + tm, -r)?.into(),
        None => {
            let start = Complex::new(-r, 0.0);
            newton_omega(cu, tm, start, start, 50)?
        }
    };
    let target_arg = crate::measures::arg_lower(z);
    let start_arg = -std::f64::consts::PI;
    let sweep = target_arg - start_arg;
    let steps = (sweep.abs() / 0.1).ceil().max(1.0) as usize;
    for k in 1..=steps {
        let phi = start_arg + sweep * (k as f64) / (steps as f64);
        let zk = Complex::from_polar(r, phi);
        w = newton_omega(cu, tm, zk, w, 50)?;
    }
    Ok(w)
}

fn newton_omega(
    cu: &CuFn,
    tm: f64,
    z: Complex,
    start: Complex,
    max_iter: usize,
) -> Result<Complex> {
    let f = |w: Complex| -> Result<Complex> { Ok(w * (tm * cu(w)?).exp() - z) };
    let mut w = start;
    let tol = 1e-13 * (1.0 + z.norm());
    for _ in 0..max_iter {
        let fw = f(w)?;
        if fw.norm() <= tol {
            return Ok(w);
        }
        let h = 1e-7 * (1.0 + w.norm());
        let d = (f(w + h)? - f(w - h)?) / (2.0 * h);
        if d.norm() < 1e-290 {
            break;
        }
        let mut next = w - fw / d;
        // keep the iterate off the branch cut side [0, ∞) + i0^+
        if next.im > 0.0 && next.re > 0.0 {
            next = Complex::new(next.re, -1e-15 * (1.0 + next.re));
        }
        if !next.re.is_finite() || !next.im.is_finite() {
            break;
        }
        w = next;
    }
    let fw = f(w)?;
    if fw.norm() <= 100.0 * tol {
        return Ok(w);
    }
    Err(Error::Continuation(format!(
        "complex Newton did not converge at z = {z} (residual {:.3e})",
        fw.norm()
    )))
}

/// (η^{⊠(1+t)})^{⊎ 1/(1+t)} evaluated at a complex point z:
/// z·exp(−u(ω_{1+t}(z))) with ω_{1+t} obtained by complex Newton from the
/// initial guess z (the map is z·(1+O(t)) for small t). t = 0 returns η(z).
pub fn complex_free_power_near_one(eta: &EClassMap, t: f64, z: Complex) -> Result<Complex> {
    if !(t >= 0.0) {
        return Err(Error::domain("complex_free_power_near_one: t must be nonnegative"));
    }
    let cu = eta
        .complex_u
        .as_ref()
        .ok_or_else(|| Error::domain("complex_free_power_near_one: no complex extension"))?;
    if t == 0.0 {
        return Ok(z * (-cu(z)?).exp());
    }
    let w = newton_omega(cu, t, z, z, 50)?;
    Ok(z * (-cu(w)?).exp())
}

/// η-map of the time-t semigroup member at a complex point:
/// ξ_t(z) = z·exp(−t·u(ω_{1+t}(z))). Falls back to arc continuation when a
/// direct Newton start does not converge (large t).
pub fn semigroup_eta_complex(eta: &EClassMap, t: f64, z: Complex) -> Result<Complex> {
    let cu = eta
        .complex_u
        .as_ref()
        .ok_or_else(|| Error::domain("semigroup_eta_complex: no complex extension"))?;
    let guess = if t <= 0.5 { Some(z) } else { None };
    let w = solve_omega_complex(cu, Some(&eta.u), t, z, guess)?;
    Ok(z * (-t * cu(w)?).exp())
}
