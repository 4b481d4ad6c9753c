//! Self-contained special functions backing the closed-form laws and moment
//! formulas: log-gamma, Beta, Gauss hypergeometric ₂F₁, Bessel J₁ and I₁.

use crate::error::{Error, Result};
use std::f64::consts::PI;

/// Termination control for power-series evaluation.
#[derive(Debug, Clone, Copy)]
pub struct SeriesControl {
    pub max_terms: usize,
    pub rel_tol: f64,
}

impl SeriesControl {
    pub fn new(max_terms: usize, rel_tol: f64) -> Result<Self> {
        if max_terms < 64 {
            return Err(Error::domain("SeriesControl: max_terms must be >= 64"));
        }
        if !(rel_tol > 0.0 && rel_tol <= 1e-10) {
            return Err(Error::domain("SeriesControl: rel_tol must be in (0, 1e-10]"));
        }
        Ok(Self { max_terms, rel_tol })
    }
}

impl Default for SeriesControl {
    fn default() -> Self {
        Self { max_terms: 10_000, rel_tol: 1e-14 }
    }
}

// Lanczos approximation, g = 7, 9 coefficients (Godfrey/GSL set).
const LANCZOS_G: f64 = 7.0;
const LANCZOS: [f64; 9] = [
    0.99999999999980993,
    676.5203681218851,
    -1259.1392167224028,
    771.32342877765313,
    -176.61502916214059,
    12.507343278686905,
    -0.13857109526572012,
    9.9843695780195716e-6,
    1.5056327351493116e-7,
];

fn lanczos_ln_gamma(x: f64) -> f64 {
    // valid for x >= 0.5; reflection handles the rest
    if x < 0.5 {
        let s = (PI * x).sin();
        (PI / s.abs()).ln() - lanczos_ln_gamma(1.0 - x)
    } else {
        let z = x - 1.0;
        let mut sum = LANCZOS[0];
        for (i, &c) in LANCZOS[1..].iter().enumerate() {
            sum += c / (z + (i as f64) + 1.0);
        }
        let w = z + LANCZOS_G + 0.5;
        0.5 * (2.0 * PI).ln() + (z + 0.5) * w.ln() - w + sum.ln()
    }
}

/// ln Γ(x) for x > 0.
pub fn log_gamma(x: f64) -> Result<f64> {
    if !x.is_finite() || x <= 0.0 {
        return Err(Error::domain(format!("log_gamma: x must be positive and finite, got {x}")));
    }
    Ok(lanczos_ln_gamma(x))
}

fn is_nonpositive_integer(x: f64) -> bool {
    x <= 1e-12 && (x - x.round()).abs() < 1e-12
}

/// ln |Γ(x)| together with the sign of Γ(x), for non-pole real x.
pub fn ln_abs_gamma_sign(x: f64) -> Result<(f64, f64)> {
    if !x.is_finite() {
        return Err(Error::domain("gamma: non-finite argument"));
    }
    if is_nonpositive_integer(x) {
        return Err(Error::Pole(format!("gamma pole at x = {x}")));
    }
    if x > 0.0 {
        Ok((lanczos_ln_gamma(x), 1.0))
    } else {
        // Γ(x) = π / (sin(πx) Γ(1−x))
        let s = (PI * x).sin();
        let ln = PI.ln() - s.abs().ln() - lanczos_ln_gamma(1.0 - x);
        Ok((ln, s.signum()))
    }
}

/// Beta function B(p, q) = Γ(p)Γ(q)/Γ(p+q), with reflection for negative
/// non-integer arguments.
pub fn beta(p: f64, q: f64) -> Result<f64> {
    if is_nonpositive_integer(p) || is_nonpositive_integer(q) {
        return Err(Error::Pole(format!("beta pole: p = {p}, q = {q}")));
    }
    if is_nonpositive_integer(p + q) {
        return Err(Error::Pole(format!("beta: p + q = {} is a non-positive integer", p + q)));
    }
    let (lp, sp) = ln_abs_gamma_sign(p)?;
    let (lq, sq) = ln_abs_gamma_sign(q)?;
    let (ls, ss) = ln_abs_gamma_sign(p + q)?;
    Ok(sp * sq * ss * (lp + lq - ls).exp())
}

/// Gauss hypergeometric ₂F₁(a, b; c; z) for real arguments with z ≤ 0 or
/// |z| < 1.
///
/// Terminating cases (a or b a non-positive integer) are summed exactly for
/// any z. Otherwise the direct series is used for z ∈ [−1/2, 1) and the
/// Pfaff transformation z ↦ z/(z−1) for z < −1/2.
pub fn hyp2f1(a: f64, b: f64, c: f64, z: f64, ctl: SeriesControl) -> Result<f64> {
    if is_nonpositive_integer(c) {
        return Err(Error::domain(format!("hyp2f1: c = {c} is a non-positive integer")));
    }
    if z == 0.0 {
        return Ok(1.0);
    }
    let terminating = (is_nonpositive_integer(a) && -a < ctl.max_terms as f64)
        || (is_nonpositive_integer(b) && -b < ctl.max_terms as f64);
    if terminating {
        return hyp2f1_direct(a, b, c, z, ctl);
    }
    if !(z <= 0.0 || z.abs() < 1.0) {
        return Err(Error::domain(format!("hyp2f1: z = {z} outside supported range")));
    }
    if z >= -0.5 {
        hyp2f1_direct(a, b, c, z, ctl)
    } else {
        hyp2f1_pfaff(a, b, c, z, ctl)
    }
}

pub(crate) fn hyp2f1_direct(a: f64, b: f64, c: f64, z: f64, ctl: SeriesControl) -> Result<f64> {
    let mut term = 1.0f64;
    let mut sum = 1.0f64;
    let mut small_streak = 0usize;
    for k in 0..ctl.max_terms {
        let kf = k as f64;
        term *= (a + kf) * (b + kf) / ((c + kf) * (kf + 1.0)) * z;
        if term == 0.0 {
            return Ok(sum); // terminating series
        }
        sum += term;
        if term.abs() <= ctl.rel_tol * sum.abs().max(f64::MIN_POSITIVE) {
            small_streak += 1;
            if small_streak >= 3 {
                return Ok(sum);
            }
        } else {
            small_streak = 0;
        }
    }
    Err(Error::Convergence(format!(
        "hyp2f1 series did not converge within {} terms (a={a}, b={b}, c={c}, z={z})",
        ctl.max_terms
    )))
}

pub(crate) fn hyp2f1_pfaff(a: f64, b: f64, c: f64, z: f64, ctl: SeriesControl) -> Result<f64> {
    // 2F1(a,b;c;z) = (1−z)^{−a} 2F1(a, c−b; c; z/(z−1))
    let w = z / (z - 1.0);
    let f = hyp2f1_direct(a, c - b, c, w, ctl)?;
    Ok((1.0 - z).powf(-a) * f)
}

/// Bessel function of the first kind J₁(x).
///
/// Power series for |x| ≤ 9; backward (Miller) recurrence with
/// J₀ + 2J₂ + 2J₄ + … normalization for larger arguments, where the
/// alternating series loses too many digits.
pub fn bessel_j1(x: f64) -> Result<f64> {
    if !x.is_finite() {
        return Err(Error::domain("bessel_j1: non-finite argument"));
    }
    let ax = x.abs();
    if ax == 0.0 {
        return Ok(0.0);
    }
    let val = if ax <= 9.0 { j1_series(ax) } else { j1_miller(ax)? };
    Ok(if x < 0.0 { -val } else { val })
}

fn j1_series(x: f64) -> f64 {
    let q = 0.25 * x * x;
    let mut term = 0.5 * x; // k = 0 term
    let mut sum = term;
    for k in 1..200 {
        let kf = k as f64;
        term *= -q / (kf * (kf + 1.0));
        sum += term;
        if term.abs() < 1e-18 * sum.abs().max(1e-300) {
            break;
        }
    }
    sum
}

fn j1_miller(x: f64) -> Result<f64> {
    let mut m = (x + 20.0 * x.sqrt() + 32.0) as usize;
    if m % 2 == 1 {
        m += 1;
    }
    let mut jp = 0.0f64; // J_{k+1}
    let mut j = 1e-30f64; // J_k
    let mut norm = 0.0f64; // J0 + 2 J2 + 2 J4 + ...
    let mut j1 = 0.0f64;
    for k in (1..=m).rev() {
        let jm = 2.0 * (k as f64) / x * j - jp;
        jp = j;
        j = jm;
        if j.abs() > 1e100 {
            j /= 1e100;
            jp /= 1e100;
            norm /= 1e100;
            j1 /= 1e100;
        }
        // after this step j = J_{k-1}, jp = J_k
        if k - 1 == 1 {
            j1 = j;
        }
        if (k - 1) % 2 == 0 {
            norm += if k - 1 == 0 { j } else { 2.0 * j };
        }
    }
    if norm == 0.0 {
        return Err(Error::Convergence("bessel_j1: Miller normalization vanished".into()));
    }
    Ok(j1 / norm)
}

/// Modified Bessel function of the first kind I₁(x), by its (all-positive)
/// power series.
pub fn bessel_i1(x: f64) -> Result<f64> {
    if !x.is_finite() {
        return Err(Error::domain("bessel_i1: non-finite argument"));
    }
    let ax = x.abs();
    let q = 0.25 * ax * ax;
    let mut term = 0.5 * ax;
    let mut sum = term;
    for k in 1..400 {
        let kf = k as f64;
        term *= q / (kf * (kf + 1.0));
        sum += term;
        if term < 1e-18 * sum {
            break;
        }
    }
    Ok(if x < 0.0 { -sum } else { sum })
}
