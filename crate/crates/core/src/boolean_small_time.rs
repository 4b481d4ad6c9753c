//! Multiplicative Boolean convolution powers on [0, ∞) and their small-time
//! limits: densities of (μ^{⊎t})^p via G_{μ^{⊎t}}(z) = 1/(z − (z−F_μ(z))^t),
//! the log-Cauchy limit and the log Boolean stable limit.

use crate::error::{Error, Result};
use crate::laws::{log_boolean_stable_density, log_cauchy_density};
use crate::measures::{
    boundary_f, f_transform, linspace, ln_lower, pow_lower, sup_density_distance, GridDensity,
    MeasureRep, DEFAULT_LADDER,
};
use crate::Complex;
use std::f64::consts::PI;
use std::io::Write;

/// Cauchy transform of the multiplicative Boolean power μ^{⊎t} at z ∈ ℂ⁺:
/// 1/(z − (z−F_μ(z))^t). The base z − F_μ(z) lies in the closed lower
/// half-plane union (0, ∞); its power is taken with the branch continued
/// from the positive real axis through the lower half-plane.
pub fn boolean_power_cauchy(mu: &MeasureRep, t: f64, z: Complex) -> Result<Complex> {
    if !(0.0..=1.0).contains(&t) {
        return Err(Error::domain("boolean_power_cauchy: t must be in [0, 1]"));
    }
    if !(z.im > 0.0) {
        return Err(Error::domain("boolean_power_cauchy: z must be in the upper half-plane"));
    }
    let f = f_transform(mu, z)?;
    let den = z - pow_lower(z - f, t);
    if den.norm() < 1e-300 {
        return Err(Error::Pole(format!("boolean_power_cauchy: pole at z = {z}")));
    }
    Ok(1.0 / den)
}

/// Request for the density of (μ^{⊎t})^p on a compact interval, where p is
/// the push-forward exponent (the measure is the law of X^p for X ~ μ^{⊎t};
/// the usual small-time normalization takes p = 1/t).
#[derive(Debug, Clone)]
pub struct BooleanPowerDensityRequest {
    pub measure: MeasureRep,
    pub t: f64,
    pub power: f64,
    pub interval: (f64, f64),
    pub grid_size: usize,
}

impl BooleanPowerDensityRequest {
    fn check(&self) -> Result<()> {
        if !(self.t > 0.0 && self.t < 1.0) {
            return Err(Error::domain("BooleanPowerDensityRequest: t must be in (0,1)"));
        }
        if !(self.power > 0.0) {
            return Err(Error::domain("BooleanPowerDensityRequest: power must be positive"));
        }
        let (lo, hi) = self.interval;
        if !(0.0 < lo && lo < hi) {
            return Err(Error::domain("BooleanPowerDensityRequest: interval must lie in (0, ∞)"));
        }
        if self.grid_size < 8 {
            return Err(Error::domain("BooleanPowerDensityRequest: grid too small"));
        }
        Ok(())
    }
}

/// Density of (μ^{⊎t})^p at the points of `grid`, from boundary values of F:
/// ρ(x) = (s/(πx))·Im[1/(x^{−s}(x^s − F(x^s+i0))^t − 1)] with s = 1/p.
pub(crate) fn power_density_from_f<F>(
    f_boundary: F,
    t: f64,
    power: f64,
    grid: &[f64],
) -> Result<GridDensity>
where
    F: Fn(f64) -> Result<Complex>,
{
    let s = 1.0 / power;
    let mut values = Vec::with_capacity(grid.len());
    for &x in grid {
        let y = x.powf(s);
        let f = f_boundary(y)?;
        let base = Complex::new(y, 0.0) - f;
        let v = pow_lower(base, t);
        let den = v / y - 1.0;
        let rho = if den.norm() < 1e-300 {
            0.0 // boundary pole: the atom is not part of the a.c. density
        } else {
            (s / (PI * x)) * (1.0 / den).im
        };
        if rho < -1e-8 {
            return Err(Error::Inversion(format!(
                "boolean power density {rho:.3e} < -1e-8 at x = {x}"
            )));
        }
        values.push(rho.max(0.0));
    }
    GridDensity::new(grid.to_vec(), values)
}

/// Density of (μ^{⊎t})^p over the requested interval.
pub fn boolean_power_density(req: &BooleanPowerDensityRequest) -> Result<GridDensity> {
    req.check()?;
    let grid = linspace(req.interval.0, req.interval.1, req.grid_size);
    let mu = req.measure.clone();
    power_density_from_f(
        |y| boundary_f(&mu, y, &DEFAULT_LADDER).map(|bv| bv.value),
        req.t,
        req.power,
        &grid,
    )
}

/// One row per t: the sup distance between a computed density and the
/// theoretical limit density over the comparison set.
#[derive(Debug, Clone)]
pub struct LimitTable {
    pub rows: Vec<(f64, f64)>,
}

impl LimitTable {
    /// Rows are ordered by decreasing t; distances must not increase.
    pub fn distances_decrease(&self) -> bool {
        self.rows.windows(2).all(|w| w[1].1 <= w[0].1)
    }

    pub fn write_csv<W: Write>(&self, w: &mut W) -> std::io::Result<()> {
        writeln!(w, "t,sup_distance")?;
        for &(t, d) in &self.rows {
            writeln!(w, "{:.16e},{:.16e}", t, d)?;
        }
        Ok(())
    }
}

/// Parameters of the log-Cauchy limit read off from F_μ(1+i0):
/// β − iγ = log(1 − F_μ(1) − i0) with γ ∈ (0, π].
pub fn log_cauchy_parameters(mu: &MeasureRep) -> Result<(f64, f64)> {
    let w = boundary_f(mu, 1.0, &DEFAULT_LADDER)?.value;
    let hyp_ok = w.im > 1e-9 || (w.im.abs() <= 1e-9 && w.re > 1.0);
    if !hyp_ok {
        return Err(Error::Hypothesis(format!(
            "log-Cauchy limit requires F_μ(1) ∈ C⁺ ∪ (1, ∞); got {w}"
        )));
    }
    let base = Complex::new(1.0 - w.re, -w.im.max(0.0));
    let l = ln_lower(base);
    let (beta, gamma) = (l.re, -l.im);
    if !(gamma > 0.0 && gamma <= PI + 1e-12) {
        return Err(Error::Hypothesis(format!("log-Cauchy limit: γ = {gamma} outside (0, π]")));
    }
    Ok((beta, gamma.min(PI)))
}

/// Compare d(μ^{⊎t})^{1/t}/dx with the log-Cauchy(β, γ) density on K for
/// each t, with (β, γ) read from F_μ(1+i0).
pub fn log_cauchy_limit_check(
    mu: &MeasureRep,
    t_list: &[f64],
    k: (f64, f64),
    grid_size: usize,
) -> Result<LimitTable> {
    let (beta, gamma) = log_cauchy_parameters(mu)?;
    let grid = linspace(k.0, k.1, grid_size);
    let limit_vals =
        grid.iter().map(|&x| log_cauchy_density(beta, gamma, x)).collect::<Result<Vec<_>>>()?;
    let limit = GridDensity::new(grid.clone(), limit_vals)?;
    let mut rows = Vec::new();
    for &t in t_list {
        let req = BooleanPowerDensityRequest {
            measure: mu.clone(),
            t,
            power: 1.0 / t,
            interval: k,
            grid_size,
        };
        let dens = boolean_power_density(&req)?;
        rows.push((t, sup_density_distance(&dens, &limit, k)?));
    }
    Ok(LimitTable { rows })
}

/// The symmetric power-law test measure with density (α/2)|x−1|^{α−1} on
/// (0, 2). Its Cauchy transform is evaluated through the exact split
///
///   G(z) = (α/2)·ζ·[Σ_{k≥0} ζ^{2k}/(k+1−α/2) − π(−ζ²)^{α/2−1}/sin(πα/2)],
///
/// ζ = z−1, valid for |ζ| < 1, which stays accurate arbitrarily close to
/// the interior singularity at x = 1.
#[derive(Debug, Clone, Copy)]
pub struct SymmetricPowerLaw {
    pub alpha: f64,
}

impl SymmetricPowerLaw {
    pub fn new(alpha: f64) -> Result<Self> {
        if !(alpha > 0.0 && alpha < 1.0) {
            return Err(Error::domain("SymmetricPowerLaw: α must be in (0,1)"));
        }
        Ok(Self { alpha })
    }

    pub fn density(&self, x: f64) -> f64 {
        if x <= 0.0 || x >= 2.0 || x == 1.0 {
            0.0
        } else {
            0.5 * self.alpha * (x - 1.0).abs().powf(self.alpha - 1.0)
        }
    }

    /// The scale r of the Boolean stable law matched by this measure under
    /// the small-time limit with ρ = 1/2: r = 2 sin(απ/2)/(απ).
    pub fn matched_r(&self) -> f64 {
        2.0 * (self.alpha * PI / 2.0).sin() / (self.alpha * PI)
    }

    pub fn cauchy(&self, z: Complex) -> Result<Complex> {
        let zeta = z - 1.0;
        let r = zeta.norm();
        if r >= 0.9 {
            return Err(Error::domain(
                "SymmetricPowerLaw::cauchy: implemented for |z−1| < 0.9 only",
            ));
        }
        if r == 0.0 {
            return Err(Error::Boundary("SymmetricPowerLaw::cauchy at the singular point".into()));
        }
        let beta = self.alpha / 2.0;
        let w = zeta * zeta;
        // tail series Σ w^k/(k+1−β)
        let mut sum = Complex::new(0.0, 0.0);
        let mut wk = Complex::new(1.0, 0.0);
        for k in 0..200 {
            let term = wk / (k as f64 + 1.0 - beta);
            sum += term;
            if term.norm() < 1e-18 {
                break;
            }
            wk *= w;
        }
        let singular = PI * pow_from_upper(-w, beta - 1.0) / (beta * PI).sin();
        Ok(0.5 * self.alpha * zeta * (sum - singular))
    }

    /// Boundary value F(x + i0) for x near 1.
    pub fn f_boundary(&self, x: f64) -> Result<Complex> {
        let g = self.cauchy(Complex::new(x, 1e-14 * (1.0 + x.abs())))?;
        if g.norm() < 1e-290 {
            return Err(Error::Division("SymmetricPowerLaw: G vanishes".into()));
        }
        Ok(1.0 / g)
    }
}

/// v^p where a real negative v is read as the limit from Im v < 0 (the sign
/// −W inherits when W approaches the positive axis from above).
fn pow_from_upper(v: Complex, p: f64) -> Complex {
    let arg = if v.im == 0.0 && v.re < 0.0 { -PI } else { v.arg() };
    Complex::new(v.norm().ln() * p, arg * p).exp()
}

/// Distances of d(μ^{⊎t})^{t^{−1/α}}/dx from the log Boolean stable density
/// Law(e^{B_{α,1/2,r}}), on K⁺ ⊂ (1, ∞) and K⁻ ⊂ (0, 1), for the symmetric
/// power-law test measure.
#[derive(Debug, Clone)]
pub struct TwoSidedLimitTable {
    pub alpha: f64,
    pub r: f64,
    /// rows (t, sup distance on K⁺, sup distance on K⁻)
    pub rows: Vec<(f64, f64, f64)>,
}

impl TwoSidedLimitTable {
    pub fn distances_decrease(&self) -> bool {
        self.rows.windows(2).all(|w| w[1].1.max(w[1].2) <= w[0].1.max(w[0].2))
    }
}

pub fn log_boolean_stable_limit_check(
    alpha: f64,
    k_plus: (f64, f64),
    k_minus: (f64, f64),
    t_list: &[f64],
    grid_size: usize,
) -> Result<TwoSidedLimitTable> {
    let law = SymmetricPowerLaw::new(alpha)?;
    if !(k_plus.0 > 1.0 && k_minus.1 < 1.0 && k_minus.0 > 0.0) {
        return Err(Error::domain("log_boolean_stable_limit_check: need K⁺ ⊂ (1,∞), K⁻ ⊂ (0,1)"));
    }
    let r = law.matched_r();
    let mut rows = Vec::new();
    for &t in t_list {
        let power = t.powf(-1.0 / alpha);
        let mut sides = [0.0f64; 2];
        for (i, k) in [k_plus, k_minus].iter().enumerate() {
            let grid = linspace(k.0, k.1, grid_size);
            let dens = power_density_from_f(|y| law.f_boundary(y), t, power, &grid)?;
            let limit_vals = grid
                .iter()
                .map(|&x| log_boolean_stable_density(alpha, 0.5, r, x))
                .collect::<Result<Vec<_>>>()?;
            let limit = GridDensity::new(grid.clone(), limit_vals)?;
            sides[i] = sup_density_distance(&dens, &limit, *k)?;
        }
        rows.push((t, sides[0], sides[1]));
    }
    Ok(TwoSidedLimitTable { alpha, r, rows })
}

/// Real poles of z − (z−F(z))^t on an interval where F is real (atoms of
/// μ^{⊎t}), located by sign scanning plus bisection; the mass is the
/// residue 1/(d/dz[z − (z−F)^t]).
pub fn boolean_power_atoms(
    mu: &MeasureRep,
    t: f64,
    scan: (f64, f64),
    n_scan: usize,
) -> Result<Vec<(f64, f64)>> {
    let g = |x: f64| -> Option<f64> {
        let f = f_transform(mu, Complex::new(x, 0.0)).ok()?;
        if f.im.abs() > 1e-12 {
            return None;
        }
        let base = x - f.re;
        if base <= 0.0 {
            return None;
        }
        Some(x - base.powf(t))
    };
    let xs = linspace(scan.0, scan.1, n_scan);
    let mut atoms = Vec::new();
    for w in xs.windows(2) {
        let (a, b) = (w[0], w[1]);
        let (Some(ga), Some(gb)) = (g(a), g(b)) else { continue };
        if ga == 0.0 || ga.signum() == gb.signum() {
            continue;
        }
        let (mut lo, mut hi) = (a, b);
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            match g(mid) {
                Some(gm) if gm.signum() == ga.signum() => lo = mid,
                Some(_) => hi = mid,
                None => break,
            }
        }
        let x0 = 0.5 * (lo + hi);
        let h = 1e-6 * (1.0 + x0.abs());
        if let (Some(gp), Some(gm)) = (g(x0 + h), g(x0 - h)) {
            let d = (gp - gm) / (2.0 * h);
            if d.abs() > 1e-12 {
                atoms.push((x0, 1.0 / d.abs()));
            }
        }
    }
    Ok(atoms)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::laws::KnownLaw;
    use crate::measures::{cauchy_transform, eta_transform, AtomicMeasure};
    use approx::assert_relative_eq;

    fn two_point() -> MeasureRep {
        MeasureRep::Atomic(AtomicMeasure::two_point(2.0, 0.5, 0.5).unwrap())
    }

    #[test]
    fn power_cauchy_degenerate_times() {
        let mu = two_point();
        let z = Complex::new(0.7, 0.9);
        // t = 1 recovers G_μ
        let g1 = boolean_power_cauchy(&mu, 1.0, z).unwrap();
        let g = cauchy_transform(&mu, z).unwrap();
        assert!((g1 - g).norm() < 1e-12);
        // t = 0 is δ_1
        let g0 = boolean_power_cauchy(&mu, 0.0, z).unwrap();
        assert!((g0 - 1.0 / (z - 1.0)).norm() < 1e-14);
    }

    #[test]
    fn power_cauchy_point_mass_cross_check() {
        // δ_a: η_{μ^{⊎t}}(w)/w = (η_μ(w)/w)^t gives η = a^t·w; check the
        // G-side formula against that η-side value
        let a = 3.0f64;
        let mu = MeasureRep::Known(KnownLaw::PointMass { a });
        let t = 0.4;
        for &z in &[Complex::new(1.0, 0.8), Complex::new(-2.0, 0.3)] {
            let g = boolean_power_cauchy(&mu, t, z).unwrap();
            let oracle = 1.0 / (z - a.powf(t));
            assert!((g - oracle).norm() < 1e-12, "{g} vs {oracle}");
        }
    }

    #[test]
    fn eta_multiplicative_power_law() {
        // η_{μ^{⊎t}}(w) = w·(η_μ(w)/w)^t on (−∞, 0), from the F-side formula
        let mu = two_point();
        for &t in &[0.25, 0.5, 0.75] {
            for i in 0..50 {
                let w = -(10f64.powf(-2.0 + 4.0 * (i as f64) / 49.0));
                let z = 1.0 / w; // real z < 0 sits outside supp μ ⊂ (0, ∞)
                let fz = f_transform(&mu, Complex::new(z, 0.0)).unwrap();
                let ft = z - pow_lower(Complex::new(z, 0.0) - fz, t).re;
                let eta_t = 1.0 - w * ft;
                let eta_mu = eta_transform(&mu, Complex::new(w, 0.0)).unwrap().re;
                let oracle = w * (eta_mu / w).powf(t);
                assert_relative_eq!(eta_t, oracle, max_relative = 1e-10);
            }
        }
    }

    #[test]
    fn density_identity_at_t_near_one() {
        // t → 1 recovers the base density: Marchenko–Pastur
        let mu = MeasureRep::Known(KnownLaw::MarchenkoPastur);
        let req = BooleanPowerDensityRequest {
            measure: mu,
            t: 0.999,
            power: 1.0,
            interval: (0.5, 3.0),
            grid_size: 257,
        };
        let d = boolean_power_density(&req).unwrap();
        for (i, &x) in d.grid().iter().enumerate() {
            let exact = ((4.0 - x) / x).sqrt() / (2.0 * PI);
            assert!((d.values()[i] - exact).abs() < 1e-2, "x={x}");
        }
    }

    #[test]
    fn mp_power_density_mass_on_wide_interval() {
        // absolutely continuous base law: the Boolean power's density over a
        // wide window carries essentially all the mass
        let mu = MeasureRep::Known(KnownLaw::MarchenkoPastur);
        let req = BooleanPowerDensityRequest {
            measure: mu,
            t: 0.5,
            power: 1.0,
            interval: (1e-4, 8.0),
            grid_size: 4001,
        };
        let d = boolean_power_density(&req).unwrap();
        assert!(d.mass() > 0.99, "mass {}", d.mass());
    }

    #[test]
    fn two_point_power_keeps_atoms_and_conserves_mass() {
        // μ = ½(δ₂+δ_{1/2}), t = 1/2: the a.c. part alone carries ≈ 8% of
        // the mass; the two real poles of the transform carry the rest
        let mu = two_point();
        let t = 0.5;
        let atoms = boolean_power_atoms(&mu, t, (0.05, 4.0), 8000).unwrap();
        assert_eq!(atoms.len(), 2, "atoms: {atoms:?}");
        let atom_mass: f64 = atoms.iter().map(|a| a.1).sum();
        let mut masses = Vec::new();
        for &hi in &[4.0, 8.0, 16.0] {
            let req = BooleanPowerDensityRequest {
                measure: mu.clone(),
                t,
                power: 1.0,
                interval: (1e-6, hi),
                grid_size: 6001,
            };
            masses.push(boolean_power_density(&req).unwrap().mass());
        }
        assert!(masses[2] - masses[1] < 1e-3, "density mass saturates");
        let total = atom_mass + masses[2];
        assert!((total - 1.0).abs() < 1e-3, "atoms {atom_mass} + a.c. {} = {total}", masses[2]);
        assert!(atoms.iter().all(|a| a.1 > 0.3));
    }

    #[test]
    fn log_cauchy_parameters_examples() {
        // p = 1/2: (β, γ) = (0, π)
        let (beta, gamma) = log_cauchy_parameters(&two_point()).unwrap();
        assert!(beta.abs() < 1e-4);
        assert_relative_eq!(gamma, PI, max_relative = 1e-6);
        // p = 0.7 > 2/3 violates the hypothesis
        let bad = MeasureRep::Atomic(AtomicMeasure::two_point(2.0, 0.7, 0.5).unwrap());
        assert!(matches!(log_cauchy_parameters(&bad), Err(Error::Hypothesis(_))));
        // Hölder density around 1 (Marchenko–Pastur): γ = π/3 ∈ (0, π)
        let (_, gamma) =
            log_cauchy_parameters(&MeasureRep::Known(KnownLaw::MarchenkoPastur)).unwrap();
        assert_relative_eq!(gamma, PI / 3.0, max_relative = 1e-5);
    }

    #[test]
    fn log_cauchy_limit_two_point() {
        let table = log_cauchy_limit_check(&two_point(), &[1e-2, 1e-3], (0.2, 5.0), 512).unwrap();
        assert!(table.rows[1].1 < 5e-2, "distance at t=1e-3: {}", table.rows[1].1);
        assert!(table.distances_decrease(), "{:?}", table.rows);
    }

    #[test]
    fn symmetric_power_law_cauchy_matches_quadrature() {
        // far-field check of the ζ-series against brute quadrature of the
        // density over (0, 2)
        let law = SymmetricPowerLaw::new(0.5).unwrap();
        let z = Complex::new(1.3, 0.4);
        let g = law.cauchy(z).unwrap();
        let n = 400_000;
        let mut acc = Complex::new(0.0, 0.0);
        for i in 0..n {
            let x = 2.0 * (i as f64 + 0.5) / n as f64;
            acc += law.density(x) / (z - x) * (2.0 / n as f64);
        }
        assert!((g - acc).norm() < 1e-4, "{g} vs {acc}");
        // near-field: Stieltjes inversion recovers the density next to 1
        for &x in &[1.01, 0.99, 1.2] {
            let gg = law.cauchy(Complex::new(x, 1e-9)).unwrap();
            let rho = -gg.im / PI;
            assert_relative_eq!(rho, law.density(x), max_relative = 1e-4);
        }
    }

    #[test]
    fn symmetric_power_law_matches_boundary_asymptotics() {
        // F(x+i0) ~ r e^{iαρπ}(x−1)^{1−α} with ρ = 1/2, r = 2sin(απ/2)/(απ)
        let alpha = 0.5;
        let law = SymmetricPowerLaw::new(alpha).unwrap();
        let r = law.matched_r();
        assert_relative_eq!(r, 2.0 * 2.0f64.sqrt() / PI, max_relative = 1e-14);
        let d = 1e-8;
        let f = law.f_boundary(1.0 + d).unwrap();
        let oracle = Complex::from_polar(r * d.powf(1.0 - alpha), alpha * 0.5 * PI);
        assert!((f - oracle).norm() < 1e-3 * oracle.norm(), "{f} vs {oracle}");
    }

    #[test]
    fn log_boolean_stable_limit() {
        let table =
            log_boolean_stable_limit_check(0.5, (1.2, 4.0), (0.25, 0.85), &[1e-2, 1e-3], 512)
                .unwrap();
        let last = &table.rows[1];
        assert!(last.1.max(last.2) < 8e-2, "distances {last:?}");
        assert!(table.distances_decrease(), "{:?}", table.rows);
    }
}
