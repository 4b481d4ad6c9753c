//! Measure representations and the analytic transform engine: Cauchy, F and
//! η transforms, boundary values, Stieltjes inversion, Mellin moments and
//! density comparison.

use crate::error::{Error, Result};
use crate::laws::KnownLaw;
use crate::Complex;
use std::io::Write;

/// Default ε-ladder for boundary extrapolation.
pub const DEFAULT_LADDER: [f64; 3] = [1e-3, 5e-4, 2.5e-4];

/// Purely atomic probability measure with strictly increasing locations.
#[derive(Debug, Clone)]
pub struct AtomicMeasure {
    atoms: Vec<(f64, f64)>,
}

impl AtomicMeasure {
    pub fn new(atoms: Vec<(f64, f64)>) -> Result<Self> {
        if atoms.is_empty() {
            return Err(Error::domain("AtomicMeasure: no atoms"));
        }
        for w in atoms.windows(2) {
            if w[0].0 >= w[1].0 {
                return Err(Error::domain("AtomicMeasure: locations must be strictly increasing"));
            }
        }
        let total: f64 = atoms.iter().map(|a| a.1).sum();
        if atoms.iter().any(|a| a.1 <= 0.0) || (total - 1.0).abs() > 1e-12 {
            return Err(Error::domain(format!(
                "AtomicMeasure: weights must be positive and sum to 1 (got {total})"
            )));
        }
        Ok(Self { atoms })
    }

    pub fn point_mass(a: f64) -> Self {
        Self { atoms: vec![(a, 1.0)] }
    }

    /// ½(δ_a + δ_b) and, more generally, w·δ_a + (1−w)·δ_b.
    pub fn two_point(a: f64, b: f64, w: f64) -> Result<Self> {
        if !(w > 0.0 && w < 1.0) {
            return Err(Error::domain("two_point: weight must be in (0,1)"));
        }
        let (lo, hi, wl, wh) = if a < b { (a, b, w, 1.0 - w) } else { (b, a, 1.0 - w, w) };
        Self::new(vec![(lo, wl), (hi, wh)])
    }

    pub fn atoms(&self) -> &[(f64, f64)] {
        &self.atoms
    }
}

/// Absolutely continuous part sampled on a strictly increasing grid.
///
/// `mass` is the trapezoid integral of `values` over `grid`; it is kept in
/// sync by construction.
#[derive(Debug, Clone)]
pub struct GridDensity {
    grid: Vec<f64>,
    values: Vec<f64>,
    mass: f64,
}

impl GridDensity {
    pub fn new(grid: Vec<f64>, values: Vec<f64>) -> Result<Self> {
        if grid.len() < 2 || grid.len() != values.len() {
            return Err(Error::domain("GridDensity: need matching grids of length >= 2"));
        }
        for w in grid.windows(2) {
            if !(w[1] > w[0]) {
                return Err(Error::domain("GridDensity: grid must be strictly increasing"));
            }
        }
        let mut values = values;
        for v in values.iter_mut() {
            if !v.is_finite() {
                return Err(Error::domain("GridDensity: non-finite density value"));
            }
            if *v < 0.0 {
                if *v < -1e-8 {
                    return Err(Error::domain(format!("GridDensity: negative density {v}")));
                }
                *v = 0.0;
            }
        }
        let mass = trapezoid(&grid, &values);
        if !(mass > 0.0 && mass <= 1.0 + 1e-4) {
            return Err(Error::domain(format!("GridDensity: mass {mass} outside (0, 1]")));
        }
        Ok(Self { grid, values, mass })
    }

    pub fn grid(&self) -> &[f64] {
        &self.grid
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn mass(&self) -> f64 {
        self.mass
    }

    pub fn covers(&self, lo: f64, hi: f64) -> bool {
        self.grid[0] <= lo && *self.grid.last().unwrap() >= hi
    }

    /// Linear interpolation; zero outside the grid.
    pub fn interp(&self, x: f64) -> f64 {
        let n = self.grid.len();
        if x < self.grid[0] || x > self.grid[n - 1] {
            return 0.0;
        }
        let i = match self.grid.binary_search_by(|g| g.partial_cmp(&x).unwrap()) {
            Ok(i) => return self.values[i],
            Err(i) => i,
        };
        let (x0, x1) = (self.grid[i - 1], self.grid[i]);
        let t = (x - x0) / (x1 - x0);
        self.values[i - 1] * (1.0 - t) + self.values[i] * t
    }

    /// Rescale values so the trapezoid mass equals `target`.
    pub fn renormalize(&mut self, target: f64) {
        let f = target / self.mass;
        for v in self.values.iter_mut() {
            *v *= f;
        }
        self.mass = target;
    }

    /// Push-forward by x ↦ s·x (s > 0).
    pub fn dilate(&self, s: f64) -> Result<GridDensity> {
        if !(s > 0.0) {
            return Err(Error::domain("dilate: scale must be positive"));
        }
        let grid = self.grid.iter().map(|x| s * x).collect();
        let values = self.values.iter().map(|v| v / s).collect();
        GridDensity::new(grid, values)
    }

    /// Push-forward by x ↦ x^p (p ≠ 0) for densities supported in (0, ∞).
    pub fn power(&self, p: f64) -> Result<GridDensity> {
        if p == 0.0 {
            return Err(Error::domain("power: exponent must be nonzero"));
        }
        if self.grid[0] <= 0.0 {
            return Err(Error::domain("power: support must be in (0, inf)"));
        }
        let mut pts: Vec<(f64, f64)> = self
            .grid
            .iter()
            .zip(&self.values)
            .map(|(&x, &v)| {
                let y = x.powf(p);
                // density transforms with |d x / d y| = (1/|p|) y^{1/p - 1}
                let jac = (1.0 / p.abs()) * y.powf(1.0 / p - 1.0);
                (y, v * jac)
            })
            .collect();
        pts.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap());
        pts.dedup_by(|a, b| a.0 == b.0);
        let (grid, values) = pts.into_iter().unzip();
        GridDensity::new(grid, values)
    }

    /// CSV emission: header `x,density`, 17 significant digits.
    pub fn write_csv<W: Write>(&self, w: &mut W) -> std::io::Result<()> {
        writeln!(w, "x,density")?;
        for (x, v) in self.grid.iter().zip(&self.values) {
            writeln!(w, "{:.16e},{:.16e}", x, v)?;
        }
        Ok(())
    }
}

/// Atomic part plus absolutely continuous part.
#[derive(Debug, Clone)]
pub struct MixedMeasure {
    pub atoms: Vec<(f64, f64)>,
    pub ac: GridDensity,
}

/// A probability measure in one of the supported representations.
#[derive(Debug, Clone)]
pub enum MeasureRep {
    Atomic(AtomicMeasure),
    Grid(GridDensity),
    Mixed(MixedMeasure),
    Known(KnownLaw),
}

impl MeasureRep {
    pub fn total_mass(&self) -> f64 {
        match self {
            MeasureRep::Atomic(_) | MeasureRep::Known(_) => 1.0,
            MeasureRep::Grid(g) => g.mass(),
            MeasureRep::Mixed(m) => m.atoms.iter().map(|a| a.1).sum::<f64>() + m.ac.mass(),
        }
    }

    pub fn validate(&self) -> Result<()> {
        let m = self.total_mass();
        if (m - 1.0).abs() > 1e-6 {
            return Err(Error::domain(format!("MeasureRep: total mass {m} differs from 1")));
        }
        Ok(())
    }
}

pub(crate) fn trapezoid(grid: &[f64], values: &[f64]) -> f64 {
    let mut s = 0.0;
    for i in 1..grid.len() {
        s += 0.5 * (values[i] + values[i - 1]) * (grid[i] - grid[i - 1]);
    }
    s
}

pub fn linspace(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    assert!(n >= 2 && hi > lo);
    (0..n).map(|i| lo + (hi - lo) * (i as f64) / ((n - 1) as f64)).collect()
}

pub fn logspace(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    assert!(lo > 0.0 && hi > lo && n >= 2);
    let (a, b) = (lo.ln(), hi.ln());
    (0..n).map(|i| (a + (b - a) * (i as f64) / ((n - 1) as f64)).exp()).collect()
}

/// Principal-branch argument with negative reals approached from below,
/// i.e. arg ∈ [−π, π) with arg(x<0) = −π. This is the branch obtained by
/// continuous continuation from the positive axis through the lower
/// half-plane.
pub(crate) fn arg_lower(z: Complex) -> f64 {
    if z.im == 0.0 && z.re < 0.0 {
        -std::f64::consts::PI
    } else {
        z.arg()
    }
}

/// log z with the lower-edge branch of [`arg_lower`].
pub(crate) fn ln_lower(z: Complex) -> Complex {
    Complex::new(z.norm().ln(), arg_lower(z))
}

/// z^t with the lower-edge branch of [`arg_lower`].
pub(crate) fn pow_lower(z: Complex, t: f64) -> Complex {
    if z.norm() == 0.0 {
        return Complex::new(0.0, 0.0);
    }
    (ln_lower(z) * t).exp()
}

fn atomic_cauchy(atoms: &[(f64, f64)], z: Complex) -> Result<Complex> {
    if z.im == 0.0 && atoms.iter().any(|&(a, _)| a == z.re) {
        return Err(Error::Boundary("cauchy_transform: real z at an atom".into()));
    }
    let mut g = Complex::new(0.0, 0.0);
    for &(a, w) in atoms {
        g += w / (z - a);
    }
    Ok(g)
}

/// Exact Cauchy transform of the piecewise-linear interpolant of a grid
/// density: each cell contributes  ∫ (a+bx)/(z−x) dx  in closed form, so no
/// local refinement near Re(z) is needed.
fn grid_cauchy(gd: &GridDensity, z: Complex) -> Result<Complex> {
    let grid = &gd.grid;
    let n = grid.len();
    if z.im == 0.0 && z.re >= grid[0] && z.re <= grid[n - 1] {
        return Err(Error::Boundary(
            "cauchy_transform: real z inside the numerical support; use boundary_F".into(),
        ));
    }
    let mut g = Complex::new(0.0, 0.0);
    for i in 1..n {
        let (x0, x1) = (grid[i - 1], grid[i]);
        let (v0, v1) = (gd.values[i - 1], gd.values[i]);
        if v0 == 0.0 && v1 == 0.0 {
            continue;
        }
        let b = (v1 - v0) / (x1 - x0);
        let a = v0 - b * x0;
        // ∫_{x0}^{x1} (a+bx)/(z−x) dx = b(x0−x1) + (a+bz)·ln((z−x0)/(z−x1))
        let lr = ((z - x0) / (z - x1)).ln();
        g += b * (x0 - x1) + (a + b * z) * lr;
    }
    Ok(g)
}

/// Cauchy transform G_μ(z) = ∫ dμ(x)/(z−x).
pub fn cauchy_transform(mu: &MeasureRep, z: Complex) -> Result<Complex> {
    match mu {
        MeasureRep::Atomic(a) => atomic_cauchy(a.atoms(), z),
        MeasureRep::Grid(g) => grid_cauchy(g, z),
        MeasureRep::Mixed(m) => {
            let mut g = grid_cauchy(&m.ac, z)?;
            if z.im == 0.0 && m.atoms.iter().any(|&(a, _)| a == z.re) {
                return Err(Error::Boundary("cauchy_transform: real z at an atom".into()));
            }
            for &(a, w) in &m.atoms {
                g += w / (z - a);
            }
            Ok(g)
        }
        MeasureRep::Known(law) => law.cauchy_transform(z),
    }
}

/// Reciprocal Cauchy transform F = 1/G.
pub fn f_transform(mu: &MeasureRep, z: Complex) -> Result<Complex> {
    if let MeasureRep::Known(law) = mu {
        if let Some(f) = law.f_transform_closed(z) {
            return Ok(f);
        }
    }
    let g = cauchy_transform(mu, z)?;
    if g.norm() < 1e-280 {
        return Err(Error::Division("f_transform: Cauchy transform vanishes".into()));
    }
    Ok(1.0 / g)
}

/// η-transform η(z) = 1 − z·F(1/z), for z in the lower half-plane or on
/// (−∞, 0).
pub fn eta_transform(mu: &MeasureRep, z: Complex) -> Result<Complex> {
    if z.norm() == 0.0 {
        return Err(Error::domain("eta_transform: z = 0"));
    }
    if let MeasureRep::Known(law) = mu {
        if let Some(e) = law.eta_transform_closed(z) {
            return Ok(e);
        }
    }
    let f = f_transform(mu, 1.0 / z)?;
    Ok(1.0 - z * f)
}

/// Boundary value with an error estimate, as produced by ε-ladder
/// extrapolation.
#[derive(Debug, Clone, Copy)]
pub struct BoundaryValue {
    pub value: Complex,
    pub err_est: f64,
}

fn richardson(ladder: &[f64], vals: &[Complex]) -> (Complex, f64) {
    debug_assert!(ladder.len() == vals.len() && ladder.len() >= 2);
    let extrap = |i: usize| {
        let (e0, e1) = (ladder[i], ladder[i + 1]);
        (vals[i + 1] * e0 - vals[i] * e1) / (e0 - e1)
    };
    let last = extrap(ladder.len() - 2);
    let err = if ladder.len() >= 3 {
        (last - extrap(ladder.len() - 3)).norm()
    } else {
        (last - vals[vals.len() - 1]).norm()
    };
    (last, err)
}

/// F_μ(x + i0) estimated from the ε-ladder with one Richardson step.
pub fn boundary_f(mu: &MeasureRep, x: f64, ladder: &[f64]) -> Result<BoundaryValue> {
    if ladder.len() < 2 || ladder.windows(2).any(|w| w[1] >= w[0]) || ladder[ladder.len() - 1] <= 0.0 {
        return Err(Error::domain("boundary_f: ladder must be decreasing and positive"));
    }
    let mut vals = Vec::with_capacity(ladder.len());
    for &eps in ladder {
        vals.push(f_transform(mu, Complex::new(x, eps))?);
    }
    let (value, err_est) = richardson(ladder, &vals);
    if !value.re.is_finite() || !value.im.is_finite() || err_est > 0.1 * (1.0 + value.norm()) {
        return Err(Error::Boundary(format!(
            "boundary_f: ladder did not stabilize at x = {x} (err {err_est:.3e})"
        )));
    }
    Ok(BoundaryValue { value, err_est })
}

/// Stieltjes inversion of a Cauchy-transform evaluator over `grid`, with the
/// ε-ladder extrapolating Im G(x + iε) to ε → 0.
pub fn stieltjes_invert<F>(g: F, grid: &[f64], ladder: &[f64]) -> Result<GridDensity>
where
    F: Fn(Complex) -> Result<Complex>,
{
    let mut values = Vec::with_capacity(grid.len());
    for &x in grid {
        let mut vals = Vec::with_capacity(ladder.len());
        for &eps in ladder {
            vals.push(g(Complex::new(x, eps))?);
        }
        let (gx, _) = richardson(ladder, &vals);
        let rho = -gx.im / std::f64::consts::PI;
        if rho < -1e-8 {
            return Err(Error::Inversion(format!(
                "stieltjes_invert: density {rho:.3e} < -1e-8 at x = {x}"
            )));
        }
        values.push(rho.max(0.0));
    }
    GridDensity::new(grid.to_vec(), values)
}

/// ∫ x^γ dμ for measures on (0, ∞).
///
/// Atomic parts are summed exactly. Grid parts use the trapezoid rule plus
/// analytic power-law corrections fitted at both grid edges; a fitted edge
/// exponent that makes the tail integral infinite raises a divergence error.
pub fn mellin_moment(mu: &MeasureRep, gamma: f64) -> Result<f64> {
    match mu {
        MeasureRep::Atomic(a) => atomic_mellin(a.atoms(), gamma),
        MeasureRep::Grid(g) => grid_mellin(g, gamma),
        MeasureRep::Mixed(m) => Ok(atomic_mellin(&m.atoms, gamma)? + grid_mellin(&m.ac, gamma)?),
        MeasureRep::Known(law) => law.mellin_moment(gamma),
    }
}

fn atomic_mellin(atoms: &[(f64, f64)], gamma: f64) -> Result<f64> {
    let mut s = 0.0;
    for &(a, w) in atoms {
        if a <= 0.0 {
            return Err(Error::domain("mellin_moment: atom location not in (0, inf)"));
        }
        s += w * a.powf(gamma);
    }
    Ok(s)
}

pub(crate) fn grid_mellin(gd: &GridDensity, gamma: f64) -> Result<f64> {
    let grid = gd.grid();
    let vals = gd.values();
    if grid[0] < 0.0 {
        return Err(Error::domain("mellin_moment: grid must lie in [0, inf)"));
    }
    let integrand: Vec<f64> = grid
        .iter()
        .zip(vals)
        .map(|(&x, &v)| if x == 0.0 { 0.0 } else { v * x.powf(gamma) })
        .collect();
    let mut total = trapezoid(grid, &integrand);

    // left edge: fit rho ~ c x^p below grid[0]; |p| > 50 means the density is
    // collapsing numerically at a support edge and the tail is negligible
    if grid[0] > 0.0 && vals[0] > 0.0 && vals[1] > 0.0 {
        let p = (vals[1] / vals[0]).ln() / (grid[1] / grid[0]).ln();
        if p.abs() <= 50.0 {
            let q = gamma + p + 1.0;
            if q <= 0.02 {
                return Err(Error::Divergence(format!(
                    "mellin_moment: left-edge exponent {p:.3} makes x^{gamma} non-integrable"
                )));
            }
            let c = vals[0] / grid[0].powf(p);
            let corr = c * grid[0].powf(q) / q;
            if corr.is_finite() {
                total += corr;
            }
        }
    }
    // right edge: fit rho ~ c x^p beyond the last grid point
    let n = grid.len();
    if vals[n - 1] > 0.0 && vals[n - 2] > 0.0 {
        let p = (vals[n - 1] / vals[n - 2]).ln() / (grid[n - 1] / grid[n - 2]).ln();
        if p.abs() <= 50.0 {
            let q = gamma + p + 1.0;
            if q >= -0.02 {
                // only a problem when the tail really carries weight
                let tail_scale = vals[n - 1] * grid[n - 1].powf(gamma + 1.0);
                if tail_scale > 1e-9 * total.abs().max(1e-12) {
                    return Err(Error::Divergence(format!(
                        "mellin_moment: right-edge exponent {p:.3} makes x^{gamma} non-integrable"
                    )));
                }
            } else {
                let c = vals[n - 1] / grid[n - 1].powf(p);
                let corr = -c * grid[n - 1].powf(q) / q;
                if corr.is_finite() {
                    total += corr;
                }
            }
        }
    }
    if !total.is_finite() || total.abs() > 1e12 {
        return Err(Error::Divergence("mellin_moment: quadrature blew up".into()));
    }
    Ok(total)
}

/// Sup-norm distance between two grid densities over the interval `k`,
/// after linear interpolation to the union of their grid points.
pub fn sup_density_distance(p: &GridDensity, q: &GridDensity, k: (f64, f64)) -> Result<f64> {
    let (lo, hi) = k;
    if !(hi > lo) {
        return Err(Error::domain("sup_density_distance: empty interval"));
    }
    if !p.covers(lo, hi) || !q.covers(lo, hi) {
        return Err(Error::domain("sup_density_distance: interval not covered by both grids"));
    }
    let mut xs: Vec<f64> = vec![lo, hi];
    xs.extend(p.grid().iter().copied().filter(|&x| x > lo && x < hi));
    xs.extend(q.grid().iter().copied().filter(|&x| x > lo && x < hi));
    xs.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let mut best = 0.0f64;
    for &x in &xs {
        let d = (p.interp(x) - q.interp(x)).abs();
        if d > best {
            best = d;
        }
    }
    Ok(best)
}
