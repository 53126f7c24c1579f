//! Superaccuracy diagnostics for the `L²` projection onto continuous
//! piecewise linears on a uniform mesh.
//!
//! All integrals use the eight-point rule per cell. Rates are fitted by
//! least squares on `log(value)` against `log(h)`.

use std::sync::Arc;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::mesh::Mesh;
use crate::projection::l2_project;
use crate::space::{Boundary, FemSpace, SpaceSpec};

fn check_setting(space: &FemSpace) -> Result<()> {
    if !space.mesh().is_uniform() {
        return Err(Error::DiagnosticSetting(format!(
            "mesh family is {}",
            space.mesh().family()
        )));
    }
    if space.spec().order != 2 || space.boundary() == Boundary::Periodic {
        return Err(Error::DiagnosticSetting(format!("space is {}", space.spec())));
    }
    Ok(())
}

/// `∫_{I_i} g` for every cell, with the oracle rule.
fn cell_integrals<G: Fn(usize, usize, f64) -> f64>(space: &FemSpace, g: G) -> Vec<f64> {
    let tab = space.tab_oracle();
    (0..space.mesh().cells())
        .map(|c| {
            (0..tab.points_per_cell())
                .map(|k| {
                    let (x, w) = tab.point(c, k);
                    w * g(c, k, x)
                })
                .sum()
        })
        .collect()
}

/// Per-cell moments `∫_{I_i} w (f - Pf)` where `P` projects onto `space`.
/// `w` defaults to 1.
pub fn cell_moments<F, W>(space: &Arc<FemSpace>, f: F, w: Option<W>) -> Result<Vec<f64>>
where
    F: Fn(f64) -> f64,
    W: Fn(f64) -> f64,
{
    check_setting(space)?;
    let p = l2_project(space, &f);
    let tab = space.tab_oracle();
    Ok(cell_integrals(space, |c, k, x| {
        let wx = w.as_ref().map_or(1.0, |w| w(x));
        wx * (f(x) - p.eval_tab(tab, c, k).0)
    }))
}

/// Per-cell `(f - Pf)'` at the cell midpoints. `f` returns value and
/// derivative.
pub fn midpoint_derivative_errors<F>(space: &Arc<FemSpace>, f: F) -> Result<Vec<f64>>
where
    F: Fn(f64) -> (f64, f64),
{
    check_setting(space)?;
    let p = l2_project(space, |x| f(x).0);
    let mesh = space.mesh();
    Ok((0..mesh.cells())
        .map(|c| {
            let (a, h) = mesh.cell(c);
            let x = a + 0.5 * h;
            f(x).1 - p.eval_in_cell(c, x).1
        })
        .collect())
}

/// Solves `(ζ, ψ_i) = -(g, ψ_i')` in `space` and returns `‖ζ‖`.
fn dual_norm<G: Fn(f64) -> f64>(space: &FemSpace, g: G) -> Result<f64> {
    let tab = space.tab_oracle();
    let mut b = vec![0.0; space.dim()];
    for c in 0..space.mesh().cells() {
        let dofs = space.cell_dofs(c);
        for k in 0..tab.points_per_cell() {
            let (x, w) = tab.point(c, k);
            let gw = w * g(x);
            let (_, d) = tab.basis(c, k);
            for (a, dof) in dofs.iter().enumerate() {
                if let Some(j) = dof {
                    b[*j] -= gw * d[a];
                }
            }
        }
    }
    space.solve_in_place(&mut b)?;
    Ok(space.gram().quad_form(&b).max(0.0).sqrt())
}

/// Input functions for [`dual_functional_norms`].
#[derive(Clone, Copy)]
pub struct DualData<'a> {
    /// Data projected onto the free space.
    pub eta: &'a (dyn Fn(f64) -> f64 + Sync),
    /// Data projected onto the zero-endpoint space.
    pub u: &'a (dyn Fn(f64) -> f64 + Sync),
    /// Weight vanishing at both endpoints.
    pub w: &'a (dyn Fn(f64) -> f64 + Sync),
    pub v: &'a (dyn Fn(f64) -> f64 + Sync),
}

/// The six dual norms `‖ζ_1‖ … ‖ζ_6‖` with `ρ = η - Pη`, `σ = u - P₀u`:
///
/// | ζ   | space | functional   |
/// |-----|-------|--------------|
/// | ζ_1 | S₀    | `(ρ', ·)`    |
/// | ζ_2 | S     | `(σ', ·)`    |
/// | ζ_3 | S     | `((wρ)', ·)` |
/// | ζ_4 | S     | `((vσ)', ·)` |
/// | ζ_5 | S₀    | `((vσ)', ·)` |
/// | ζ_6 | S₀    | `((vρ)', ·)` |
///
/// Loads are integrated by parts onto the basis derivatives; the boundary
/// terms vanish because `σ` and `w` vanish at the endpoints and so do the
/// functions of `S₀`.
pub fn dual_functional_norms(
    free: &Arc<FemSpace>,
    zero: &Arc<FemSpace>,
    data: DualData<'_>,
) -> Result<[f64; 6]> {
    check_setting(free)?;
    check_setting(zero)?;
    if free.boundary() != Boundary::Free || zero.boundary() != Boundary::ZeroEndpoints {
        return Err(Error::SpaceMismatch(
            "dual functionals need a free and a zero-endpoint space".into(),
        ));
    }
    if !free.same_mesh(zero) {
        return Err(Error::SpaceMismatch("spaces live on different meshes".into()));
    }
    let p_eta = l2_project(free, data.eta);
    let p_u = l2_project(zero, data.u);
    let rho = |x: f64| (data.eta)(x) - p_eta.value(x);
    let sigma = |x: f64| (data.u)(x) - p_u.value(x);
    Ok([
        dual_norm(zero, rho)?,
        dual_norm(free, sigma)?,
        dual_norm(free, |x| (data.w)(x) * rho(x))?,
        dual_norm(free, |x| (data.v)(x) * sigma(x))?,
        dual_norm(zero, |x| (data.v)(x) * sigma(x))?,
        dual_norm(zero, |x| (data.v)(x) * rho(x))?,
    ])
}

/// Residual `‖Γε - r‖∞` of the tridiagonal system satisfied by the cell
/// moments `ε_i = ∫_{I_i} (u - P₀u)` in the zero-endpoint space.
///
/// `ε` is formed from the projection coefficients `d` as
/// `∫_{I_i} u - h/2 (d_{i-1} + d_i)` and `r` from the cell integrals of `u`
/// and the load `b_i = (u, χ_i)`; `Γ = tridiag(1, [3, 4, …, 4, 3], 1)`.
pub fn moment_system_residual<F: Fn(f64) -> f64>(zero: &Arc<FemSpace>, u: F) -> Result<f64> {
    check_setting(zero)?;
    if zero.boundary() != Boundary::ZeroEndpoints {
        return Err(Error::SpaceMismatch("moment system needs the zero-endpoint space".into()));
    }
    let n = zero.mesh().cells();
    if n < 3 {
        return Err(Error::InvalidArgument("moment system needs N >= 3".into()));
    }
    let h = 1.0 / n as f64;
    let big_u = cell_integrals(zero, |_, _, x| u(x));
    let b = crate::projection::load_vector(zero, &u);
    let mut d = b.clone();
    zero.solve_in_place(&mut d)?;
    // d and b are indexed 1..=N-1 in the formulas; pad with zeros.
    let dd = |i: usize| if i == 0 || i >= n { 0.0 } else { d[i - 1] };
    let bb = |i: usize| if i == 0 || i >= n { 0.0 } else { b[i - 1] };
    let eps: Vec<f64> = (1..=n).map(|i| big_u[i - 1] - 0.5 * h * (dd(i - 1) + dd(i))).collect();
    let mut worst: f64 = 0.0;
    for i in 1..=n {
        let r = if i == 1 {
            3.0 * big_u[0] + big_u[1] - 3.0 * bb(1)
        } else if i == n {
            big_u[n - 2] + 3.0 * big_u[n - 1] - 3.0 * bb(n - 1)
        } else {
            big_u[i - 2] + 4.0 * big_u[i - 1] + big_u[i] - 3.0 * (bb(i - 1) + bb(i))
        };
        let diag = if i == 1 || i == n { 3.0 } else { 4.0 };
        let mut g = diag * eps[i - 1];
        if i > 1 {
            g += eps[i - 2];
        }
        if i < n {
            g += eps[i];
        }
        worst = worst.max((g - r).abs());
    }
    Ok(worst)
}

/// Least-squares slope of `log(values)` against `log(h)`.
pub fn fit_rate(h: &[f64], values: &[f64]) -> Result<f64> {
    if h.len() != values.len() {
        return Err(Error::RateFit(format!(
            "{} step sizes but {} values",
            h.len(),
            values.len()
        )));
    }
    if h.len() < 3 {
        return Err(Error::RateFit(format!("need at least 3 pairs, got {}", h.len())));
    }
    if let Some(bad) = h.iter().chain(values).find(|v| !(**v > 0.0) || !v.is_finite()) {
        return Err(Error::RateFit(format!("non-positive or non-finite value {bad}")));
    }
    let xs: Vec<f64> = h.iter().map(|v| v.ln()).collect();
    let ys: Vec<f64> = values.iter().map(|v| v.ln()).collect();
    let m = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / m;
    let my = ys.iter().sum::<f64>() / m;
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    if sxx == 0.0 {
        return Err(Error::RateFit("all step sizes are equal".into()));
    }
    Ok(sxy / sxx)
}

/// One diagnostic measured over a sequence of meshes.
#[derive(Clone, Debug, PartialEq)]
pub struct SuperaccReport {
    pub name: String,
    pub n: Vec<usize>,
    /// Maximum over cells, or the dual norm.
    pub values: Vec<f64>,
    pub slope: f64,
    pub target: f64,
}

impl SuperaccReport {
    fn new(name: &str, n: &[usize], values: Vec<f64>, target: f64) -> Result<SuperaccReport> {
        let h: Vec<f64> = n.iter().map(|&n| 1.0 / n as f64).collect();
        let slope = fit_rate(&h, &values)?;
        Ok(SuperaccReport {
            name: name.to_string(),
            n: n.to_vec(),
            values,
            slope,
            target,
        })
    }
}

fn max_abs(v: &[f64]) -> f64 {
    v.iter().fold(0.0, |m, x| m.max(x.abs()))
}

fn spaces(n: usize) -> Result<(Arc<FemSpace>, Arc<FemSpace>)> {
    let mesh = Arc::new(Mesh::uniform(n)?);
    Ok((
        FemSpace::new(mesh.clone(), SpaceSpec::linear(Boundary::Free))?,
        FemSpace::new(mesh, SpaceSpec::linear(Boundary::ZeroEndpoints))?,
    ))
}

/// Runs every diagnostic on uniform meshes with the given cell counts.
///
/// Data: `u = sin πx` (zero-endpoint space), `η = cos πx` (free space),
/// weights `e^x` and `w = sin πx`.
pub fn standard_suite(ns: &[usize]) -> Result<Vec<SuperaccReport>> {
    use std::f64::consts::PI;
    let u = |x: f64| (PI * x).sin();
    let eta = |x: f64| (PI * x).cos();
    let w = |x: f64| (PI * x).sin();
    let v = |x: f64| x.exp();

    type Row = [f64; 12];
    let rows: Vec<Row> = ns
        .par_iter()
        .map(|&n| -> Result<Row> {
            let (free, zero) = spaces(n)?;
            let none = None::<fn(f64) -> f64>;
            let zeta = dual_functional_norms(
                &free,
                &zero,
                DualData { eta: &eta, u: &u, w: &w, v: &v },
            )?;
            Ok([
                max_abs(&cell_moments(&zero, u, none)?),
                max_abs(&cell_moments(&free, eta, none)?),
                max_abs(&midpoint_derivative_errors(&zero, |x| (u(x), PI * (PI * x).cos()))?),
                max_abs(&midpoint_derivative_errors(&free, |x| (eta(x), -PI * (PI * x).sin()))?),
                max_abs(&cell_moments(&zero, u, Some(v))?),
                max_abs(&cell_moments(&free, eta, Some(v))?),
                zeta[0],
                zeta[1],
                zeta[2],
                zeta[3],
                zeta[4],
                zeta[5],
            ])
        })
        .collect::<Result<_>>()?;
    let names: [(&str, f64); 12] = [
        ("moment_zero_sin", 5.0),
        ("moment_free_cos", 5.0),
        ("midpoint_deriv_zero_sin", 2.0),
        ("midpoint_deriv_free_cos", 2.0),
        ("weighted_moment_zero_sin", 5.0),
        ("weighted_moment_free_cos", 5.0),
        ("zeta1", 3.0),
        ("zeta2", 3.0),
        ("zeta3", 3.0),
        ("zeta4", 3.0),
        ("zeta5", 3.0),
        ("zeta6", 3.0),
    ];
    names
        .iter()
        .enumerate()
        .map(|(j, (name, target))| {
            SuperaccReport::new(name, ns, rows.iter().map(|r| r[j]).collect(), *target)
        })
        .collect()
}
