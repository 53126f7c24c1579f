//! Finite element functions, `L²` projections and nodal interpolation.

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::space::{FemSpace, Tabulation};

/// A coefficient vector in a [`FemSpace`].
#[derive(Clone, Debug)]
pub struct FemFunction {
    space: Arc<FemSpace>,
    coeffs: Vec<f64>,
}

impl FemFunction {
    pub fn new(space: Arc<FemSpace>, coeffs: Vec<f64>) -> Result<FemFunction> {
        if coeffs.len() != space.dim() {
            return Err(Error::DimensionMismatch {
                expected: space.dim(),
                found: coeffs.len(),
            });
        }
        Ok(FemFunction { space, coeffs })
    }

    pub fn zero(space: Arc<FemSpace>) -> FemFunction {
        let n = space.dim();
        FemFunction {
            space,
            coeffs: vec![0.0; n],
        }
    }

    pub fn space(&self) -> &Arc<FemSpace> {
        &self.space
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    pub fn coeffs_mut(&mut self) -> &mut [f64] {
        &mut self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<f64> {
        self.coeffs
    }

    /// Value and derivative at `x`.
    pub fn eval(&self, x: f64) -> (f64, f64) {
        let c = self.space.mesh().locate(x);
        self.eval_in_cell(c, x)
    }

    /// Value and derivative at `x`, using the polynomial piece of cell `c`.
    pub fn eval_in_cell(&self, c: usize, x: f64) -> (f64, f64) {
        let (v, d) = self.space.eval_local(c, x);
        let mut val = 0.0;
        let mut der = 0.0;
        for (a, dof) in self.space.cell_dofs(c).iter().enumerate() {
            if let Some(j) = dof {
                val += self.coeffs[*j] * v[a];
                der += self.coeffs[*j] * d[a];
            }
        }
        (val, der)
    }

    pub fn value(&self, x: f64) -> f64 {
        self.eval(x).0
    }

    /// Value and derivative at quadrature point `k` of cell `c`.
    #[inline]
    pub fn eval_tab(&self, tab: &Tabulation, c: usize, k: usize) -> (f64, f64) {
        eval_tab(&self.space, &self.coeffs, tab, c, k)
    }

    /// `‖·‖²` through the Gram matrix.
    pub fn norm_sq(&self) -> f64 {
        self.space.gram().quad_form(&self.coeffs)
    }

    pub fn l2_norm(&self) -> f64 {
        self.norm_sq().max(0.0).sqrt()
    }
}

/// Evaluates the coefficient vector `coeffs` of `space` at a tabulated point.
#[inline]
pub fn eval_tab(space: &FemSpace, coeffs: &[f64], tab: &Tabulation, c: usize, k: usize) -> (f64, f64) {
    let (v, d) = tab.basis(c, k);
    let mut val = 0.0;
    let mut der = 0.0;
    for (a, dof) in space.cell_dofs(c).iter().enumerate() {
        if let Some(j) = dof {
            val += coeffs[*j] * v[a];
            der += coeffs[*j] * d[a];
        }
    }
    (val, der)
}

/// Load vector `b_i = (f, φ_i)` computed with the given tabulation.
pub fn load_vector_with<F: Fn(f64) -> f64>(space: &FemSpace, tab: &Tabulation, f: F) -> Vec<f64> {
    let mut b = vec![0.0; space.dim()];
    for c in 0..space.mesh().cells() {
        let dofs = space.cell_dofs(c);
        for k in 0..tab.points_per_cell() {
            let (x, w) = tab.point(c, k);
            let fw = w * f(x);
            let (v, _) = tab.basis(c, k);
            for (a, dof) in dofs.iter().enumerate() {
                if let Some(j) = dof {
                    b[*j] += fw * v[a];
                }
            }
        }
    }
    b
}

/// Load vector with the `r + 2` point rule used by projections.
pub fn load_vector<F: Fn(f64) -> f64>(space: &FemSpace, f: F) -> Vec<f64> {
    load_vector_with(space, space.tab_load(), f)
}

/// `L²` projection of `f` onto `space`.
pub fn l2_project<F: Fn(f64) -> f64>(space: &Arc<FemSpace>, f: F) -> FemFunction {
    let mut b = load_vector(space, f);
    space
        .solve_in_place(&mut b)
        .expect("load vector has the space dimension");
    FemFunction {
        space: space.clone(),
        coeffs: b,
    }
}

/// How initial data are brought into a finite element space.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum InitialData {
    L2Projection,
    /// Nodal interpolation; piecewise linear spaces only.
    Interpolation,
}

impl InitialData {
    pub fn name(self) -> &'static str {
        match self {
            InitialData::L2Projection => "projection",
            InitialData::Interpolation => "interpolation",
        }
    }

    pub fn apply<F: Fn(f64) -> f64>(self, space: &Arc<FemSpace>, f: F) -> Result<FemFunction> {
        match self {
            InitialData::L2Projection => Ok(l2_project(space, f)),
            InitialData::Interpolation => interpolate(space, f),
        }
    }
}

impl fmt::Display for InitialData {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for InitialData {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "projection" | "l2" => Ok(InitialData::L2Projection),
            "interpolation" | "nodal" => Ok(InitialData::Interpolation),
            other => Err(Error::Parse(format!(
                "unknown initial data mode '{other}' (expected projection or interpolation)"
            ))),
        }
    }
}

/// Nodal interpolant of `f`. Only piecewise linear spaces have a nodal
/// basis; for zero-endpoint spaces the endpoint values of `f` are dropped.
pub fn interpolate<F: Fn(f64) -> f64>(space: &Arc<FemSpace>, f: F) -> Result<FemFunction> {
    if space.spec().order != 2 {
        return Err(Error::UnsupportedSpace(format!(
            "nodal interpolation needs piecewise linears, got {}",
            space.spec()
        )));
    }
    let mesh = space.mesh();
    let mut coeffs = vec![0.0; space.dim()];
    let mut done = vec![false; space.dim()];
    // first visit wins, so periodic spaces take the value at x = 0
    for c in 0..mesh.cells() {
        let dofs = space.cell_dofs(c);
        for x in [mesh.nodes()[c], mesh.nodes()[c + 1]] {
            let (v, _) = space.eval_local(c, x);
            for (a, dof) in dofs.iter().enumerate() {
                if let Some(j) = *dof {
                    if !done[j] && (v[a] - 1.0).abs() < 1e-12 {
                        coeffs[j] = f(x);
                        done[j] = true;
                    }
                }
            }
        }
    }
    FemFunction::new(space.clone(), coeffs)
}

/// `L²` and `H¹`-seminorm of `g - f`, plus the sup over sample points, where
/// `f` is given with its derivative.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct DiffNorms {
    pub l2: f64,
    pub linf: f64,
    pub h1_semi: f64,
}

impl DiffNorms {
    /// Full `H¹` norm `(‖e‖² + ‖e'‖²)^{1/2}`.
    pub fn h1(&self) -> f64 {
        (self.l2 * self.l2 + self.h1_semi * self.h1_semi).sqrt()
    }
}

/// Norms of `g - f` where `g` is a finite element function and `f` returns
/// `(value, derivative)`. `L²` and `H¹` use the eight-point rule per cell;
/// `L∞` samples 20 equispaced points per cell plus the nodes.
pub fn diff_norms<F: Fn(f64) -> (f64, f64)>(g: &FemFunction, f: F) -> DiffNorms {
    let space = g.space();
    let tab = space.tab_oracle();
    let mesh = space.mesh();
    let mut l2 = 0.0;
    let mut semi = 0.0;
    for c in 0..mesh.cells() {
        for k in 0..tab.points_per_cell() {
            let (x, w) = tab.point(c, k);
            let (gv, gd) = g.eval_tab(tab, c, k);
            let (fv, fd) = f(x);
            l2 += w * (gv - fv).powi(2);
            semi += w * (gd - fd).powi(2);
        }
    }
    let mut linf: f64 = 0.0;
    for c in 0..mesh.cells() {
        let (a, h) = mesh.cell(c);
        for s in 0..=20 {
            let x = if s == 20 { a + h } else { a + h * s as f64 / 20.0 };
            let (gv, _) = g.eval_in_cell(c, x);
            linf = linf.max((gv - f(x).0).abs());
        }
    }
    DiffNorms {
        l2: l2.sqrt(),
        linf,
        h1_semi: semi.sqrt(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mesh::{Mesh, MeshFamily};
    use crate::quadrature::QuadRule;
    use crate::space::{Boundary, SpaceSpec};
    use std::f64::consts::PI;

    fn space(n: usize, spec: SpaceSpec) -> Arc<FemSpace> {
        FemSpace::new(Arc::new(Mesh::uniform(n).unwrap()), spec).unwrap()
    }

    #[test]
    fn interpolant_matches_nodal_values() {
        let f = |x: f64| (3.0 * x).sin() + x;
        for (family, spec) in [
            (MeshFamily::SlowlyVarying, SpaceSpec::linear(Boundary::Free)),
            (MeshFamily::PerturbedUniform, SpaceSpec::linear(Boundary::ZeroEndpoints)),
            (MeshFamily::Uniform, SpaceSpec::periodic(2)),
        ] {
            let mesh = Arc::new(Mesh::build(family, 28).unwrap());
            let s = FemSpace::new(mesh.clone(), spec).unwrap();
            let g = interpolate(&s, f).unwrap();
            for (i, &x) in mesh.nodes().iter().enumerate() {
                let expect = match spec.boundary {
                    Boundary::ZeroEndpoints if i == 0 || i == 28 => 0.0,
                    Boundary::Periodic if i == 28 => f(0.0),
                    _ => f(x),
                };
                assert!((g.value(x) - expect).abs() < 1e-14, "{family} {i}");
            }
        }
        let cubic = space(8, SpaceSpec::cubic(Boundary::Free));
        assert!(matches!(interpolate(&cubic, f), Err(Error::UnsupportedSpace(_))));
        assert_eq!("nodal".parse::<InitialData>().unwrap(), InitialData::Interpolation);
    }

    #[test]
    fn constant_in_free_linear_space() {
        let s = space(10, SpaceSpec::linear(Boundary::Free));
        let p = l2_project(&s, |_| 1.0);
        for &c in p.coeffs() {
            assert!((c - 1.0).abs() < 1e-13);
        }
    }

    #[test]
    fn idempotent_on_members() {
        let mesh = Arc::new(Mesh::build(MeshFamily::PiecewiseUniform, 20).unwrap());
        for spec in [
            SpaceSpec::linear(Boundary::Free),
            SpaceSpec::linear(Boundary::ZeroEndpoints),
            SpaceSpec::cubic(Boundary::Free),
            SpaceSpec::cubic(Boundary::ZeroEndpoints),
        ] {
            let s = FemSpace::new(mesh.clone(), spec).unwrap();
            let coeffs: Vec<f64> = (0..s.dim()).map(|i| ((i * 7 % 11) as f64 - 5.0) / 3.0).collect();
            let chi = FemFunction::new(s.clone(), coeffs.clone()).unwrap();
            let p = l2_project(&s, |x| chi.value(x));
            for (a, b) in p.coeffs().iter().zip(&coeffs) {
                assert!((a - b).abs() < 1e-11);
            }
        }
    }

    #[test]
    fn galerkin_orthogonality() {
        let s = space(32, SpaceSpec::cubic(Boundary::ZeroEndpoints));
        let f = |x: f64| (3.0 * x).exp() * (PI * x).sin();
        let p = l2_project(&s, f);
        let rule = QuadRule::gauss(10).unwrap();
        let h = 1.0 / 32.0;
        for j in 0..s.dim() {
            let mut r = 0.0;
            for c in s.support_cells(j) {
                let (a, hc) = s.mesh().cell(c);
                r += rule.integrate(a, hc, |x| {
                    let (pv, _) = p.eval_in_cell(c, x);
                    let (v, _) = s.eval_local(c, x);
                    let idx = s.cell_dofs(c).iter().position(|d| *d == Some(j)).unwrap();
                    (f(x) - pv) * v[idx]
                });
            }
            assert!(r.abs() <= 1e-11 * 20.0 * h, "j={j} r={r}");
        }
    }

    #[test]
    fn zero_endpoint_values() {
        let s = space(16, SpaceSpec::cubic(Boundary::ZeroEndpoints));
        let p = l2_project(&s, |x| x.exp());
        assert!(p.value(0.0).abs() < 1e-13);
        assert!(p.value(1.0).abs() < 1e-13);
    }

    #[test]
    fn diff_norms_of_self_vanish() {
        let s = space(12, SpaceSpec::cubic(Boundary::Free));
        let p = l2_project(&s, |x| x.sin());
        let d = diff_norms(&p, |x| p.eval(x));
        assert!(d.l2 < 1e-12 && d.linf < 1e-12 && d.h1() < 1e-12);
    }
}
