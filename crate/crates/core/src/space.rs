//! Spline spaces `S_h^{r,k}` on a mesh of `[0, 1]`.
//!
//! Every supported space is realized with B-splines of degree `p = r - 1`
//! and maximal smoothness `C^{p-1}`:
//!
//! * `Free` uses the clamped knot vector (endpoint knots repeated `p + 1`
//!   times), giving `N + p` functions that form a partition of unity.
//! * `ZeroEndpoints` drops the first and last clamped B-spline, the only two
//!   that do not vanish at `x = 0` and `x = 1`.
//! * `Periodic` wraps the knot vector around and identifies `B_j` with
//!   `B_{j+N}`, giving `N` functions.
//!
//! On each cell exactly `p + 1` B-splines are active; the space precomputes
//! their values and derivatives at the quadrature points it uses.

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use crate::banded::{BandedCholesky, BandedMatrix};
use crate::error::{Error, Result};
use crate::mesh::Mesh;
use crate::quadrature::QuadRule;

/// Largest supported number of active functions per cell.
pub const MAX_LOCAL: usize = 4;

/// Number of points of the high-accuracy rule used for error measurement
/// and diagnostics.
pub const ORACLE_POINTS: usize = 8;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Boundary {
    Free,
    ZeroEndpoints,
    Periodic,
}

impl fmt::Display for Boundary {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Boundary::Free => "free",
            Boundary::ZeroEndpoints => "zero_endpoints",
            Boundary::Periodic => "periodic",
        })
    }
}

impl FromStr for Boundary {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "free" => Ok(Boundary::Free),
            "zero_endpoints" | "zero" => Ok(Boundary::ZeroEndpoints),
            "periodic" => Ok(Boundary::Periodic),
            other => Err(Error::Parse(format!("unknown boundary mode '{other}'"))),
        }
    }
}

/// Order `r` (degree `r - 1`), smoothness `k` and boundary treatment.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct SpaceSpec {
    pub order: usize,
    pub smoothness: usize,
    pub boundary: Boundary,
}

impl SpaceSpec {
    pub fn new(order: usize, smoothness: usize, boundary: Boundary) -> SpaceSpec {
        SpaceSpec {
            order,
            smoothness,
            boundary,
        }
    }

    /// Continuous piecewise linears.
    pub fn linear(boundary: Boundary) -> SpaceSpec {
        SpaceSpec::new(2, 0, boundary)
    }

    /// `C²` cubic splines.
    pub fn cubic(boundary: Boundary) -> SpaceSpec {
        SpaceSpec::new(4, 2, boundary)
    }

    /// Periodic splines of order `r` and maximal smoothness.
    pub fn periodic(order: usize) -> SpaceSpec {
        SpaceSpec::new(order, order.saturating_sub(2), Boundary::Periodic)
    }

    /// Same order and smoothness with a different boundary mode.
    pub fn with_boundary(self, boundary: Boundary) -> SpaceSpec {
        SpaceSpec { boundary, ..self }
    }

    pub fn validate(&self) -> Result<()> {
        let ok = match self.boundary {
            Boundary::Free | Boundary::ZeroEndpoints => {
                matches!((self.order, self.smoothness), (2, 0) | (4, 2))
            }
            Boundary::Periodic => {
                (2..=4).contains(&self.order) && self.smoothness + 2 == self.order
            }
        };
        if ok {
            Ok(())
        } else {
            Err(Error::UnsupportedSpace(self.to_string()))
        }
    }
}

impl fmt::Display for SpaceSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(r={}, k={}, {})", self.order, self.smoothness, self.boundary)
    }
}

/// Basis values, derivatives and weighted points of one quadrature rule on
/// every cell.
#[derive(Clone, Debug)]
pub struct Tabulation {
    q: usize,
    nloc: usize,
    /// Physical quadrature points, `cells * q`.
    pub x: Vec<f64>,
    /// Weights multiplied by the cell width, `cells * q`.
    pub w: Vec<f64>,
    /// `cells * q * nloc`
    pub vals: Vec<f64>,
    /// `cells * q * nloc`
    pub ders: Vec<f64>,
}

impl Tabulation {
    pub fn points_per_cell(&self) -> usize {
        self.q
    }

    #[inline]
    pub fn point(&self, cell: usize, k: usize) -> (f64, f64) {
        let i = cell * self.q + k;
        (self.x[i], self.w[i])
    }

    #[inline]
    pub fn basis(&self, cell: usize, k: usize) -> (&[f64], &[f64]) {
        let o = (cell * self.q + k) * self.nloc;
        (&self.vals[o..o + self.nloc], &self.ders[o..o + self.nloc])
    }
}

/// A finite element space with its factored Gram matrix.
#[derive(Debug)]
pub struct FemSpace {
    mesh: Arc<Mesh>,
    spec: SpaceSpec,
    degree: usize,
    knots: Vec<f64>,
    /// `cells * (degree + 1)`; `None` marks a dropped boundary function.
    dofs: Vec<Option<usize>>,
    dim: usize,
    gram: BandedMatrix,
    chol: BandedCholesky,
    tab_gram: Tabulation,
    tab_load: Tabulation,
    tab_oracle: Tabulation,
}

impl FemSpace {
    /// Builds the space and assembles and factors its Gram matrix.
    pub fn new(mesh: Arc<Mesh>, spec: SpaceSpec) -> Result<Arc<FemSpace>> {
        spec.validate()?;
        let degree = spec.order - 1;
        let n = mesh.cells();
        if spec.boundary == Boundary::Periodic && spec.order > 2 && !mesh.is_uniform() {
            return Err(Error::UnsupportedSpace(format!(
                "(r={}, k={}, periodic) requires a uniform mesh",
                spec.order, spec.smoothness
            )));
        }
        let nodes = mesh.nodes();
        let knots: Vec<f64> = match spec.boundary {
            Boundary::Free | Boundary::ZeroEndpoints => {
                let mut k = vec![0.0; degree + 1];
                k.extend_from_slice(&nodes[1..n]);
                k.extend(std::iter::repeat(1.0).take(degree + 1));
                k
            }
            Boundary::Periodic => {
                let widths = mesh.widths();
                let mut k = Vec::with_capacity(n + 2 * degree + 1);
                for j in (1..=degree).rev() {
                    // x_{-j} = x_{N-j} - 1
                    k.push(nodes[n - j] - 1.0);
                }
                k.extend_from_slice(nodes);
                for j in 1..=degree {
                    k.push(1.0 + nodes[j]);
                }
                debug_assert_eq!(widths.len(), n);
                k
            }
        };
        let full = n + degree;
        let (dim, map): (usize, Vec<Option<usize>>) = match spec.boundary {
            Boundary::Free => (full, (0..full).map(Some).collect()),
            Boundary::ZeroEndpoints => {
                let mut m: Vec<Option<usize>> = (0..full).map(|j| j.checked_sub(1)).collect();
                m[full - 1] = None;
                (full - 2, m)
            }
            Boundary::Periodic => (n, (0..full).map(|j| Some(j % n)).collect()),
        };
        if dim == 0 {
            return Err(Error::UnsupportedSpace(format!(
                "(r={}, k={}, {}) on {n} cells has no degrees of freedom",
                spec.order, spec.smoothness, spec.boundary
            )));
        }
        let nloc = degree + 1;
        let mut dofs = Vec::with_capacity(n * nloc);
        for c in 0..n {
            for a in 0..nloc {
                dofs.push(map[c + a]);
            }
        }

        let tab = |q: usize| -> Result<Tabulation> {
            tabulate(&mesh, &knots, degree, &QuadRule::gauss(q)?)
        };
        let tab_gram = tab(spec.order + 1)?;
        let tab_load = tab(spec.order + 2)?;
        let tab_oracle = tab(ORACLE_POINTS)?;

        let periodic = spec.boundary == Boundary::Periodic;
        if periodic && n < 2 * degree + 1 {
            return Err(Error::UnsupportedSpace(format!(
                "periodic order {} needs at least {} cells",
                spec.order,
                2 * degree + 1
            )));
        }
        let mut gram = BandedMatrix::zeros(dim, degree, periodic)?;
        for c in 0..n {
            let cd = &dofs[c * nloc..(c + 1) * nloc];
            for k in 0..tab_gram.q {
                let (_, w) = tab_gram.point(c, k);
                let (v, _) = tab_gram.basis(c, k);
                for a in 0..nloc {
                    let Some(i) = cd[a] else { continue };
                    for b in 0..nloc {
                        let Some(j) = cd[b] else { continue };
                        gram.add(i, j, w * v[a] * v[b]);
                    }
                }
            }
        }
        let chol = gram.factor()?;
        Ok(Arc::new(FemSpace {
            mesh,
            spec,
            degree,
            knots,
            dofs,
            dim,
            gram,
            chol,
            tab_gram,
            tab_load,
            tab_oracle,
        }))
    }

    pub fn mesh(&self) -> &Arc<Mesh> {
        &self.mesh
    }

    pub fn spec(&self) -> SpaceSpec {
        self.spec
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn local_count(&self) -> usize {
        self.degree + 1
    }

    pub fn boundary(&self) -> Boundary {
        self.spec.boundary
    }

    /// Degrees of freedom active on cell `c`.
    #[inline]
    pub fn cell_dofs(&self, c: usize) -> &[Option<usize>] {
        let nloc = self.degree + 1;
        &self.dofs[c * nloc..(c + 1) * nloc]
    }

    pub fn gram(&self) -> &BandedMatrix {
        &self.gram
    }

    pub fn gram_factor(&self) -> &BandedCholesky {
        &self.chol
    }

    /// Solves `G x = b` in place.
    pub fn solve_in_place(&self, b: &mut [f64]) -> Result<()> {
        self.chol.solve_in_place(b)
    }

    /// Rule with `r + 1` points (Gram matrix and nonlinear terms).
    pub fn tab_gram(&self) -> &Tabulation {
        &self.tab_gram
    }

    /// Rule with `r + 2` points (load vectors).
    pub fn tab_load(&self) -> &Tabulation {
        &self.tab_load
    }

    /// Eight-point rule used for errors and diagnostics.
    pub fn tab_oracle(&self) -> &Tabulation {
        &self.tab_oracle
    }

    /// Values and derivatives of the active functions of cell `c` at `x`.
    pub fn eval_local(&self, c: usize, x: f64) -> ([f64; MAX_LOCAL], [f64; MAX_LOCAL]) {
        ders_basis(&self.knots, c + self.degree, x, self.degree)
    }

    /// Value and derivative of basis function `j` at `x`.
    pub fn basis_eval(&self, j: usize, x: f64) -> (f64, f64) {
        let c = self.mesh.locate(x);
        let (v, d) = self.eval_local(c, x);
        let mut out = (0.0, 0.0);
        for (a, dof) in self.cell_dofs(c).iter().enumerate() {
            if *dof == Some(j) {
                out.0 += v[a];
                out.1 += d[a];
            }
        }
        out
    }

    /// Range of cells on which basis function `j` is not identically zero.
    pub fn support_cells(&self, j: usize) -> Vec<usize> {
        (0..self.mesh.cells())
            .filter(|&c| self.cell_dofs(c).contains(&Some(j)))
            .collect()
    }

    pub fn same_mesh(&self, other: &FemSpace) -> bool {
        Arc::ptr_eq(&self.mesh, &other.mesh)
            || (self.mesh.family() == other.mesh.family()
                && self.mesh.nodes() == other.mesh.nodes())
    }
}

fn tabulate(mesh: &Mesh, knots: &[f64], degree: usize, rule: &QuadRule) -> Result<Tabulation> {
    let n = mesh.cells();
    let q = rule.len();
    let nloc = degree + 1;
    let mut x = Vec::with_capacity(n * q);
    let mut w = Vec::with_capacity(n * q);
    let mut vals = Vec::with_capacity(n * q * nloc);
    let mut ders = Vec::with_capacity(n * q * nloc);
    for c in 0..n {
        let (a, h) = mesh.cell(c);
        for (&p, &wt) in rule.points().iter().zip(rule.weights()) {
            let xp = a + h * p;
            x.push(xp);
            w.push(h * wt);
            let (v, d) = ders_basis(knots, c + degree, xp, degree);
            vals.extend_from_slice(&v[..nloc]);
            ders.extend_from_slice(&d[..nloc]);
        }
    }
    Ok(Tabulation {
        q,
        nloc,
        x,
        w,
        vals,
        ders,
    })
}

/// Values and first derivatives of the `p + 1` B-splines active on knot span
/// `span` (Cox–de Boor triangle).
fn ders_basis(knots: &[f64], span: usize, x: f64, p: usize) -> ([f64; MAX_LOCAL], [f64; MAX_LOCAL]) {
    let mut ndu = [[0.0f64; MAX_LOCAL]; MAX_LOCAL];
    let mut left = [0.0f64; MAX_LOCAL];
    let mut right = [0.0f64; MAX_LOCAL];
    ndu[0][0] = 1.0;
    for j in 1..=p {
        left[j] = x - knots[span + 1 - j];
        right[j] = knots[span + j] - x;
        let mut saved = 0.0;
        for r in 0..j {
            ndu[j][r] = right[r + 1] + left[j - r];
            let temp = ndu[r][j - 1] / ndu[j][r];
            ndu[r][j] = saved + right[r + 1] * temp;
            saved = left[j - r] * temp;
        }
        ndu[j][j] = saved;
    }
    let mut vals = [0.0; MAX_LOCAL];
    let mut ders = [0.0; MAX_LOCAL];
    for r in 0..=p {
        vals[r] = ndu[r][p];
        if p == 0 {
            continue;
        }
        let mut d = 0.0;
        if r >= 1 {
            d += ndu[r - 1][p - 1] / ndu[p][r - 1];
        }
        if r < p {
            d -= ndu[r][p - 1] / ndu[p][r];
        }
        ders[r] = p as f64 * d;
    }
    (vals, ders)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mesh::MeshFamily;

    fn space(n: usize, spec: SpaceSpec) -> Arc<FemSpace> {
        FemSpace::new(Arc::new(Mesh::uniform(n).unwrap()), spec).unwrap()
    }

    #[test]
    fn dimensions() {
        let n = 10;
        assert_eq!(space(n, SpaceSpec::linear(Boundary::Free)).dim(), n + 1);
        assert_eq!(space(n, SpaceSpec::linear(Boundary::ZeroEndpoints)).dim(), n - 1);
        assert_eq!(space(n, SpaceSpec::cubic(Boundary::Free)).dim(), n + 3);
        assert_eq!(space(n, SpaceSpec::cubic(Boundary::ZeroEndpoints)).dim(), n + 1);
        for r in 2..=4 {
            assert_eq!(space(n, SpaceSpec::periodic(r)).dim(), n);
        }
    }

    #[test]
    fn hat_functions_are_nodal() {
        let s = space(4, SpaceSpec::linear(Boundary::Free));
        assert_eq!(s.dim(), 5);
        let nodes = s.mesh().nodes().to_vec();
        for i in 0..5 {
            for (j, &x) in nodes.iter().enumerate() {
                let (v, _) = s.basis_eval(i, x);
                let expect = if i == j { 1.0 } else { 0.0 };
                assert!((v - expect).abs() < 1e-15, "phi_{i}(x_{j}) = {v}");
            }
        }
    }

    #[test]
    fn zero_endpoint_dimension_and_values() {
        let s = space(4, SpaceSpec::linear(Boundary::ZeroEndpoints));
        assert_eq!(s.dim(), 3);
        for spec in [
            SpaceSpec::linear(Boundary::ZeroEndpoints),
            SpaceSpec::cubic(Boundary::ZeroEndpoints),
        ] {
            let s = space(9, spec);
            for j in 0..s.dim() {
                assert!(s.basis_eval(j, 0.0).0.abs() < 1e-14);
                assert!(s.basis_eval(j, 1.0).0.abs() < 1e-14);
            }
        }
    }

    #[test]
    fn periodic_cubic_support() {
        let s = space(8, SpaceSpec::periodic(4));
        assert_eq!(s.dim(), 8);
        for j in 0..8 {
            assert_eq!(s.support_cells(j).len(), 4);
        }
    }

    #[test]
    fn partition_of_unity() {
        let mesh = Arc::new(Mesh::build(MeshFamily::SlowlyVarying, 21).unwrap());
        for spec in [
            SpaceSpec::linear(Boundary::Free),
            SpaceSpec::cubic(Boundary::Free),
        ] {
            let s = FemSpace::new(mesh.clone(), spec).unwrap();
            for k in 0..=200 {
                let x = k as f64 / 200.0;
                let sum: f64 = (0..s.dim()).map(|j| s.basis_eval(j, x).0).sum();
                assert!((sum - 1.0).abs() < 1e-13);
            }
        }
        for r in 2..=4 {
            let s = space(12, SpaceSpec::periodic(r));
            for k in 0..=97 {
                let x = k as f64 / 97.0;
                let sum: f64 = (0..s.dim()).map(|j| s.basis_eval(j, x).0).sum();
                assert!((sum - 1.0).abs() < 1e-13);
            }
        }
    }

    #[test]
    fn support_width_bounded_by_order() {
        for spec in [
            SpaceSpec::linear(Boundary::Free),
            SpaceSpec::cubic(Boundary::Free),
            SpaceSpec::cubic(Boundary::ZeroEndpoints),
            SpaceSpec::periodic(3),
        ] {
            let s = space(16, spec);
            for j in 0..s.dim() {
                let cells = s.support_cells(j);
                assert!(!cells.is_empty() && cells.len() <= spec.order);
            }
        }
    }

    #[test]
    fn derivative_matches_finite_difference() {
        let mesh = Arc::new(Mesh::build(MeshFamily::PerturbedUniform, 12).unwrap());
        let step = 1e-6;
        for spec in [
            SpaceSpec::linear(Boundary::Free),
            SpaceSpec::cubic(Boundary::Free),
            SpaceSpec::cubic(Boundary::ZeroEndpoints),
        ] {
            let s = FemSpace::new(mesh.clone(), spec).unwrap();
            for c in 0..mesh.cells() {
                let (a, h) = mesh.cell(c);
                for t in [0.23, 0.5, 0.81] {
                    let x = a + t * h;
                    let (_, d) = s.eval_local(c, x);
                    let (vp, _) = s.eval_local(c, x + step);
                    let (vm, _) = s.eval_local(c, x - step);
                    for k in 0..s.local_count() {
                        let fd = (vp[k] - vm[k]) / (2.0 * step);
                        assert!((fd - d[k]).abs() < 1e-6 * (1.0 + d[k].abs()));
                    }
                }
            }
        }
    }

    #[test]
    fn unsupported_combinations() {
        let m = Arc::new(Mesh::uniform(8).unwrap());
        let err = FemSpace::new(m.clone(), SpaceSpec::new(3, 1, Boundary::Free)).unwrap_err();
        assert!(err.to_string().contains("r=3, k=1, free"));
        assert!(FemSpace::new(m.clone(), SpaceSpec::new(4, 1, Boundary::Periodic)).is_err());
        let alt = Arc::new(Mesh::build(MeshFamily::AlternatingQuasiuniform, 8).unwrap());
        assert!(FemSpace::new(alt.clone(), SpaceSpec::periodic(4)).is_err());
        assert!(FemSpace::new(alt, SpaceSpec::periodic(2)).is_ok());
    }

    #[test]
    fn gram_linear_uniform_entries() {
        let n = 8;
        let h = 1.0 / n as f64;
        let s = space(n, SpaceSpec::linear(Boundary::ZeroEndpoints));
        let g = s.gram();
        for i in 0..s.dim() {
            assert!((g.get(i, i) - 4.0 * h / 6.0).abs() < 1e-15);
            if i + 1 < s.dim() {
                assert!((g.get(i, i + 1) - h / 6.0).abs() < 1e-15);
            }
        }
        let s = space(n, SpaceSpec::linear(Boundary::Free));
        let g = s.gram();
        assert!((g.get(0, 0) - h / 3.0).abs() < 1e-15);
        assert!((g.get(n, n) - h / 3.0).abs() < 1e-15);
        assert!((g.get(3, 3) - 2.0 * h / 3.0).abs() < 1e-15);
        assert!((g.get(3, 4) - h / 6.0).abs() < 1e-15);
    }
}
