//! Galerkin semidiscretizations of the shallow-water systems
//!
//! ```text
//! SW_ε:   η_t + u_x + ε(ηu)_x = f₁,          u_t + η_x + ε u u_x = f₂
//! SSW_ε:  η_t + u_x + (ε/2)(ηu)_x = f₁,      u_t + η_x + (ε/2) η η_x + (3ε/2) u u_x = f₂
//! ```
//!
//! `η_h` lives in a free (or periodic) space and `u_h` in a zero-endpoint
//! (or periodic) space of the same order on the same mesh. Nonlinear terms
//! are integrated with the `r + 1` point rule after expanding
//! `(ηu)_x = η_x u + η u_x`; forcing loads use the `r + 2` point rule.

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::presets::ManufacturedSolution;
use crate::projection::{eval_tab, l2_project, FemFunction, InitialData};
use crate::space::{Boundary, FemSpace};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Equations {
    Sw,
    Ssw,
}

impl fmt::Display for Equations {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Equations::Sw => "sw",
            Equations::Ssw => "ssw",
        })
    }
}

impl FromStr for Equations {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "sw" => Ok(Equations::Sw),
            "ssw" => Ok(Equations::Ssw),
            other => Err(Error::Parse(format!("unknown system '{other}'"))),
        }
    }
}

/// Which system, and the amplitude parameter `ε` (1 for the unscaled form).
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SystemKind {
    pub equations: Equations,
    pub epsilon: f64,
}

impl SystemKind {
    pub fn sw() -> SystemKind {
        SystemKind {
            equations: Equations::Sw,
            epsilon: 1.0,
        }
    }

    pub fn ssw() -> SystemKind {
        SystemKind {
            equations: Equations::Ssw,
            epsilon: 1.0,
        }
    }

    pub fn with_epsilon(self, epsilon: f64) -> SystemKind {
        SystemKind { epsilon, ..self }
    }

    /// Coefficients `(a, b, c)` of `a(ηu)_x` in the first equation and of
    /// `b η η_x + c u u_x` in the second.
    fn coefficients(&self) -> (f64, f64, f64) {
        let e = self.epsilon;
        match self.equations {
            Equations::Sw => (e, 0.0, e),
            Equations::Ssw => (0.5 * e, 0.5 * e, 1.5 * e),
        }
    }
}

/// `(η_h, u_h)` at time `t`.
#[derive(Clone, Debug)]
pub struct SystemState {
    pub eta: FemFunction,
    pub u: FemFunction,
    pub t: f64,
}

impl SystemState {
    /// `‖η_h‖² + ‖u_h‖²`.
    pub fn energy(&self) -> f64 {
        self.eta.norm_sq() + self.u.norm_sq()
    }
}

/// `‖η_h‖² + ‖u_h‖²`.
pub fn energy(state: &SystemState) -> f64 {
    state.energy()
}

/// A semidiscrete system: equations, spaces and optional forcing.
///
/// The unknown vector is the concatenation of the `η_h` and `u_h`
/// coefficients.
#[derive(Clone, Debug)]
pub struct Semidiscrete {
    system: SystemKind,
    eta_space: Arc<FemSpace>,
    u_space: Arc<FemSpace>,
    forcing: Option<ManufacturedSolution>,
}

impl Semidiscrete {
    pub fn new(
        system: SystemKind,
        eta_space: Arc<FemSpace>,
        u_space: Arc<FemSpace>,
    ) -> Result<Semidiscrete> {
        if !(system.epsilon > 0.0) || !system.epsilon.is_finite() {
            return Err(Error::InvalidArgument(format!(
                "epsilon must be positive, got {}",
                system.epsilon
            )));
        }
        if !eta_space.same_mesh(&u_space) {
            return Err(Error::SpaceMismatch("η and u spaces use different meshes".into()));
        }
        if eta_space.spec().order != u_space.spec().order {
            return Err(Error::SpaceMismatch(format!(
                "η space {} and u space {} differ in order",
                eta_space.spec(),
                u_space.spec()
            )));
        }
        let ok = matches!(
            (eta_space.boundary(), u_space.boundary()),
            (Boundary::Free, Boundary::ZeroEndpoints) | (Boundary::Periodic, Boundary::Periodic)
        );
        if !ok {
            return Err(Error::SpaceMismatch(format!(
                "η in {} with u in {} is not a supported pairing",
                eta_space.boundary(),
                u_space.boundary()
            )));
        }
        Ok(Semidiscrete {
            system,
            eta_space,
            u_space,
            forcing: None,
        })
    }

    /// Adds the forcing that makes `m` an exact solution.
    pub fn with_forcing(mut self, m: ManufacturedSolution) -> Semidiscrete {
        self.forcing = Some(m);
        self
    }

    pub fn system(&self) -> SystemKind {
        self.system
    }

    pub fn forcing(&self) -> Option<ManufacturedSolution> {
        self.forcing
    }

    pub fn eta_space(&self) -> &Arc<FemSpace> {
        &self.eta_space
    }

    pub fn u_space(&self) -> &Arc<FemSpace> {
        &self.u_space
    }

    /// Length of the unknown vector.
    pub fn dim(&self) -> usize {
        self.eta_space.dim() + self.u_space.dim()
    }

    /// `L²` projections of the initial data.
    pub fn initial_state<E, U>(&self, eta0: E, u0: U) -> SystemState
    where
        E: Fn(f64) -> f64,
        U: Fn(f64) -> f64,
    {
        SystemState {
            eta: l2_project(&self.eta_space, eta0),
            u: l2_project(&self.u_space, u0),
            t: 0.0,
        }
    }

    /// Initial state built with the given mode.
    pub fn initial_state_with<E, U>(&self, init: InitialData, eta0: E, u0: U) -> Result<SystemState>
    where
        E: Fn(f64) -> f64,
        U: Fn(f64) -> f64,
    {
        Ok(SystemState {
            eta: init.apply(&self.eta_space, eta0)?,
            u: init.apply(&self.u_space, u0)?,
            t: 0.0,
        })
    }

    /// Concatenated coefficients of a state.
    pub fn pack(&self, state: &SystemState) -> Result<Vec<f64>> {
        if state.eta.space().dim() != self.eta_space.dim()
            || state.u.space().dim() != self.u_space.dim()
        {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                found: state.eta.coeffs().len() + state.u.coeffs().len(),
            });
        }
        let mut y = state.eta.coeffs().to_vec();
        y.extend_from_slice(state.u.coeffs());
        Ok(y)
    }

    /// Splits a coefficient vector back into a state.
    pub fn unpack(&self, t: f64, y: &[f64]) -> Result<SystemState> {
        if y.len() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                found: y.len(),
            });
        }
        let m = self.eta_space.dim();
        Ok(SystemState {
            eta: FemFunction::new(self.eta_space.clone(), y[..m].to_vec())?,
            u: FemFunction::new(self.u_space.clone(), y[m..].to_vec())?,
            t,
        })
    }

    /// `‖η_h‖² + ‖u_h‖²` of a coefficient vector.
    pub fn energy_of(&self, y: &[f64]) -> f64 {
        let m = self.eta_space.dim();
        self.eta_space.gram().quad_form(&y[..m]) + self.u_space.gram().quad_form(&y[m..])
    }

    /// Time derivative of the coefficients at `(t, y)`, written to `dy`.
    pub fn rhs_into(&self, t: f64, y: &[f64], dy: &mut [f64]) -> Result<()> {
        if y.len() != self.dim() || dy.len() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                found: if y.len() != self.dim() { y.len() } else { dy.len() },
            });
        }
        let m = self.eta_space.dim();
        let (eta, u) = y.split_at(m);
        let (le, lu) = dy.split_at_mut(m);
        le.fill(0.0);
        lu.fill(0.0);
        let (a, b, c) = self.system.coefficients();
        let (se, su) = (&*self.eta_space, &*self.u_space);

        let te = se.tab_gram();
        let tu = su.tab_gram();
        for cell in 0..se.mesh().cells() {
            let de = se.cell_dofs(cell);
            let du = su.cell_dofs(cell);
            for k in 0..te.points_per_cell() {
                let (_, w) = te.point(cell, k);
                let (ev, ed) = eval_tab(se, eta, te, cell, k);
                let (uv, ud) = eval_tab(su, u, tu, cell, k);
                let g1 = w * (ud + a * (ed * uv + ev * ud));
                let g2 = w * (ed + b * ev * ed + c * uv * ud);
                let (pe, _) = te.basis(cell, k);
                let (pu, _) = tu.basis(cell, k);
                for (i, dof) in de.iter().enumerate() {
                    if let Some(j) = dof {
                        le[*j] -= g1 * pe[i];
                    }
                }
                for (i, dof) in du.iter().enumerate() {
                    if let Some(j) = dof {
                        lu[*j] -= g2 * pu[i];
                    }
                }
            }
        }

        if let Some(ms) = self.forcing {
            let te = se.tab_load();
            let tu = su.tab_load();
            for cell in 0..se.mesh().cells() {
                let de = se.cell_dofs(cell);
                let du = su.cell_dofs(cell);
                for k in 0..te.points_per_cell() {
                    let (x, w) = te.point(cell, k);
                    let (f1, f2) = ms.forcing(self.system, x, t);
                    let (pe, _) = te.basis(cell, k);
                    let (pu, _) = tu.basis(cell, k);
                    for (i, dof) in de.iter().enumerate() {
                        if let Some(j) = dof {
                            le[*j] += w * f1 * pe[i];
                        }
                    }
                    for (i, dof) in du.iter().enumerate() {
                        if let Some(j) = dof {
                            lu[*j] += w * f2 * pu[i];
                        }
                    }
                }
            }
        }

        se.solve_in_place(le)?;
        su.solve_in_place(lu)?;
        Ok(())
    }

    /// `(η_h', u_h')` at a state.
    pub fn rhs(&self, state: &SystemState) -> Result<(FemFunction, FemFunction)> {
        let y = self.pack(state)?;
        let mut dy = vec![0.0; y.len()];
        self.rhs_into(state.t, &y, &mut dy)?;
        let d = self.unpack(state.t, &dy)?;
        Ok((d.eta, d.u))
    }
}
