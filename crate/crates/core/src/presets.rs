//! Closed-form solutions used to manufacture forcing terms, and the initial
//! data of the unforced experiments.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::system::{Equations, SystemKind};

/// Values and first partial derivatives of an exact solution at one point.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct Fields {
    pub eta: f64,
    pub eta_t: f64,
    pub eta_x: f64,
    pub u: f64,
    pub u_t: f64,
    pub u_x: f64,
}

/// An exact solution `(η, u)` of a forced system.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ManufacturedSolution {
    /// `η = e^{2t}(cos πx + x + 2)`, `u = e^{-xt} sin πx`.
    CosSin,
    /// Same `η`, `u = e^{xt}(sin πx + x³ - x²)`.
    CubicBump,
    /// Same `η`, `u = e^{xt}(sin πx + 5x²(x - 1))`.
    CubicBump5,
    /// `η = 1 + 0.2 cos 2π(x - t/2)`, `u = 0.3 e^{-t/2} sin 2π(x + t)`.
    Periodic,
}

impl ManufacturedSolution {
    pub fn is_periodic(self) -> bool {
        self == ManufacturedSolution::Periodic
    }

    pub fn fields(self, x: f64, t: f64) -> Fields {
        use ManufacturedSolution::*;
        match self {
            CosSin | CubicBump | CubicBump5 => {
                let e2 = (2.0 * t).exp();
                let eta = e2 * ((PI * x).cos() + x + 2.0);
                let eta_x = e2 * (1.0 - PI * (PI * x).sin());
                let (u, u_t, u_x) = match self {
                    CosSin => {
                        let e = (-x * t).exp();
                        let u = e * (PI * x).sin();
                        (u, -x * u, -t * u + e * PI * (PI * x).cos())
                    }
                    _ => {
                        let (a, b) = if self == CubicBump { (1.0, 1.0) } else { (5.0, 5.0) };
                        let g = (PI * x).sin() + a * x * x * x - b * x * x;
                        let dg = PI * (PI * x).cos() + 3.0 * a * x * x - 2.0 * b * x;
                        let e = (x * t).exp();
                        let u = e * g;
                        (u, x * u, t * u + e * dg)
                    }
                };
                Fields {
                    eta,
                    eta_t: 2.0 * eta,
                    eta_x,
                    u,
                    u_t,
                    u_x,
                }
            }
            Periodic => {
                let a = 2.0 * PI * (x - 0.5 * t);
                let b = 2.0 * PI * (x + t);
                let d = (-0.5 * t).exp();
                Fields {
                    eta: 1.0 + 0.2 * a.cos(),
                    eta_t: 0.2 * PI * a.sin(),
                    eta_x: -0.4 * PI * a.sin(),
                    u: 0.3 * d * b.sin(),
                    u_t: 0.3 * d * (2.0 * PI * b.cos() - 0.5 * b.sin()),
                    u_x: 0.6 * PI * d * b.cos(),
                }
            }
        }
    }

    /// Right-hand sides `(f₁, f₂)` that make this an exact solution of
    /// `system`.
    pub fn forcing(self, system: SystemKind, x: f64, t: f64) -> (f64, f64) {
        let f = self.fields(x, t);
        let e = system.epsilon;
        let flux = f.eta_x * f.u + f.eta * f.u_x;
        match system.equations {
            Equations::Sw => (
                f.eta_t + f.u_x + e * flux,
                f.u_t + f.eta_x + e * f.u * f.u_x,
            ),
            Equations::Ssw => (
                f.eta_t + f.u_x + 0.5 * e * flux,
                f.u_t + f.eta_x + 0.5 * e * f.eta * f.eta_x + 1.5 * e * f.u * f.u_x,
            ),
        }
    }
}

/// Named data sets for experiments.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Preset {
    Table21,
    Table51,
    Table52,
    Periodic,
    /// Unforced: `η₀ = 1`, `u₀ = x(x - 1)`.
    Fig61,
}

impl Preset {
    pub fn name(self) -> &'static str {
        match self {
            Preset::Table21 => "table21",
            Preset::Table51 => "table51",
            Preset::Table52 => "table52",
            Preset::Periodic => "periodic",
            Preset::Fig61 => "fig61",
        }
    }

    /// The exact solution, if the preset is a forced problem.
    pub fn exact(self) -> Option<ManufacturedSolution> {
        match self {
            Preset::Table21 => Some(ManufacturedSolution::CosSin),
            Preset::Table51 => Some(ManufacturedSolution::CubicBump),
            Preset::Table52 => Some(ManufacturedSolution::CubicBump5),
            Preset::Periodic => Some(ManufacturedSolution::Periodic),
            Preset::Fig61 => None,
        }
    }

    pub fn is_periodic(self) -> bool {
        self == Preset::Periodic
    }

    /// `η(x, 0)`.
    pub fn eta0(self, x: f64) -> f64 {
        match self.exact() {
            Some(m) => m.fields(x, 0.0).eta,
            None => 1.0,
        }
    }

    /// `u(x, 0)`.
    pub fn u0(self, x: f64) -> f64 {
        match self.exact() {
            Some(m) => m.fields(x, 0.0).u,
            None => x * (x - 1.0),
        }
    }
}

impl fmt::Display for Preset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Preset {
    type Err = Error;

    /// Table names sharing an exact solution map to the same preset.
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "table21" | "table22" | "table23" | "table24" | "table25" | "table41" | "table42" => {
                Ok(Preset::Table21)
            }
            "table51" => Ok(Preset::Table51),
            "table52" => Ok(Preset::Table52),
            "periodic" => Ok(Preset::Periodic),
            "fig61" | "fig61-ci" | "fig61-full" => Ok(Preset::Fig61),
            other => Err(Error::Parse(format!("unknown preset '{other}'"))),
        }
    }
}
