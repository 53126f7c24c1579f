//! Explicit Runge–Kutta time stepping.
//!
//! Four schemes are provided: forward Euler, the improved Euler (explicit
//! midpoint) method, the three-stage third-order Shu–Osher scheme and the
//! classical fourth-order method. [`integrate`] advances with a constant step,
//! shortening only the last one so the final time is hit exactly, and reports
//! divergence as a value.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::mesh::Mesh;
use crate::system::Semidiscrete;

/// Energy above which a trajectory is declared divergent.
pub const BLOWUP_ENERGY: f64 = 1e10;

/// A system of ODEs `y' = f(t, y)` with a quadratic energy.
pub trait OdeSystem {
    fn dim(&self) -> usize;
    fn rhs(&self, t: f64, y: &[f64], dy: &mut [f64]) -> Result<()>;
    fn energy(&self, y: &[f64]) -> f64;
}

impl OdeSystem for Semidiscrete {
    fn dim(&self) -> usize {
        Semidiscrete::dim(self)
    }

    fn rhs(&self, t: f64, y: &[f64], dy: &mut [f64]) -> Result<()> {
        self.rhs_into(t, y, dy)
    }

    fn energy(&self, y: &[f64]) -> f64 {
        self.energy_of(y)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Scheme {
    Euler,
    ImprovedEuler,
    ShuOsher3,
    ClassicalRk4,
}

impl Scheme {
    pub fn stages(self) -> usize {
        match self {
            Scheme::Euler => 1,
            Scheme::ImprovedEuler => 2,
            Scheme::ShuOsher3 => 3,
            Scheme::ClassicalRk4 => 4,
        }
    }

    pub fn order(self) -> usize {
        self.stages()
    }

    pub fn name(self) -> &'static str {
        match self {
            Scheme::Euler => "euler",
            Scheme::ImprovedEuler => "improved_euler",
            Scheme::ShuOsher3 => "shu_osher",
            Scheme::ClassicalRk4 => "rk4",
        }
    }
}

impl fmt::Display for Scheme {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Scheme {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "euler" => Ok(Scheme::Euler),
            "improved_euler" | "ie" | "midpoint" => Ok(Scheme::ImprovedEuler),
            "shu_osher" | "so3" | "ssprk3" => Ok(Scheme::ShuOsher3),
            "rk4" => Ok(Scheme::ClassicalRk4),
            other => Err(Error::Parse(format!("unknown scheme '{other}'"))),
        }
    }
}

/// Exponent of the mesh spacing in a step rule.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Power {
    One,
    FourThirds,
    Two,
}

impl Power {
    pub fn value(self) -> f64 {
        match self {
            Power::One => 1.0,
            Power::FourThirds => 4.0 / 3.0,
            Power::Two => 2.0,
        }
    }
}

/// `k = c h^p`, with `h` the nominal spacing of the mesh.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct StepRule {
    pub c: f64,
    pub power: Power,
}

impl StepRule {
    /// `k = c h`.
    pub fn fixed_ratio(c: f64) -> Result<StepRule> {
        StepRule::new(c, Power::One)
    }

    pub fn new(c: f64, power: Power) -> Result<StepRule> {
        if !(c > 0.0) || !c.is_finite() {
            return Err(Error::InvalidArgument(format!("step constant must be positive, got {c}")));
        }
        Ok(StepRule { c, power })
    }

    pub fn step_for(&self, h: f64) -> f64 {
        self.c * h.powf(self.power.value())
    }

    pub fn step_for_mesh(&self, mesh: &Mesh) -> f64 {
        self.step_for(mesh.nominal_spacing())
    }
}

impl fmt::Display for StepRule {
    /// `h/10`, `h^(4/3)/10`, `h^2/10`, or `0.25*h` when `1/c` is not an
    /// integer.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let base = match self.power {
            Power::One => "h",
            Power::FourThirds => "h^(4/3)",
            Power::Two => "h^2",
        };
        let inv = 1.0 / self.c;
        if inv.fract() == 0.0 && 1.0 / inv == self.c {
            if inv == 1.0 {
                f.write_str(base)
            } else {
                write!(f, "{base}/{inv}")
            }
        } else {
            write!(f, "{}*{base}", self.c)
        }
    }
}

impl FromStr for StepRule {
    type Err = Error;

    /// Accepts `[c*]B[/m]` where `B` is `h`, `dx`, `h^(4/3)`, `h^2` (also
    /// `h^1`, `h^(2)`), with `c` and `m` positive numbers.
    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::Parse(format!("cannot parse step rule '{s}'"));
        let t: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        let (lead, rest) = match t.split_once('*') {
            Some((a, b)) if !a.starts_with('h') && !a.starts_with("dx") => {
                (a.parse::<f64>().map_err(|_| bad())?, b.to_string())
            }
            _ => (1.0, t.clone()),
        };
        let (base, div) = match rest.split_once('/') {
            Some((a, b)) if !a.ends_with("(4") => (a.to_string(), b.parse::<f64>().map_err(|_| bad())?),
            _ => match rest.rsplit_once(")/") {
                Some((a, b)) => (format!("{a})"), b.parse::<f64>().map_err(|_| bad())?),
                None => (rest.clone(), 1.0),
            },
        };
        let power = match base.as_str() {
            "h" | "dx" | "h^1" => Power::One,
            "h^(4/3)" | "dx^(4/3)" => Power::FourThirds,
            "h^2" | "h^(2)" | "dx^2" => Power::Two,
            _ => return Err(bad()),
        };
        StepRule::new(lead / div, power).map_err(|_| bad())
    }
}

/// Stage buffers for [`Stepper::step`].
#[derive(Clone, Debug)]
pub struct Stepper {
    scheme: Scheme,
    k1: Vec<f64>,
    k2: Vec<f64>,
    k3: Vec<f64>,
    k4: Vec<f64>,
    tmp: Vec<f64>,
}

impl Stepper {
    pub fn new(scheme: Scheme, dim: usize) -> Stepper {
        Stepper {
            scheme,
            k1: vec![0.0; dim],
            k2: vec![0.0; dim],
            k3: vec![0.0; dim],
            k4: vec![0.0; dim],
            tmp: vec![0.0; dim],
        }
    }

    pub fn scheme(&self) -> Scheme {
        self.scheme
    }

    /// Advances `y` from `t` to `t + k` in place.
    pub fn step<S: OdeSystem + ?Sized>(&mut self, sys: &S, t: f64, k: f64, y: &mut [f64]) -> Result<()> {
        let Stepper {
            k1, k2, k3, k4, tmp, ..
        } = self;
        let axpy = |out: &mut [f64], y: &[f64], terms: &[(f64, &[f64])]| {
            for i in 0..out.len() {
                let mut v = y[i];
                for (a, x) in terms {
                    v += a * x[i];
                }
                out[i] = v;
            }
        };
        match self.scheme {
            Scheme::Euler => {
                sys.rhs(t, y, k1)?;
                for (yi, di) in y.iter_mut().zip(k1.iter()) {
                    *yi += k * di;
                }
            }
            Scheme::ImprovedEuler => {
                sys.rhs(t, y, k1)?;
                axpy(tmp, y, &[(0.5 * k, k1)]);
                sys.rhs(t + 0.5 * k, tmp, k2)?;
                for (yi, di) in y.iter_mut().zip(k2.iter()) {
                    *yi += k * di;
                }
            }
            Scheme::ShuOsher3 => {
                // y1 = y + k f(t, y)
                // y2 = y + k/4 f(t, y) + k/4 f(t + k, y1)
                // y' = y + k/6 f(t, y) + k/6 f(t + k, y1) + 2k/3 f(t + k/2, y2)
                sys.rhs(t, y, k1)?;
                axpy(tmp, y, &[(k, k1)]);
                sys.rhs(t + k, tmp, k2)?;
                axpy(tmp, y, &[(0.25 * k, k1), (0.25 * k, k2)]);
                sys.rhs(t + 0.5 * k, tmp, k3)?;
                for i in 0..y.len() {
                    y[i] += k / 6.0 * (k1[i] + k2[i]) + 2.0 * k / 3.0 * k3[i];
                }
            }
            Scheme::ClassicalRk4 => {
                sys.rhs(t, y, k1)?;
                axpy(tmp, y, &[(0.5 * k, k1)]);
                sys.rhs(t + 0.5 * k, tmp, k2)?;
                axpy(tmp, y, &[(0.5 * k, k2)]);
                sys.rhs(t + 0.5 * k, tmp, k3)?;
                axpy(tmp, y, &[(k, k3)]);
                sys.rhs(t + k, tmp, k4)?;
                for i in 0..y.len() {
                    y[i] += k / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
                }
            }
        }
        if y.iter().all(|v| v.is_finite()) {
            Ok(())
        } else {
            Err(Error::Blowup { t: t + k })
        }
    }
}

/// One step of `scheme` from `(t, y)`.
pub fn step<S: OdeSystem + ?Sized>(scheme: Scheme, sys: &S, t: f64, k: f64, y: &[f64]) -> Result<Vec<f64>> {
    let mut out = y.to_vec();
    Stepper::new(scheme, y.len()).step(sys, t, k, &mut out)?;
    Ok(out)
}

/// Result of [`integrate`].
#[derive(Clone, Debug, PartialEq)]
pub enum Outcome {
    /// Reached the final time.
    Finished { y: Vec<f64>, t: f64, steps: usize },
    /// Non-finite coefficients or energy above [`BLOWUP_ENERGY`] after
    /// step `step`, at time `t`.
    Blowup { t: f64, step: usize },
}

impl Outcome {
    pub fn is_blowup(&self) -> bool {
        matches!(self, Outcome::Blowup { .. })
    }
}

/// Number of steps of size `k` needed to reach `t_end`.
pub fn step_count(k: f64, t_end: f64) -> usize {
    (t_end / k - 1e-9).ceil().max(1.0) as usize
}

/// Advances `y0` from `t = 0` to `t_end` with step `k`.
///
/// Times are `t_n = n k`; the last step is shortened so that the final time
/// equals `t_end`. `observer(n, t_n, y_n)` is called for `n = 0` and after
/// every step.
pub fn integrate<S, O>(
    scheme: Scheme,
    sys: &S,
    y0: &[f64],
    k: f64,
    t_end: f64,
    mut observer: O,
) -> Result<Outcome>
where
    S: OdeSystem + ?Sized,
    O: FnMut(usize, f64, &[f64]),
{
    if !(k > 0.0) || !(t_end > 0.0) {
        return Err(Error::InvalidArgument(format!(
            "need k > 0 and T > 0, got k={k}, T={t_end}"
        )));
    }
    if y0.len() != sys.dim() {
        return Err(Error::DimensionMismatch {
            expected: sys.dim(),
            found: y0.len(),
        });
    }
    let m = step_count(k, t_end);
    let mut y = y0.to_vec();
    let mut stepper = Stepper::new(scheme, y.len());
    observer(0, 0.0, &y);
    for n in 0..m {
        let t = n as f64 * k;
        let (kn, t_next) = if n + 1 == m { (t_end - t, t_end) } else { (k, (n + 1) as f64 * k) };
        match stepper.step(sys, t, kn, &mut y) {
            Ok(()) => {}
            Err(Error::Blowup { .. }) => return Ok(Outcome::Blowup { t: t_next, step: n + 1 }),
            Err(e) => return Err(e),
        }
        if !(sys.energy(&y) <= BLOWUP_ENERGY) {
            return Ok(Outcome::Blowup { t: t_next, step: n + 1 });
        }
        observer(n + 1, t_next, &y);
    }
    Ok(Outcome::Finished { y, t: t_end, steps: m })
}

#[cfg(test)]
mod tests {
    use super::*;

    /// `y' = λ y` on ℝ.
    struct Scalar(f64);

    impl OdeSystem for Scalar {
        fn dim(&self) -> usize {
            1
        }
        fn rhs(&self, _t: f64, y: &[f64], dy: &mut [f64]) -> Result<()> {
            dy[0] = self.0 * y[0];
            Ok(())
        }
        fn energy(&self, y: &[f64]) -> f64 {
            y[0] * y[0]
        }
    }

    /// `y' = i ω y` written on ℝ².
    struct Rotation(f64);

    impl OdeSystem for Rotation {
        fn dim(&self) -> usize {
            2
        }
        fn rhs(&self, _t: f64, y: &[f64], dy: &mut [f64]) -> Result<()> {
            dy[0] = -self.0 * y[1];
            dy[1] = self.0 * y[0];
            Ok(())
        }
        fn energy(&self, y: &[f64]) -> f64 {
            y[0] * y[0] + y[1] * y[1]
        }
    }

    /// `y' = t y`, exercising the stage abscissae.
    struct Growth;

    impl OdeSystem for Growth {
        fn dim(&self) -> usize {
            1
        }
        fn rhs(&self, t: f64, y: &[f64], dy: &mut [f64]) -> Result<()> {
            dy[0] = t * y[0];
            Ok(())
        }
        fn energy(&self, y: &[f64]) -> f64 {
            y[0] * y[0]
        }
    }

    #[test]
    fn amplification_factors() {
        let z: f64 = -0.1;
        let expect = [
            1.0 + z,
            1.0 + z + z * z / 2.0,
            1.0 + z + z * z / 2.0 + z.powi(3) / 6.0,
            1.0 + z + z * z / 2.0 + z.powi(3) / 6.0 + z.powi(4) / 24.0,
        ];
        for (s, e) in [Scheme::Euler, Scheme::ImprovedEuler, Scheme::ShuOsher3, Scheme::ClassicalRk4]
            .iter()
            .zip(expect)
        {
            let y = step(*s, &Scalar(-1.0), 0.0, 0.1, &[1.0]).unwrap();
            assert!((y[0] - e).abs() < 1e-15, "{s}");
        }
        let y = step(Scheme::ShuOsher3, &Scalar(-1.0), 0.0, 0.1, &[1.0]).unwrap();
        assert!((y[0] - 0.904_833_333_333_333_3).abs() < 1e-15);
    }

    #[test]
    fn shu_osher_imaginary_axis_bound() {
        let y = step(Scheme::ShuOsher3, &Rotation(3f64.sqrt()), 0.0, 1.0, &[1.0, 0.0]).unwrap();
        assert!((y[0].hypot(y[1]) - 1.0).abs() < 1e-14);
        let y = step(Scheme::ShuOsher3, &Rotation(1.8), 0.0, 1.0, &[1.0, 0.0]).unwrap();
        assert!(y[0].hypot(y[1]) > 1.0);
        // improved Euler grows for every nonzero imaginary z
        let y = step(Scheme::ImprovedEuler, &Rotation(0.1), 0.0, 1.0, &[1.0, 0.0]).unwrap();
        assert!(y[0].hypot(y[1]) > 1.0);
    }

    #[test]
    fn global_orders() {
        let cases: [(&dyn OdeSystem, f64); 2] =
            [(&Growth, 0.5f64.exp()), (&Scalar(-1.3), (-1.3f64).exp())];
        for s in [Scheme::Euler, Scheme::ImprovedEuler, Scheme::ShuOsher3, Scheme::ClassicalRk4] {
            for (sys, exact) in cases {
                let errs: Vec<f64> = [0.1, 0.05, 0.025]
                    .iter()
                    .map(|&k| match integrate(s, sys, &[1.0], k, 1.0, |_, _, _| {}).unwrap() {
                        Outcome::Finished { y, .. } => (y[0] - exact).abs(),
                        Outcome::Blowup { .. } => panic!("unexpected blowup"),
                    })
                    .collect();
                let p = (errs[0] / errs[2]).log2() / 2.0;
                assert!((p - s.order() as f64).abs() < 0.2, "{s} order {p}");
            }
        }
    }

    #[test]
    fn lands_on_final_time() {
        let k = 0.1;
        let mut times = Vec::new();
        let out = integrate(Scheme::ClassicalRk4, &Scalar(1.0), &[1.0], k, 3.0 * k, |n, t, _| {
            times.push((n, t))
        })
        .unwrap();
        match out {
            Outcome::Finished { t, steps, .. } => {
                assert_eq!(steps, 3);
                assert_eq!(t.to_bits(), (3.0 * k).to_bits());
            }
            _ => panic!(),
        }
        assert_eq!(times.len(), 4);
        assert_eq!(times[3].1, 3.0 * k);

        let mut last = 0.0;
        let out = integrate(Scheme::Euler, &Scalar(0.0), &[1.0], 0.3, 1.0, |_, t, _| last = t).unwrap();
        assert!(matches!(out, Outcome::Finished { steps: 4, .. }));
        assert_eq!(last, 1.0);
    }

    #[test]
    fn blowup_is_a_value() {
        let out = integrate(Scheme::Euler, &Scalar(50.0), &[1.0], 0.1, 10.0, |_, _, _| {}).unwrap();
        match out {
            Outcome::Blowup { t, step } => {
                // (1 + 5)^n squared passes 1e10 at n = 7
                assert_eq!(step, 7);
                assert!((t - 0.7).abs() < 1e-12);
            }
            _ => panic!("expected blowup"),
        }
    }

    #[test]
    fn step_rules() {
        for (s, c, p) in [
            ("h/10", 0.1, Power::One),
            ("h^(4/3)/10", 0.1, Power::FourThirds),
            ("h^2/10", 0.1, Power::Two),
            ("dx/20", 0.05, Power::One),
            ("0.25*h", 0.25, Power::One),
            ("h", 1.0, Power::One),
        ] {
            let r: StepRule = s.parse().unwrap();
            assert!((r.c - c).abs() < 1e-15 && r.power == p, "{s}");
            assert_eq!(r.to_string().parse::<StepRule>().unwrap(), r);
        }
        assert_eq!("h/10".parse::<StepRule>().unwrap().to_string(), "h/10");
        assert_eq!("h^(4/3)/10".parse::<StepRule>().unwrap().to_string(), "h^(4/3)/10");
        for bad in ["k/10", "h^3/10", "h/0", "-1*h", "h/"] {
            assert!(bad.parse::<StepRule>().is_err(), "{bad}");
        }
        let r = StepRule::new(0.1, Power::FourThirds).unwrap();
        assert!((r.step_for(1.0 / 400.0) - 0.1 * 400f64.powf(-4.0 / 3.0)).abs() < 1e-18);
    }

    #[test]
    fn scheme_names_round_trip() {
        for s in [Scheme::Euler, Scheme::ImprovedEuler, Scheme::ShuOsher3, Scheme::ClassicalRk4] {
            assert_eq!(s.name().parse::<Scheme>().unwrap(), s);
        }
    }
}
