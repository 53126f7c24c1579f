//! Run configurations for the command-line front end.
//!
//! A configuration is a flat set of `key=value` pairs checked against the
//! schema of its subcommand. Values come from an optional file and from
//! flags, flags winning. Every report starts with a metadata line
//!
//! ```text
//! # swg converge system=sw epsilon=1 scheme=rk4 ...
//! ```
//!
//! that parses back into an equal [`RunConfig`].

use std::collections::BTreeMap;
use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::experiments::{
    ConvergenceConfig, EnergyCheckConfig, EpsConfig, SpaceFamily, StabilityConfig,
};
use crate::integrators::StepRule;
use crate::mesh::MeshFamily;
use crate::presets::Preset;
use crate::projection::InitialData;
use crate::system::{Equations, SystemKind};

/// Raw key/value pairs, sorted by key.
pub type KeyValues = BTreeMap<String, String>;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Subcommand {
    Converge,
    Superacc,
    Stability,
    CompareEps,
    EnergyCheck,
}

impl Subcommand {
    pub const ALL: [Subcommand; 5] = [
        Subcommand::Converge,
        Subcommand::Superacc,
        Subcommand::Stability,
        Subcommand::CompareEps,
        Subcommand::EnergyCheck,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Subcommand::Converge => "converge",
            Subcommand::Superacc => "superacc",
            Subcommand::Stability => "stability",
            Subcommand::CompareEps => "compare-eps",
            Subcommand::EnergyCheck => "energy-check",
        }
    }

    pub fn about(self) -> &'static str {
        match self {
            Subcommand::Converge => "Error and order table of a refinement sweep against an exact solution",
            Subcommand::Superacc => "Convergence slopes of the L2-projection superaccuracy diagnostics",
            Subcommand::Stability => "Error traces and blowup times for several time-step rules on one mesh",
            Subcommand::CompareEps => "Differences between SW and SSW solutions for small amplitudes",
            Subcommand::EnergyCheck => "Semidiscrete energy identity and fully discrete energy drift",
        }
    }

    /// Accepted keys with their defaults (`None`: required; `"auto"`: derived
    /// from other keys).
    pub fn schema(self) -> &'static [KeySpec] {
        match self {
            Subcommand::Converge => CONVERGE,
            Subcommand::Superacc => SUPERACC,
            Subcommand::Stability => STABILITY,
            Subcommand::CompareEps => COMPARE_EPS,
            Subcommand::EnergyCheck => ENERGY_CHECK,
        }
    }
}

impl fmt::Display for Subcommand {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Subcommand {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Subcommand::ALL
            .into_iter()
            .find(|c| c.name() == s)
            .ok_or_else(|| Error::Parse(format!("unknown subcommand '{s}'")))
    }
}

/// One accepted key.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct KeySpec {
    pub key: &'static str,
    pub default: Option<&'static str>,
    pub help: &'static str,
}

const fn key(key: &'static str, default: Option<&'static str>, help: &'static str) -> KeySpec {
    KeySpec { key, default, help }
}

const SYSTEM: &str = "sw or ssw";
const EPSILON: &str = "nonlinearity amplitude in (0, 1]";
const SCHEME: &str = "euler, improved_euler, shu_osher or rk4";
const MESH: &str = "uniform, alternating, piecewise_uniform, slowly_varying or perturbed";
const SPACE: &str = "linear, cubic, periodic2, periodic3 or periodic4";
const KRULE: &str = "time step rule such as h/10, dx/20, h^(4/3)/10 or 0.25*h";
const INIT: &str = "initial data: projection or interpolation (auto picks by preset)";

static CONVERGE: &[KeySpec] = &[
    key("system", None, SYSTEM),
    key("epsilon", Some("1"), EPSILON),
    key("scheme", Some("rk4"), SCHEME),
    key("mesh", Some("uniform"), MESH),
    key("space", Some("linear"), SPACE),
    key("n", None, "comma-separated cell counts"),
    key("krule", Some("h/10"), KRULE),
    key("t", Some("1"), "final time"),
    key("preset", None, "table21..table25, table41, table42, table51, table52 or periodic"),
    key("init", Some("auto"), INIT),
];

static SUPERACC: &[KeySpec] = &[key("n", Some("16,32,64,128"), "comma-separated cell counts")];

static STABILITY: &[KeySpec] = &[
    key("system", None, SYSTEM),
    key("epsilon", Some("1"), EPSILON),
    key("scheme", Some("improved_euler"), SCHEME),
    key("mesh", Some("uniform"), MESH),
    key("space", Some("linear"), SPACE),
    key("n", Some("400"), "cell count"),
    key("krule", Some("h/10,h^(4/3)/10"), "comma-separated time step rules"),
    key("t", Some("1"), "final time"),
    key("preset", Some("table51"), "forced preset with an exact solution"),
    key("init", Some("auto"), INIT),
    key("checkpoints", Some("auto"), "comma-separated reporting times"),
];

static COMPARE_EPS: &[KeySpec] = &[
    key("eps", Some("1e-3,1e-4,1e-5"), "comma-separated amplitudes"),
    key("preset", Some("fig61-ci"), "fig61-ci (N=200, T=50) or fig61-full (N=1000, T=300)"),
    key("n", Some("auto"), "cell count (auto: from preset)"),
    key("k", Some("auto"), "time step (auto: from preset)"),
    key("checkpoints", Some("auto"), "comma-separated reporting times (auto: from preset)"),
];

static ENERGY_CHECK: &[KeySpec] = &[
    key("system", Some("ssw"), SYSTEM),
    key("epsilon", Some("1"), EPSILON),
    key("scheme", Some("rk4"), SCHEME),
    key("mesh", Some("uniform"), MESH),
    key("space", Some("linear"), SPACE),
    key("n", Some("64"), "cell count"),
    key("krule", Some("h/20"), KRULE),
    key("t", Some("1"), "final time"),
    key("samples", Some("100"), "random states for the identity check"),
    key("seed", Some("1"), "seed of the random states"),
];

/// Scale of the ε-comparison presets.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum EpsScale {
    Ci,
    Full,
}

impl EpsScale {
    pub fn name(self) -> &'static str {
        match self {
            EpsScale::Ci => "fig61-ci",
            EpsScale::Full => "fig61-full",
        }
    }

    pub fn config(self) -> EpsConfig {
        match self {
            EpsScale::Ci => EpsConfig::ci(),
            EpsScale::Full => EpsConfig::full(),
        }
    }
}

impl FromStr for EpsScale {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "fig61-ci" | "fig61" | "ci" => Ok(EpsScale::Ci),
            "fig61-full" | "full" => Ok(EpsScale::Full),
            other => Err(Error::Parse(format!(
                "unknown comparison preset '{other}' (expected fig61-ci or fig61-full)"
            ))),
        }
    }
}

/// The experiment selected by a subcommand, fully resolved.
#[derive(Clone, Debug, PartialEq)]
pub enum Command {
    Converge(ConvergenceConfig),
    Superacc { ns: Vec<usize> },
    Stability(StabilityConfig),
    CompareEps { scale: EpsScale, config: EpsConfig },
    EnergyCheck(EnergyCheckConfig),
}

#[derive(Clone, Debug, PartialEq)]
pub struct RunConfig {
    pub command: Command,
    /// `None`: standard output.
    pub output: Option<PathBuf>,
}

/// Parses flat `key = value` text. Blank lines and lines starting with `#`
/// are skipped; a repeated key is an error.
pub fn parse_key_values(text: &str) -> Result<KeyValues> {
    let mut out = KeyValues::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (k, v) = line.split_once('=').ok_or_else(|| {
            Error::Parse(format!("line {}: expected key=value, got '{line}'", i + 1))
        })?;
        let k = k.trim().to_string();
        if out.insert(k.clone(), v.trim().to_string()).is_some() {
            return Err(Error::Config {
                key: k,
                msg: format!("repeated on line {}", i + 1),
            });
        }
    }
    Ok(out)
}

fn config_err(key: &str, msg: impl Into<String>) -> Error {
    Error::Config {
        key: key.to_string(),
        msg: msg.into(),
    }
}

/// Looks up typed values, attributing every failure to its key.
struct Values<'a> {
    map: &'a KeyValues,
}

impl Values<'_> {
    fn raw(&self, key: &str) -> &str {
        self.map.get(key).map(String::as_str).unwrap_or("")
    }

    fn is_auto(&self, key: &str) -> bool {
        self.raw(key) == "auto"
    }

    fn get<T: FromStr>(&self, key: &str) -> Result<T>
    where
        T::Err: fmt::Display,
    {
        let v = self.raw(key);
        v.parse::<T>()
            .map_err(|e| config_err(key, format!("cannot parse '{v}': {e}")))
    }

    fn list<T: FromStr>(&self, key: &str) -> Result<Vec<T>>
    where
        T::Err: fmt::Display,
    {
        let v = self.raw(key);
        let items: Vec<&str> = v.split(',').map(str::trim).filter(|s| !s.is_empty()).collect();
        if items.is_empty() {
            return Err(config_err(key, "empty list"));
        }
        items
            .into_iter()
            .map(|s| {
                s.parse::<T>()
                    .map_err(|e| config_err(key, format!("cannot parse '{s}': {e}")))
            })
            .collect()
    }

    fn positive(&self, key: &str) -> Result<f64> {
        let v: f64 = self.get(key)?;
        if !(v > 0.0 && v.is_finite()) {
            return Err(config_err(key, format!("must be positive, got {v}")));
        }
        Ok(v)
    }

    fn system(&self) -> Result<SystemKind> {
        let eq: Equations = self.get("system")?;
        let eps = self.positive("epsilon")?;
        if eps > 1.0 {
            return Err(config_err("epsilon", format!("must lie in (0, 1], got {eps}")));
        }
        Ok(SystemKind {
            equations: eq,
            epsilon: eps,
        })
    }

    fn mesh_and_ns(&self) -> Result<(MeshFamily, Vec<usize>)> {
        let mesh: MeshFamily = self.get("mesh")?;
        let ns: Vec<usize> = self.list("n")?;
        for &n in &ns {
            mesh.check(n).map_err(|e| config_err("n", e.to_string()))?;
        }
        Ok((mesh, ns))
    }

    fn single_n(&self, mesh: MeshFamily) -> Result<usize> {
        let n: usize = self.get("n")?;
        mesh.check(n).map_err(|e| config_err("n", e.to_string()))?;
        Ok(n)
    }

    /// `init`, with `auto` resolved from the raw preset name: the
    /// special-mesh and improved Euler tables start from interpolants.
    fn init(&self) -> Result<InitialData> {
        if self.is_auto("init") {
            let nodal = matches!(self.raw("preset"), "table23" | "table24" | "table25" | "table51");
            Ok(if nodal { InitialData::Interpolation } else { InitialData::L2Projection })
        } else {
            self.get("init")
        }
    }
}

fn check_space_preset(space: SpaceFamily, preset: Preset) -> Result<()> {
    if space.is_periodic() != preset.is_periodic() {
        return Err(config_err(
            "preset",
            format!("preset {preset} does not fit space {space}"),
        ));
    }
    if preset.exact().is_none() {
        return Err(config_err("preset", format!("preset {preset} has no exact solution")));
    }
    Ok(())
}

/// Merges file values and flags (flags win), checks every key against the
/// schema of `sub` and resolves the experiment configuration.
pub fn parse_config(
    sub: Subcommand,
    file: &KeyValues,
    flags: &KeyValues,
    output: Option<PathBuf>,
) -> Result<RunConfig> {
    let schema = sub.schema();
    let mut map = KeyValues::new();
    for (k, v) in file.iter().chain(flags.iter()) {
        if !schema.iter().any(|s| s.key == k) {
            return Err(config_err(k, format!("unknown key for {sub}")));
        }
        map.insert(k.clone(), v.clone());
    }
    for s in schema {
        if !map.contains_key(s.key) {
            match s.default {
                Some(d) => {
                    map.insert(s.key.to_string(), d.to_string());
                }
                None => return Err(config_err(s.key, format!("missing required key for {sub}"))),
            }
        }
    }
    let v = Values { map: &map };
    let command = match sub {
        Subcommand::Converge => {
            let (mesh, ns) = v.mesh_and_ns()?;
            let space: SpaceFamily = v.get("space")?;
            let preset: Preset = v.get("preset")?;
            check_space_preset(space, preset)?;
            let cfg = ConvergenceConfig {
                system: v.system()?,
                scheme: v.get("scheme")?,
                mesh,
                space,
                ns,
                step: v.get("krule")?,
                t_end: v.positive("t")?,
                preset,
                init: v.init()?,
            };
            cfg.validate()?;
            Command::Converge(cfg)
        }
        Subcommand::Superacc => {
            let ns: Vec<usize> = v.list("n")?;
            if ns.len() < 3 {
                return Err(config_err("n", "need at least three cell counts to fit a slope"));
            }
            for &n in &ns {
                MeshFamily::Uniform.check(n).map_err(|e| config_err("n", e.to_string()))?;
            }
            Command::Superacc { ns }
        }
        Subcommand::Stability => {
            let system = v.system()?;
            let mesh: MeshFamily = v.get("mesh")?;
            let n = v.single_n(mesh)?;
            let space: SpaceFamily = v.get("space")?;
            let preset: Preset = v.get("preset")?;
            check_space_preset(space, preset)?;
            let t_end = v.positive("t")?;
            let checkpoints = if v.is_auto("checkpoints") {
                StabilityConfig::improved_euler_probe(system, preset)?
                    .checkpoints
                    .into_iter()
                    .filter(|&c| c <= t_end)
                    .collect()
            } else {
                v.list::<f64>("checkpoints")?
            };
            if checkpoints.iter().any(|&c| !(c > 0.0 && c <= t_end)) {
                return Err(config_err("checkpoints", format!("must lie in (0, {t_end}]")));
            }
            Command::Stability(StabilityConfig {
                system,
                scheme: v.get("scheme")?,
                mesh,
                space,
                n,
                rules: v.list::<StepRule>("krule")?,
                t_end,
                preset,
                init: v.init()?,
                checkpoints,
            })
        }
        Subcommand::CompareEps => {
            let scale: EpsScale = v.get("preset").map_err(|_| {
                config_err("preset", format!("expected fig61-ci or fig61-full, got '{}'", v.raw("preset")))
            })?;
            let mut config = scale.config();
            config.epsilons = v.list("eps")?;
            if !v.is_auto("n") {
                config.n = v.single_n(MeshFamily::Uniform)?;
            }
            if !v.is_auto("k") {
                config.k = v.positive("k")?;
            }
            if !v.is_auto("checkpoints") {
                config.checkpoints = v.list("checkpoints")?;
            }
            config.validate().map_err(|e| config_err("eps", e.to_string()))?;
            Command::CompareEps { scale, config }
        }
        Subcommand::EnergyCheck => {
            let mesh: MeshFamily = v.get("mesh")?;
            let samples: usize = v.get("samples")?;
            if samples == 0 {
                return Err(config_err("samples", "must be positive"));
            }
            Command::EnergyCheck(EnergyCheckConfig {
                system: v.system()?,
                scheme: v.get("scheme")?,
                mesh,
                space: v.get("space")?,
                n: v.single_n(mesh)?,
                step: v.get("krule")?,
                t_end: v.positive("t")?,
                samples,
                seed: v.get("seed")?,
            })
        }
    };
    Ok(RunConfig { command, output })
}

fn join<T: fmt::Display>(items: &[T]) -> String {
    items.iter().map(T::to_string).collect::<Vec<_>>().join(",")
}

fn system_pairs(out: &mut Vec<(&'static str, String)>, s: SystemKind) {
    out.push(("system", s.equations.to_string()));
    out.push(("epsilon", s.epsilon.to_string()));
}

impl RunConfig {
    pub fn subcommand(&self) -> Subcommand {
        match self.command {
            Command::Converge(_) => Subcommand::Converge,
            Command::Superacc { .. } => Subcommand::Superacc,
            Command::Stability(_) => Subcommand::Stability,
            Command::CompareEps { .. } => Subcommand::CompareEps,
            Command::EnergyCheck(_) => Subcommand::EnergyCheck,
        }
    }

    /// Every schema key with its resolved value, in schema order.
    pub fn to_pairs(&self) -> Vec<(&'static str, String)> {
        let mut out = Vec::new();
        match &self.command {
            Command::Converge(c) => {
                system_pairs(&mut out, c.system);
                out.push(("scheme", c.scheme.to_string()));
                out.push(("mesh", c.mesh.to_string()));
                out.push(("space", c.space.to_string()));
                out.push(("n", join(&c.ns)));
                out.push(("krule", c.step.to_string()));
                out.push(("t", c.t_end.to_string()));
                out.push(("preset", c.preset.to_string()));
                out.push(("init", c.init.to_string()));
            }
            Command::Superacc { ns } => out.push(("n", join(ns))),
            Command::Stability(c) => {
                system_pairs(&mut out, c.system);
                out.push(("scheme", c.scheme.to_string()));
                out.push(("mesh", c.mesh.to_string()));
                out.push(("space", c.space.to_string()));
                out.push(("n", c.n.to_string()));
                out.push(("krule", join(&c.rules)));
                out.push(("t", c.t_end.to_string()));
                out.push(("preset", c.preset.to_string()));
                out.push(("init", c.init.to_string()));
                out.push(("checkpoints", join(&c.checkpoints)));
            }
            Command::CompareEps { scale, config } => {
                out.push(("eps", join(&config.epsilons)));
                out.push(("preset", scale.name().to_string()));
                out.push(("n", config.n.to_string()));
                out.push(("k", config.k.to_string()));
                out.push(("checkpoints", join(&config.checkpoints)));
            }
            Command::EnergyCheck(c) => {
                system_pairs(&mut out, c.system);
                out.push(("scheme", c.scheme.to_string()));
                out.push(("mesh", c.mesh.to_string()));
                out.push(("space", c.space.to_string()));
                out.push(("n", c.n.to_string()));
                out.push(("krule", c.step.to_string()));
                out.push(("t", c.t_end.to_string()));
                out.push(("samples", c.samples.to_string()));
                out.push(("seed", c.seed.to_string()));
            }
        }
        out
    }

    /// `# swg <subcommand> key=value ...`; the output path is left out.
    pub fn metadata_line(&self) -> String {
        let mut line = format!("# swg {}", self.subcommand());
        for (k, v) in self.to_pairs() {
            line.push(' ');
            line.push_str(k);
            line.push('=');
            line.push_str(&v);
        }
        line
    }

    /// Inverse of [`RunConfig::metadata_line`]; the output is `None`.
    pub fn from_metadata_line(line: &str) -> Result<RunConfig> {
        let rest = line
            .trim()
            .strip_prefix('#')
            .map(str::trim_start)
            .and_then(|s| s.strip_prefix("swg "))
            .ok_or_else(|| Error::Parse("metadata line must start with '# swg'".into()))?;
        let mut words = rest.split_whitespace();
        let sub: Subcommand = words
            .next()
            .ok_or_else(|| Error::Parse("metadata line has no subcommand".into()))?
            .parse()?;
        let mut map = KeyValues::new();
        for w in words {
            let (k, v) = w
                .split_once('=')
                .ok_or_else(|| Error::Parse(format!("expected key=value, got '{w}'")))?;
            map.insert(k.to_string(), v.to_string());
        }
        parse_config(sub, &KeyValues::new(), &map, None)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn kv(pairs: &[(&str, &str)]) -> KeyValues {
        pairs.iter().map(|(k, v)| (k.to_string(), v.to_string())).collect()
    }

    fn converge_flags() -> KeyValues {
        kv(&[
            ("system", "sw"),
            ("space", "linear"),
            ("mesh", "uniform"),
            ("n", "40,80,160"),
            ("scheme", "rk4"),
            ("krule", "h/10"),
            ("t", "1"),
            ("preset", "table41"),
        ])
    }

    #[test]
    fn converge_example_is_valid() {
        let c = parse_config(Subcommand::Converge, &KeyValues::new(), &converge_flags(), None).unwrap();
        match c.command {
            Command::Converge(cfg) => {
                assert_eq!(cfg.ns, vec![40, 80, 160]);
                assert_eq!(cfg.preset, Preset::Table21);
                assert_eq!(cfg.init, InitialData::L2Projection);
                assert_eq!(cfg.step.to_string(), "h/10");
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn indivisible_n_names_the_constraint() {
        let mut f = converge_flags();
        f.insert("n".into(), "41".into());
        f.insert("mesh".into(), "piecewise_uniform".into());
        let e = parse_config(Subcommand::Converge, &KeyValues::new(), &f, None).unwrap_err();
        match e {
            Error::Config { key, msg } => {
                assert_eq!(key, "n");
                assert!(msg.contains("divisible by 10"), "{msg}");
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn compare_eps_ci_preset() {
        let f = kv(&[("eps", "1e-3,1e-4,1e-5"), ("preset", "fig61-ci")]);
        let c = parse_config(Subcommand::CompareEps, &KeyValues::new(), &f, None).unwrap();
        match c.command {
            Command::CompareEps { scale, config } => {
                assert_eq!(scale, EpsScale::Ci);
                assert_eq!(config.n, 200);
                assert_eq!(config.epsilons, vec![1e-3, 1e-4, 1e-5]);
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn errors_name_the_key() {
        let cases: [(&str, &str, &str); 3] = [
            ("unknown", "1", "unknown"),
            ("t", "soon", "t"),
            ("epsilon", "2", "epsilon"),
        ];
        for (k, v, expect) in cases {
            let mut f = converge_flags();
            f.insert(k.into(), v.into());
            match parse_config(Subcommand::Converge, &KeyValues::new(), &f, None) {
                Err(Error::Config { key, .. }) => assert_eq!(key, expect),
                other => panic!("{k}: {other:?}"),
            }
        }
        let mut f = converge_flags();
        f.remove("system");
        match parse_config(Subcommand::Converge, &KeyValues::new(), &f, None) {
            Err(Error::Config { key, msg }) => {
                assert_eq!(key, "system");
                assert!(msg.contains("missing"));
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn flags_override_file() {
        let file = parse_key_values("# sweep\nsystem = ssw\nn = 40,80\npreset=table41\nt = 0.5\n").unwrap();
        let flags = kv(&[("t", "1")]);
        let c = parse_config(Subcommand::Converge, &file, &flags, None).unwrap();
        match c.command {
            Command::Converge(cfg) => {
                assert_eq!(cfg.t_end, 1.0);
                assert_eq!(cfg.system.equations, Equations::Ssw);
            }
            other => panic!("{other:?}"),
        }
        assert!(parse_key_values("a=1\na=2").is_err());
        assert!(parse_key_values("novalue").is_err());
    }

    #[test]
    fn auto_init_follows_preset_name() {
        let mut f = converge_flags();
        f.insert("preset".into(), "table25".into());
        f.insert("mesh".into(), "perturbed".into());
        let c = parse_config(Subcommand::Converge, &KeyValues::new(), &f, None).unwrap();
        let Command::Converge(cfg) = c.command else { panic!() };
        assert_eq!(cfg.init, InitialData::Interpolation);
    }

    #[test]
    fn metadata_round_trip_every_subcommand() {
        let configs = [
            parse_config(Subcommand::Converge, &KeyValues::new(), &converge_flags(), None),
            parse_config(Subcommand::Superacc, &KeyValues::new(), &KeyValues::new(), None),
            parse_config(Subcommand::Stability, &KeyValues::new(), &kv(&[("system", "ssw")]), None),
            parse_config(
                Subcommand::CompareEps,
                &KeyValues::new(),
                &kv(&[("k", "0.002"), ("checkpoints", "1,2.5")]),
                None,
            ),
            parse_config(
                Subcommand::EnergyCheck,
                &KeyValues::new(),
                &kv(&[("krule", "0.3*h"), ("space", "periodic3")]),
                None,
            ),
        ];
        for c in configs {
            let c = c.unwrap();
            let line = c.metadata_line();
            let back = RunConfig::from_metadata_line(&line).unwrap();
            assert_eq!(back, c, "{line}");
            assert_eq!(back.metadata_line(), line);
        }
    }
}
