//! CSV output of experiment reports.
//!
//! Every table starts with the metadata line of its run configuration.
//! Numbers use `{:.5e}`; an order cell is empty when either neighbour is
//! missing, and every error cell of a diverged run reads `overflow`.

use std::io::{self, Write};

use crate::config::RunConfig;
use crate::experiments::{
    Component, EnergyReport, EpsReport, ExperimentReport, Norm, RowOutcome, StabilityReport,
};
use crate::superacc::SuperaccReport;

fn num(v: f64) -> String {
    format!("{v:.5e}")
}

fn opt(v: Option<f64>) -> String {
    v.map(num).unwrap_or_default()
}

/// Order cells use fixed notation.
fn order(v: Option<f64>) -> String {
    v.map(|o| format!("{o:.4}")).unwrap_or_default()
}

const NORMS: [(Norm, &str); 3] = [(Norm::L2, "L2"), (Norm::Linf, "Linf"), (Norm::H1, "H1")];
const COMPONENTS: [(Component, &str); 2] = [(Component::Eta, "eta"), (Component::U, "u")];

pub fn write_convergence<W: Write>(w: &mut W, cfg: &RunConfig, r: &ExperimentReport) -> io::Result<()> {
    writeln!(w, "{}", cfg.metadata_line())?;
    let mut header = vec!["N".to_string()];
    for (_, nn) in NORMS {
        for (_, cn) in COMPONENTS {
            header.push(format!("{cn}_{nn}"));
            header.push(format!("{cn}_{nn}_order"));
        }
    }
    writeln!(w, "{}", header.join(","))?;
    for (j, row) in r.rows.iter().enumerate() {
        let mut cells = vec![row.n.to_string()];
        for (norm, _) in NORMS {
            for (c, _) in COMPONENTS {
                match row.outcome {
                    RowOutcome::Overflow { .. } => cells.extend(["overflow".to_string(), String::new()]),
                    RowOutcome::Errors { .. } => {
                        cells.push(opt(r.error(j, c, norm)));
                        cells.push(order(r.order(j, c, norm)));
                    }
                }
            }
        }
        writeln!(w, "{}", cells.join(","))?;
    }
    Ok(())
}

/// One row per checkpoint, one `eta_L2` column per step rule, then a
/// `blowup` row holding the divergence time of each rule.
pub fn write_stability<W: Write>(w: &mut W, cfg: &RunConfig, r: &StabilityReport) -> io::Result<()> {
    writeln!(w, "{}", cfg.metadata_line())?;
    let mut header = vec!["t".to_string()];
    for tr in &r.traces {
        header.push(format!("eta_L2[k={}]", tr.rule));
    }
    writeln!(w, "{}", header.join(","))?;
    for (j, &c) in r.config.checkpoints.iter().enumerate() {
        let mut cells = vec![c.to_string()];
        for tr in &r.traces {
            cells.push(match tr.checkpoints[j].eta_l2 {
                Some(e) => num(e),
                None => "overflow".into(),
            });
        }
        writeln!(w, "{}", cells.join(","))?;
    }
    let mut cells = vec!["blowup".to_string()];
    for tr in &r.traces {
        cells.push(tr.blowup.map(|t| format!("{t:.4}")).unwrap_or_default());
    }
    writeln!(w, "{}", cells.join(","))
}

pub fn write_eps<W: Write>(w: &mut W, cfg: &RunConfig, r: &EpsReport) -> io::Result<()> {
    writeln!(w, "{}", cfg.metadata_line())?;
    writeln!(w, "eps,t,L2,L2_order,H1,H1_order")?;
    for (i, &eps) in r.config.epsilons.iter().enumerate() {
        for (j, &t) in r.config.checkpoints.iter().enumerate() {
            let cells = match (r.l2[i][j], r.h1[i][j]) {
                (None, None) => vec![num(eps), t.to_string(), "overflow".into()],
                (l2, h1) => vec![
                    num(eps),
                    t.to_string(),
                    opt(l2),
                    order(r.order(i, j, false)),
                    opt(h1),
                    order(r.order(i, j, true)),
                ],
            };
            writeln!(w, "{}", cells.join(","))?;
        }
    }
    Ok(())
}

/// One row per diagnostic and cell count; the fitted slope and its target
/// repeat on every row of a diagnostic.
pub fn write_superacc<W: Write>(w: &mut W, cfg: &RunConfig, r: &[SuperaccReport]) -> io::Result<()> {
    writeln!(w, "{}", cfg.metadata_line())?;
    writeln!(w, "diagnostic,N,value,slope,target")?;
    for d in r {
        for (n, v) in d.n.iter().zip(&d.values) {
            writeln!(w, "{},{},{},{:.4},{}", d.name, n, num(*v), d.slope, d.target)?;
        }
    }
    Ok(())
}

pub fn write_energy<W: Write>(w: &mut W, cfg: &RunConfig, r: &EnergyReport) -> io::Result<()> {
    writeln!(w, "{}", cfg.metadata_line())?;
    writeln!(w, "identity_residual,energy_initial,energy_final,relative_drift")?;
    let fin = r.energy_final.map(num).unwrap_or_else(|| "overflow".into());
    writeln!(
        w,
        "{},{},{},{}",
        num(r.identity_residual),
        num(r.energy_initial),
        fin,
        opt(r.relative_drift())
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::{parse_config, KeyValues, Subcommand};
    use crate::experiments::{ConvergenceRow, ErrorTriple};

    #[test]
    fn convergence_csv_layout() {
        let flags: KeyValues = [("system", "sw"), ("n", "10,20,40"), ("preset", "table41")]
            .iter()
            .map(|(k, v)| (k.to_string(), v.to_string()))
            .collect();
        let cfg = parse_config(Subcommand::Converge, &KeyValues::new(), &flags, None).unwrap();
        let crate::config::Command::Converge(c) = &cfg.command else { panic!() };
        let e = |v: f64| ErrorTriple { l2: v, linf: 2.0 * v, h1: 3.0 * v, h1_semi: v };
        let report = ExperimentReport {
            config: c.clone(),
            rows: vec![
                ConvergenceRow { n: 10, k: 0.01, outcome: RowOutcome::Errors { eta: e(4e-2), u: e(1e-2) } },
                ConvergenceRow { n: 20, k: 0.005, outcome: RowOutcome::Errors { eta: e(1e-2), u: e(2.5e-3) } },
                ConvergenceRow { n: 40, k: 0.0025, outcome: RowOutcome::Overflow { t: 0.5 } },
            ],
        };
        let mut buf = Vec::new();
        write_convergence(&mut buf, &cfg, &report).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert!(lines[0].starts_with("# swg converge "));
        assert!(lines[1].starts_with("N,eta_L2,eta_L2_order,u_L2,u_L2_order,eta_Linf"));
        assert_eq!(lines[2], "10,4.00000e-2,,1.00000e-2,,8.00000e-2,,2.00000e-2,,1.20000e-1,,3.00000e-2,");
        assert!(lines[3].starts_with("20,1.00000e-2,2.0000,2.50000e-3,2.0000,"));
        assert_eq!(lines[4], "40,overflow,,overflow,,overflow,,overflow,,overflow,,overflow,");
    }
}
