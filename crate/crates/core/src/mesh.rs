//! Partitions of the unit interval.
//!
//! Five families are provided: the uniform mesh and four quasiuniform
//! non-uniform meshes. Nodes are left-to-right cumulative sums of the cell
//! widths with the last node pinned to `1.0`; the uniform mesh uses `i / N`.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

/// Mesh family tag.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum MeshFamily {
    Uniform,
    /// Widths alternate `0.75 Δx`, `0.5 Δx` with `Δx = 1.6 / N`.
    AlternatingQuasiuniform,
    /// Three uniform blocks on `[0, 0.25]`, `[0.25, 0.75]`, `[0.75, 1]`.
    PiecewiseUniform,
    /// Uniform end blocks joined by linearly varying widths.
    SlowlyVarying,
    /// Uniform mesh perturbed by `O(h²)` in a period-4 pattern.
    PerturbedUniform,
}

impl MeshFamily {
    /// Divisibility constraint on the cell count.
    pub fn required_factor(self) -> usize {
        match self {
            MeshFamily::Uniform => 1,
            MeshFamily::AlternatingQuasiuniform => 2,
            MeshFamily::PiecewiseUniform => 10,
            MeshFamily::SlowlyVarying => 7,
            MeshFamily::PerturbedUniform => 4,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            MeshFamily::Uniform => "uniform",
            MeshFamily::AlternatingQuasiuniform => "alternating",
            MeshFamily::PiecewiseUniform => "piecewise_uniform",
            MeshFamily::SlowlyVarying => "slowly_varying",
            MeshFamily::PerturbedUniform => "perturbed",
        }
    }

    /// Checks that `n` is an admissible cell count for this family.
    pub fn check(self, n: usize) -> Result<()> {
        if n < 2 {
            return Err(Error::InvalidMesh(format!(
                "{} mesh needs at least 2 cells, got {n}",
                self.name()
            )));
        }
        if self == MeshFamily::SlowlyVarying && n < 14 {
            return Err(Error::InvalidMesh(format!(
                "slowly_varying mesh needs N >= 14 (at least two cells in the graded block), got {n}"
            )));
        }
        let f = self.required_factor();
        if n % f != 0 {
            return Err(Error::InvalidMesh(format!(
                "{} mesh requires N divisible by {f}, got {n}",
                self.name()
            )));
        }
        Ok(())
    }
}

impl fmt::Display for MeshFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for MeshFamily {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "uniform" => Ok(MeshFamily::Uniform),
            "alternating" | "alternating_quasiuniform" => Ok(MeshFamily::AlternatingQuasiuniform),
            "piecewise_uniform" => Ok(MeshFamily::PiecewiseUniform),
            "slowly_varying" => Ok(MeshFamily::SlowlyVarying),
            "perturbed" | "perturbed_uniform" => Ok(MeshFamily::PerturbedUniform),
            other => Err(Error::Parse(format!("unknown mesh family '{other}'"))),
        }
    }
}

/// An ordered partition `0 = x_0 < x_1 < ... < x_N = 1`.
#[derive(Clone, Debug)]
pub struct Mesh {
    nodes: Vec<f64>,
    widths: Vec<f64>,
    h_max: f64,
    family: MeshFamily,
}

impl Mesh {
    /// Builds the mesh of the given family with `n` cells.
    pub fn build(family: MeshFamily, n: usize) -> Result<Mesh> {
        family.check(n)?;
        let nf = n as f64;
        let widths: Vec<f64> = match family {
            MeshFamily::Uniform => vec![1.0 / nf; n],
            MeshFamily::AlternatingQuasiuniform => {
                let dx = 1.6 / nf;
                (0..n)
                    .map(|i| if i % 2 == 0 { 0.75 * dx } else { 0.5 * dx })
                    .collect()
            }
            MeshFamily::PiecewiseUniform => {
                let n1 = 3 * n / 10;
                let n2 = 5 * n / 10;
                let n3 = 2 * n / 10;
                let mut w = Vec::with_capacity(n);
                w.extend(std::iter::repeat(1.0 / (4.0 * n1 as f64)).take(n1));
                w.extend(std::iter::repeat(1.0 / (2.0 * n2 as f64)).take(n2));
                w.extend(std::iter::repeat(1.0 / (4.0 * n3 as f64)).take(n3));
                w
            }
            MeshFamily::SlowlyVarying => {
                let n1 = 3 * n / 7;
                let n2 = 3 * n / 7;
                let n3 = n / 7;
                let h1 = 1.0 / (4.0 * n1 as f64);
                let h3 = 1.0 / (4.0 * n3 as f64);
                let mut w = Vec::with_capacity(n);
                w.extend(std::iter::repeat(h1).take(n1));
                w.extend(
                    (0..n2).map(|i| h1 + (h3 - h1) * (i as f64) / ((n2 - 1) as f64)),
                );
                w.extend(std::iter::repeat(h3).take(n3));
                w
            }
            MeshFamily::PerturbedUniform => {
                let h = 1.0 / nf;
                let h2 = h * h;
                let pattern = [h - 0.25 * h2, h + 0.5 * h2, h - 0.5 * h2, h + 0.25 * h2];
                (0..n).map(|i| pattern[i % 4]).collect()
            }
        };
        Ok(Mesh::from_widths(family, widths))
    }

    fn from_widths(family: MeshFamily, widths: Vec<f64>) -> Mesh {
        let n = widths.len();
        let mut nodes = Vec::with_capacity(n + 1);
        nodes.push(0.0);
        if family == MeshFamily::Uniform {
            // i/N keeps every width within one ulp of 1/N.
            nodes.extend((1..n).map(|i| i as f64 / n as f64));
        } else {
            let mut x = 0.0;
            for w in &widths[..n - 1] {
                x += w;
                nodes.push(x);
            }
        }
        nodes.push(1.0);
        // Cell widths are re-derived from the stored nodes so that the two
        // views of the mesh agree exactly.
        let widths: Vec<f64> = nodes.windows(2).map(|p| p[1] - p[0]).collect();
        let h_max = widths.iter().cloned().fold(0.0, f64::max);
        Mesh {
            nodes,
            widths,
            h_max,
            family,
        }
    }

    /// Uniform mesh with `n` cells.
    pub fn uniform(n: usize) -> Result<Mesh> {
        Mesh::build(MeshFamily::Uniform, n)
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn widths(&self) -> &[f64] {
        &self.widths
    }

    pub fn cells(&self) -> usize {
        self.widths.len()
    }

    pub fn h_max(&self) -> f64 {
        self.h_max
    }

    pub fn h_min(&self) -> f64 {
        self.widths.iter().cloned().fold(f64::INFINITY, f64::min)
    }

    pub fn family(&self) -> MeshFamily {
        self.family
    }

    pub fn is_uniform(&self) -> bool {
        self.family == MeshFamily::Uniform
    }

    /// The spacing that time-step rules are expressed in: `Δx = 1.6/N` for the
    /// alternating family, `1/N` for uniform and perturbed meshes, and the
    /// largest width otherwise.
    pub fn nominal_spacing(&self) -> f64 {
        let n = self.cells() as f64;
        match self.family {
            MeshFamily::Uniform | MeshFamily::PerturbedUniform => 1.0 / n,
            MeshFamily::AlternatingQuasiuniform => 1.6 / n,
            MeshFamily::PiecewiseUniform | MeshFamily::SlowlyVarying => self.h_max,
        }
    }

    /// Left endpoint and width of cell `i`.
    #[inline]
    pub fn cell(&self, i: usize) -> (f64, f64) {
        (self.nodes[i], self.widths[i])
    }

    /// Index of the cell containing `x`; points on an interior node belong to
    /// the cell on their right, `x = 1` to the last cell.
    pub fn locate(&self, x: f64) -> usize {
        let n = self.cells();
        if x <= 0.0 {
            return 0;
        }
        if x >= 1.0 {
            return n - 1;
        }
        // partition_point gives the first node strictly greater than x.
        let j = self.nodes.partition_point(|&node| node <= x);
        (j - 1).min(n - 1)
    }
}
