use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::quadrature::QuadratureSpec;

/// Tensor grid of evaluation nodes.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Grid {
    pub x: Vec<f64>,
    pub t: Vec<f64>,
}

impl Grid {
    /// `nx` (resp. `nt`) equispaced nodes including both ends; a count of one
    /// places a single node at the lower end.
    pub fn uniform(x_min: f64, x_max: f64, nx: usize, t_min: f64, t_max: f64, nt: usize) -> Result<Self> {
        let axis = |lo: f64, hi: f64, n: usize, name: &str| -> Result<Vec<f64>> {
            if n == 0 {
                return Err(Error::config(name, "node count must be at least 1"));
            }
            if !(lo.is_finite() && hi.is_finite()) || hi < lo {
                return Err(Error::config(name, format!("need finite bounds with min <= max, got [{lo}, {hi}]")));
            }
            if n == 1 {
                return Ok(vec![lo]);
            }
            let h = (hi - lo) / (n - 1) as f64;
            Ok((0..n).map(|i| if i + 1 == n { hi } else { lo + h * i as f64 }).collect())
        };
        Ok(Grid {
            x: axis(x_min, x_max, nx, "grid.x")?,
            t: axis(t_min, t_max, nt, "grid.t")?,
        })
    }

    pub fn nodes(&self) -> Vec<(f64, f64)> {
        self.t.iter().flat_map(|&t| self.x.iter().map(move |&x| (x, t))).collect()
    }
}

/// How a field was produced.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct Provenance {
    pub method: String,
    pub quadrature: Option<QuadratureSpec>,
}

/// Values on a tensor grid, stored time-major: `values[it * nx + ix]`.
///
/// Nodes that cannot be evaluated (data singular there) hold NaN and are
/// listed in `excluded`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SolutionField {
    pub family: String,
    pub problem: String,
    pub grid_x: Vec<f64>,
    pub grid_t: Vec<f64>,
    pub values: Vec<f64>,
    pub est_errors: Vec<f64>,
    pub excluded: Vec<(usize, usize)>,
    /// Largest |imaginary part| discarded when the transform was complex.
    pub max_imag: f64,
    pub provenance: Provenance,
    pub warnings: Vec<String>,
    pub diagnostics: BTreeMap<String, f64>,
}

impl SolutionField {
    pub fn new(family: impl Into<String>, problem: impl Into<String>, grid: &Grid, provenance: Provenance) -> Self {
        let n = grid.x.len() * grid.t.len();
        Self {
            family: family.into(),
            problem: problem.into(),
            grid_x: grid.x.clone(),
            grid_t: grid.t.clone(),
            values: vec![0.0; n],
            est_errors: vec![0.0; n],
            excluded: Vec::new(),
            max_imag: 0.0,
            provenance,
            warnings: Vec::new(),
            diagnostics: BTreeMap::new(),
        }
    }

    pub fn nx(&self) -> usize {
        self.grid_x.len()
    }

    pub fn nt(&self) -> usize {
        self.grid_t.len()
    }

    pub fn value(&self, it: usize, ix: usize) -> f64 {
        self.values[it * self.nx() + ix]
    }

    pub fn set(&mut self, it: usize, ix: usize, value: f64, est_error: f64) {
        let k = it * self.nx() + ix;
        self.values[k] = value;
        self.est_errors[k] = est_error;
    }

    pub fn grid(&self) -> Grid {
        Grid {
            x: self.grid_x.clone(),
            t: self.grid_t.clone(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn uniform_grid_hits_both_ends() {
        let g = Grid::uniform(-1.0, 1.0, 3, 0.1, 0.7, 7).unwrap();
        assert_eq!(g.x, vec![-1.0, 0.0, 1.0]);
        assert_eq!(*g.t.last().unwrap(), 0.7);
        assert_eq!(g.nodes().len(), 21);
        assert!(Grid::uniform(1.0, 0.0, 3, 0.0, 1.0, 2).is_err());
    }
}
