use super::{Derivative, S2Grid, ShCoeffs};
use crate::error::{Error, Result};

/// Node values of a real function on an [`S2Grid`].
#[derive(Debug, Clone, PartialEq)]
pub struct ScalarField {
    grid: S2Grid,
    values: Vec<f64>,
}

impl ScalarField {
    pub fn new(grid: &S2Grid, values: Vec<f64>) -> Result<Self> {
        if values.len() != grid.len() {
            return Err(Error::InvalidInput(format!(
                "field has {} values, grid has {} nodes",
                values.len(),
                grid.len()
            )));
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(Error::NonFinite("field values"));
        }
        Ok(Self { grid: grid.clone(), values })
    }

    /// Sample a function of the node direction.
    pub fn from_fn(grid: &S2Grid, f: impl Fn([f64; 3]) -> f64) -> Result<Self> {
        let values = grid.nodes().into_iter().map(f).collect();
        Self::new(grid, values)
    }

    pub fn synthesize(grid: &S2Grid, c: &ShCoeffs) -> Result<Self> {
        Ok(Self { grid: grid.clone(), values: grid.synthesize(c, Derivative::Value)? })
    }

    pub fn grid(&self) -> &S2Grid {
        &self.grid
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn into_values(self) -> Vec<f64> {
        self.values
    }

    pub fn integrate(&self) -> f64 {
        self.grid.integrate_unchecked(&self.values)
    }

    pub fn analyze(&self) -> ShCoeffs {
        self.grid.analyze(&self.values).expect("validated field")
    }

    pub fn partials(&self) -> (ScalarField, ScalarField) {
        let (dt, dp) = self.grid.partials(&self.values).expect("validated field");
        (
            ScalarField { grid: self.grid.clone(), values: dt },
            ScalarField { grid: self.grid.clone(), values: dp },
        )
    }

    pub fn map(&self, f: impl Fn(f64) -> f64) -> Result<Self> {
        Self::new(&self.grid, self.values.iter().map(|v| f(*v)).collect())
    }
}
