//! Quadrature engines. Every engine sums in a fixed order, so results are
//! bit-reproducible for identical inputs.

mod area;
mod contour;
mod gauss;
mod volume;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::expr::{Expr, Mode};

pub use area::{area_integral, area_integral_with, strip_area_integral};
pub use contour::{
    contour_integral, contour_integral_with, line_integral, riemann_sum_integral,
    segment_integral_with,
};
pub use gauss::{composite, GaussRule};
pub use volume::{
    flux, surface_integral, surface_integral_with, volume_integral, volume_integral_with,
};

/// Resolution of the quadrature engines.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default)]
pub struct QuadSpec {
    /// Gauss-Legendre order on each panel of a 1D integral.
    pub nodes_per_panel: usize,
    /// Equal panels per path segment.
    pub panels: usize,
    /// Tensor-rule order per axis for area, surface and volume integrals.
    pub grid: usize,
}

impl Default for QuadSpec {
    fn default() -> Self {
        Self {
            nodes_per_panel: 16,
            panels: 8,
            grid: 64,
        }
    }
}

impl QuadSpec {
    pub fn new(nodes_per_panel: usize, panels: usize, grid: usize) -> Result<Self> {
        let q = Self {
            nodes_per_panel,
            panels,
            grid,
        };
        q.validate()?;
        Ok(q)
    }

    pub fn validate(&self) -> Result<()> {
        if self.nodes_per_panel == 0 || self.panels == 0 || self.grid == 0 {
            return Err(Error::Invalid(format!(
                "quadrature sizes must be positive: {self:?}"
            )));
        }
        Ok(())
    }

    pub(crate) fn line_rule(&self) -> GaussRule {
        GaussRule::new(self.nodes_per_panel)
    }

    pub(crate) fn grid_rule(&self) -> GaussRule {
        GaussRule::new(self.grid)
    }
}

pub(crate) fn require_mode(e: &Expr, mode: Mode, role: &str) -> Result<()> {
    if e.mode() == mode {
        Ok(())
    } else {
        Err(Error::Invalid(format!(
            "{role} must be a {mode} expression, got {}",
            e.mode()
        )))
    }
}

pub(crate) fn finite(v: num_complex::Complex64, at: impl FnOnce() -> String) -> Result<num_complex::Complex64> {
    if v.re.is_finite() && v.im.is_finite() {
        Ok(v)
    } else {
        Err(Error::Singular(format!("non-finite sample at {}", at())))
    }
}
