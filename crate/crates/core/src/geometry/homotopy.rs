use num_complex::Complex64;

use super::path::{close, Path};
use crate::error::{Error, Result};

/// The linear blend `base(t) + eps * (target(t) - base(t))` between two
/// paths with common endpoints.
#[derive(Debug, Clone, PartialEq)]
pub struct Homotopy {
    base: Path,
    target: Path,
}

impl Homotopy {
    pub fn new(base: Path, target: Path) -> Result<Self> {
        if !close(base.start(), target.start()) || !close(base.end(), target.end()) {
            return Err(Error::Geometry(format!(
                "homotopy endpoints differ: {} -> {} vs {} -> {}",
                base.start(),
                base.end(),
                target.start(),
                target.end()
            )));
        }
        Ok(Self { base, target })
    }

    pub fn base(&self) -> &Path {
        &self.base
    }

    pub fn target(&self) -> &Path {
        &self.target
    }

    fn check_eps(eps: f64) -> Result<()> {
        if (0.0..=1.0).contains(&eps) {
            Ok(())
        } else {
            Err(Error::OutOfRange {
                value: eps,
                lo: 0.0,
                hi: 1.0,
            })
        }
    }

    pub fn at(&self, t: f64, eps: f64) -> Result<Complex64> {
        Self::check_eps(eps)?;
        let g = self.base.point_at(t)?;
        Ok(g + (self.target.point_at(t)? - g) * eps)
    }

    /// Derivative in `t` of [`Homotopy::at`].
    pub fn tangent(&self, t: f64, eps: f64) -> Result<Complex64> {
        Self::check_eps(eps)?;
        let g = self.base.tangent_at(t)?;
        Ok(g + (self.target.tangent_at(t)? - g) * eps)
    }

    /// The displacement `W(t) = target(t) - base(t)`.
    pub fn displacement(&self, t: f64) -> Result<Complex64> {
        Ok(self.target.point_at(t)? - self.base.point_at(t)?)
    }

    pub fn displacement_tangent(&self, t: f64) -> Result<Complex64> {
        Ok(self.target.tangent_at(t)? - self.base.tangent_at(t)?)
    }

    /// Union of both paths' joints; every blended curve is smooth between
    /// consecutive entries.
    pub fn breakpoints(&self) -> Vec<f64> {
        let mut b = self.base.breakpoints();
        b.extend(self.target.breakpoints());
        b.sort_by(f64::total_cmp);
        b.dedup_by(|a, b| (*a - *b).abs() < 1e-15);
        b
    }
}

/// Free-function form of [`Homotopy::at`].
pub fn homotopy_at(h: &Homotopy, t: f64, eps: f64) -> Result<Complex64> {
    h.at(t, eps)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn sample() -> Homotopy {
        let base = Path::line(c(0.0, 0.0), c(1.0, 0.0));
        let target = Path::polyline(&[c(0.0, 0.0), c(0.0, 1.0), c(1.0, 0.0)]).unwrap();
        Homotopy::new(base, target).unwrap()
    }

    #[test]
    fn blend_endpoints_and_midpoint() {
        let h = sample();
        for t in [0.0, 0.3, 0.5, 0.8, 1.0] {
            assert_eq!(h.at(t, 0.0).unwrap(), h.base().point_at(t).unwrap());
            assert_eq!(h.at(t, 1.0).unwrap(), h.target().point_at(t).unwrap());
        }
        let mid = h.at(0.5, 0.5).unwrap();
        let want = (h.base().point_at(0.5).unwrap() + h.target().point_at(0.5).unwrap()) / 2.0;
        assert!((mid - want).norm() < 1e-15);
        assert!((mid - c(0.25, 0.5)).norm() < 1e-15);
    }

    #[test]
    fn identity_homotopy_is_constant() {
        let p = Path::circle(c(0.0, 0.0), 1.0).unwrap();
        let h = Homotopy::new(p.clone(), p.clone()).unwrap();
        for eps in [0.0, 0.25, 0.9] {
            assert_eq!(h.at(0.3, eps).unwrap(), p.point_at(0.3).unwrap());
        }
    }

    #[test]
    fn endpoints_pinned_for_every_eps() {
        let h = sample();
        for k in 0..=20 {
            let eps = k as f64 / 20.0;
            assert!((h.at(0.0, eps).unwrap() - c(0.0, 0.0)).norm() <= 1e-12);
            assert!((h.at(1.0, eps).unwrap() - c(1.0, 0.0)).norm() <= 1e-12);
        }
        assert!(h.at(0.5, 1.5).is_err());
        assert_eq!(h.breakpoints(), vec![0.0, 0.5, 1.0]);
    }

    #[test]
    fn mismatched_endpoints_rejected() {
        let a = Path::line(c(0.0, 0.0), c(1.0, 0.0));
        let b = Path::line(c(0.0, 0.0), c(1.0, 1.0));
        assert!(Homotopy::new(a, b).is_err());
    }
}
