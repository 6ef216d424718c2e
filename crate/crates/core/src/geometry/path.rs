use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::expr::{EvalEnv, Expr, Mode, Var};

/// Join tolerance between consecutive segments, relative to `max(1, |p|)`.
pub const JOIN_TOL: f64 = 1e-12;

fn lerp(a: f64, b: f64, s: f64) -> f64 {
    (1.0 - s) * a + s * b
}

fn clerp(a: Complex64, b: Complex64, s: f64) -> Complex64 {
    a * (1.0 - s) + b * s
}

pub(crate) fn close(a: Complex64, b: Complex64) -> bool {
    (a - b).norm() <= JOIN_TOL * a.norm().max(b.norm()).max(1.0)
}

/// A plane curve `(x(t), y(t))` given by expressions in one real parameter.
#[derive(Debug, Clone, PartialEq)]
pub struct CurveSegment {
    param: Var,
    x: Expr,
    y: Expr,
    dx: Expr,
    dy: Expr,
    t0: f64,
    t1: f64,
}

impl CurveSegment {
    /// `x` and `y` must both be in `Mode::Param(param)`.
    pub fn new(x: Expr, y: Expr, t0: f64, t1: f64) -> Result<Self> {
        let param = match x.mode() {
            Mode::Param(v) => v,
            m => {
                return Err(Error::Geometry(format!(
                    "curve components must be in parameter mode, got {m}"
                )))
            }
        };
        if y.mode() != x.mode() {
            return Err(Error::Geometry(
                "curve components use different parameters".into(),
            ));
        }
        if !(t0.is_finite() && t1.is_finite()) || t0 == t1 {
            return Err(Error::Geometry(format!("bad parameter range [{t0}, {t1}]")));
        }
        let dx = x.diff(param)?;
        let dy = y.diff(param)?;
        Ok(Self {
            param,
            x,
            y,
            dx,
            dy,
            t0,
            t1,
        })
    }

    fn eval_pair(&self, a: &Expr, b: &Expr, tau: f64) -> Result<Complex64> {
        let env = EvalEnv::param(self.param, tau);
        let at = Complex64::new(tau, 0.0);
        let u = a.eval(&env).map_err(Error::eval(at))?;
        let v = b.eval(&env).map_err(Error::eval(at))?;
        Ok(u + Complex64::i() * v)
    }
}

/// One smooth piece of a path, parameterized over `s` in `[0, 1]`.
#[derive(Debug, Clone, PartialEq)]
pub enum Segment {
    Line {
        start: Complex64,
        end: Complex64,
    },
    /// Counterclockwise when `end_angle > start_angle`.
    Arc {
        center: Complex64,
        radius: f64,
        start_angle: f64,
        end_angle: f64,
    },
    Curve(CurveSegment),
}

impl Segment {
    pub fn line(start: Complex64, end: Complex64) -> Self {
        Segment::Line { start, end }
    }

    pub fn arc(center: Complex64, radius: f64, start_angle: f64, end_angle: f64) -> Result<Self> {
        if !(radius > 0.0 && radius.is_finite()) {
            return Err(Error::Geometry(format!("arc radius must be positive, got {radius}")));
        }
        if !(start_angle.is_finite() && end_angle.is_finite()) || start_angle == end_angle {
            return Err(Error::Geometry("arc needs a nonempty angle range".into()));
        }
        Ok(Segment::Arc {
            center,
            radius,
            start_angle,
            end_angle,
        })
    }

    pub fn point(&self, s: f64) -> Result<Complex64> {
        match self {
            Segment::Line { start, end } => Ok(clerp(*start, *end, s)),
            Segment::Arc {
                center,
                radius,
                start_angle,
                end_angle,
            } => Ok(center + Complex64::from_polar(*radius, lerp(*start_angle, *end_angle, s))),
            Segment::Curve(c) => c.eval_pair(&c.x, &c.y, lerp(c.t0, c.t1, s)),
        }
    }

    /// Derivative of [`Segment::point`] with respect to `s`.
    pub fn derivative(&self, s: f64) -> Result<Complex64> {
        match self {
            Segment::Line { start, end } => Ok(end - start),
            Segment::Arc {
                radius,
                start_angle,
                end_angle,
                ..
            } => {
                let theta = lerp(*start_angle, *end_angle, s);
                Ok(Complex64::i() * Complex64::from_polar(*radius, theta) * (end_angle - start_angle))
            }
            Segment::Curve(c) => Ok(c.eval_pair(&c.dx, &c.dy, lerp(c.t0, c.t1, s))? * (c.t1 - c.t0)),
        }
    }

    pub fn start(&self) -> Result<Complex64> {
        self.point(0.0)
    }

    pub fn end(&self) -> Result<Complex64> {
        self.point(1.0)
    }

    pub fn reversed(&self) -> Segment {
        match self {
            Segment::Line { start, end } => Segment::Line {
                start: *end,
                end: *start,
            },
            Segment::Arc {
                center,
                radius,
                start_angle,
                end_angle,
            } => Segment::Arc {
                center: *center,
                radius: *radius,
                start_angle: *end_angle,
                end_angle: *start_angle,
            },
            Segment::Curve(c) => Segment::Curve(CurveSegment {
                t0: c.t1,
                t1: c.t0,
                ..c.clone()
            }),
        }
    }

    fn distance_to(&self, a: Complex64) -> f64 {
        match self {
            Segment::Line { start, end } => {
                let d = end - start;
                let len2 = d.norm_sqr();
                if len2 == 0.0 {
                    return (a - start).norm();
                }
                let s = ((a - start) * d.conj()).re / len2;
                (a - clerp(*start, *end, s.clamp(0.0, 1.0))).norm()
            }
            Segment::Arc {
                center,
                radius,
                start_angle,
                end_angle,
            } => {
                let rel = a - center;
                let (lo, hi) = if start_angle <= end_angle {
                    (*start_angle, *end_angle)
                } else {
                    (*end_angle, *start_angle)
                };
                let mut best = (self.point(0.0).unwrap() - a)
                    .norm()
                    .min((self.point(1.0).unwrap() - a).norm());
                if rel.norm() > 0.0 {
                    let phi = rel.arg();
                    let tau = std::f64::consts::TAU;
                    // every representative of phi inside the swept range
                    let mut k = ((lo - phi) / tau).ceil();
                    while phi + k * tau <= hi {
                        let p = center + Complex64::from_polar(*radius, phi + k * tau);
                        best = best.min((p - a).norm());
                        k += 1.0;
                    }
                } else {
                    best = *radius;
                }
                best
            }
            Segment::Curve(_) => {
                const SAMPLES: usize = 2048;
                (0..=SAMPLES)
                    .filter_map(|k| self.point(k as f64 / SAMPLES as f64).ok())
                    .map(|p| (p - a).norm())
                    .fold(f64::INFINITY, f64::min)
            }
        }
    }
}

/// A piecewise-smooth oriented curve. Segment `k` of `n` occupies the global
/// parameter interval `[k/n, (k+1)/n]`.
#[derive(Debug, Clone, PartialEq)]
pub struct Path {
    segments: Vec<Segment>,
    start: Complex64,
    end: Complex64,
}

impl Path {
    pub fn new(segments: Vec<Segment>) -> Result<Self> {
        if segments.is_empty() {
            return Err(Error::Geometry("a path needs at least one segment".into()));
        }
        for (k, pair) in segments.windows(2).enumerate() {
            let (a, b) = (pair[0].end()?, pair[1].start()?);
            if !close(a, b) {
                return Err(Error::Geometry(format!(
                    "segment {k} ends at {a} but segment {} starts at {b}",
                    k + 1
                )));
            }
        }
        let start = segments[0].start()?;
        let end = segments[segments.len() - 1].end()?;
        Ok(Self {
            segments,
            start,
            end,
        })
    }

    pub fn line(a: Complex64, b: Complex64) -> Self {
        Self::new(vec![Segment::line(a, b)]).expect("a single line is a valid path")
    }

    pub fn polyline(points: &[Complex64]) -> Result<Self> {
        if points.len() < 2 {
            return Err(Error::Geometry("a polyline needs two points".into()));
        }
        Self::new(points.windows(2).map(|w| Segment::line(w[0], w[1])).collect())
    }

    /// Counterclockwise full circle starting at angle 0.
    pub fn circle(center: Complex64, radius: f64) -> Result<Self> {
        Self::new(vec![Segment::arc(center, radius, 0.0, std::f64::consts::TAU)?])
    }

    pub fn arc(center: Complex64, radius: f64, start_angle: f64, end_angle: f64) -> Result<Self> {
        Self::new(vec![Segment::arc(center, radius, start_angle, end_angle)?])
    }

    pub fn segments(&self) -> &[Segment] {
        &self.segments
    }

    pub fn start(&self) -> Complex64 {
        self.start
    }

    pub fn end(&self) -> Complex64 {
        self.end
    }

    pub fn is_closed(&self) -> bool {
        close(self.start, self.end)
    }

    fn locate(&self, t: f64) -> Result<(usize, f64)> {
        if !(0.0..=1.0).contains(&t) {
            return Err(Error::OutOfRange {
                value: t,
                lo: 0.0,
                hi: 1.0,
            });
        }
        let n = self.segments.len();
        let scaled = t * n as f64;
        let k = (scaled.floor() as usize).min(n - 1);
        Ok((k, scaled - k as f64))
    }

    pub fn point_at(&self, t: f64) -> Result<Complex64> {
        if t == 0.0 {
            return Ok(self.start);
        }
        if t == 1.0 {
            return Ok(self.end);
        }
        let (k, s) = self.locate(t)?;
        self.segments[k].point(s)
    }

    /// Derivative with respect to the global parameter. At a joint the
    /// segment to the right is used.
    pub fn tangent_at(&self, t: f64) -> Result<Complex64> {
        let (k, s) = self.locate(t)?;
        Ok(self.segments[k].derivative(s)? * self.segments.len() as f64)
    }

    /// Global parameters of the segment joints, including 0 and 1.
    pub fn breakpoints(&self) -> Vec<f64> {
        let n = self.segments.len();
        (0..=n).map(|k| k as f64 / n as f64).collect()
    }

    pub fn reversed(&self) -> Path {
        Path {
            segments: self.segments.iter().rev().map(Segment::reversed).collect(),
            start: self.end,
            end: self.start,
        }
    }

    pub fn concat(&self, other: &Path) -> Result<Path> {
        let mut segments = self.segments.clone();
        segments.extend(other.segments.iter().cloned());
        Path::new(segments)
    }

    /// Distance from `a` to the curve. Exact for lines and arcs, sampled for
    /// expression curves.
    pub fn distance_to(&self, a: Complex64) -> f64 {
        self.segments
            .iter()
            .map(|s| s.distance_to(a))
            .fold(f64::INFINITY, f64::min)
    }
}
