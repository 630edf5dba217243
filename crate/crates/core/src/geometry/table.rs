use crate::error::{Error, Result};
use crate::profile::Evaluation;

/// A tabulated profile: values and first two derivatives at strictly
/// increasing nodes, joined by quintic Hermite pieces (so the interpolant is
/// C² and reproduces the node data exactly). Beyond the last node the
/// profile continues along its tangent line.
#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    x: Vec<f64>,
    y: Vec<f64>,
    dy: Vec<f64>,
    d2y: Vec<f64>,
}

impl Table {
    pub fn new(x: Vec<f64>, y: Vec<f64>, dy: Vec<f64>, d2y: Vec<f64>) -> Result<Self> {
        let n = x.len();
        if n < 2 {
            return Err(Error::InsufficientData { needed: 2, got: n });
        }
        if y.len() != n || dy.len() != n || d2y.len() != n {
            return Err(Error::InvalidMetric("table columns differ in length".into()));
        }
        if x.windows(2).any(|w| !(w[1] > w[0])) {
            return Err(Error::InvalidMetric("table radii must be strictly increasing".into()));
        }
        if x.iter().chain(&y).chain(&dy).chain(&d2y).any(|v| !v.is_finite()) {
            return Err(Error::InvalidMetric("table contains non-finite entries".into()));
        }
        Ok(Self { x, y, dy, d2y })
    }

    /// Builds a table from bare samples, estimating node derivatives with
    /// second-order finite differences on the (possibly uneven) grid.
    pub fn from_samples(x: Vec<f64>, y: Vec<f64>) -> Result<Self> {
        let n = x.len();
        if n < 3 {
            return Err(Error::InsufficientData { needed: 3, got: n });
        }
        if y.len() != n {
            return Err(Error::InvalidMetric("table columns differ in length".into()));
        }
        let mut dy = vec![0.0; n];
        let mut d2y = vec![0.0; n];
        for i in 0..n {
            let j = i.clamp(1, n - 2);
            let (x0, x1, x2) = (x[j - 1], x[j], x[j + 1]);
            let (y0, y1, y2) = (y[j - 1], y[j], y[j + 1]);
            let t = x[i];
            // Derivatives of the parabola through the three neighbouring samples.
            let l0 = 1.0 / ((x0 - x1) * (x0 - x2));
            let l1 = 1.0 / ((x1 - x0) * (x1 - x2));
            let l2 = 1.0 / ((x2 - x0) * (x2 - x1));
            dy[i] = y0 * l0 * ((t - x1) + (t - x2)) + y1 * l1 * ((t - x0) + (t - x2)) + y2 * l2 * ((t - x0) + (t - x1));
            d2y[i] = 2.0 * (y0 * l0 + y1 * l1 + y2 * l2);
        }
        Self::new(x, y, dy, d2y)
    }

    pub fn start(&self) -> f64 {
        self.x[0]
    }

    pub fn end(&self) -> f64 {
        self.x[self.x.len() - 1]
    }

    pub fn nodes(&self) -> &[f64] {
        &self.x
    }

    pub fn values(&self) -> &[f64] {
        &self.y
    }

    pub fn eval(&self, t: f64) -> Result<Evaluation> {
        let n = self.x.len();
        if !(t >= self.x[0]) {
            return Err(Error::Domain(format!("table evaluated at {t}, below its first node {}", self.x[0])));
        }
        if t >= self.x[n - 1] {
            let s = t - self.x[n - 1];
            return Ok(Evaluation {
                value: self.y[n - 1] + self.dy[n - 1] * s,
                d1: self.dy[n - 1],
                d2: if s == 0.0 { self.d2y[n - 1] } else { 0.0 },
                non_smooth: false,
            });
        }
        let i = self.x.partition_point(|&xi| xi <= t) - 1;
        let h = self.x[i + 1] - self.x[i];
        let u = (t - self.x[i]) / h;
        let (y0, y1) = (self.y[i], self.y[i + 1]);
        let (v0, v1) = (h * self.dy[i], h * self.dy[i + 1]);
        let (w0, w1) = (h * h * self.d2y[i], h * h * self.d2y[i + 1]);
        let dy = y1 - y0;
        let c = [
            y0,
            v0,
            0.5 * w0,
            10.0 * dy - 6.0 * v0 - 4.0 * v1 - 0.5 * (3.0 * w0 - w1),
            -15.0 * dy + 8.0 * v0 + 7.0 * v1 + 0.5 * (3.0 * w0 - 2.0 * w1),
            6.0 * dy - 3.0 * (v0 + v1) - 0.5 * (w0 - w1),
        ];
        let (mut p, mut dp, mut d2p) = (0.0, 0.0, 0.0);
        for &ck in c.iter().rev() {
            d2p = d2p * u + 2.0 * dp;
            dp = dp * u + p;
            p = p * u + ck;
        }
        Ok(Evaluation { value: p, d1: dp / h, d2: d2p / (h * h), non_smooth: false })
    }
}
