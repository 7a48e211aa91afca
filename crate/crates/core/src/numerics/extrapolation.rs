//! Richardson extrapolation along a geometric step sequence.

/// How the leading error exponents are chosen.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum OrderModel {
    /// Error expansion `c0 h^p + c1 h^(p+step) + c2 h^(p+2 step) + ...`.
    Declared { leading: f64, step: f64 },
    /// Order estimated from the last three raw values.
    Fitted,
}

/// Incremental Richardson table for values `A(h_k)` with `h_k = h_0 / ratio^k`.
#[derive(Debug, Clone)]
pub struct Richardson {
    ratio: f64,
    model: OrderModel,
    max_columns: usize,
    rows: Vec<Vec<f64>>,
    fitted: Vec<f64>,
}

/// Current best estimate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Extrapolant {
    pub value: f64,
    pub error: f64,
    pub order: Option<f64>,
}

impl Richardson {
    pub fn new(ratio: f64, model: OrderModel, max_columns: usize) -> Self {
        assert!(ratio > 1.0, "refinement ratio must exceed 1");
        Self {
            ratio,
            model,
            max_columns: max_columns.max(1),
            rows: Vec::new(),
            fitted: Vec::new(),
        }
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn raw(&self) -> impl Iterator<Item = f64> + '_ {
        self.rows.iter().map(|r| r[0])
    }

    /// Appends the next raw value and returns the updated extrapolant.
    pub fn push(&mut self, value: f64) -> Extrapolant {
        match self.model {
            OrderModel::Declared { leading, step } => self.push_declared(value, leading, step),
            OrderModel::Fitted => self.push_fitted(value),
        }
    }

    fn push_declared(&mut self, value: f64, leading: f64, step: f64) -> Extrapolant {
        let k = self.rows.len();
        let mut row = vec![value];
        if leading > 0.0 {
            for m in 1..=k.min(self.max_columns) {
                let p = leading + step * (m - 1) as f64;
                let factor = self.ratio.powf(p) - 1.0;
                let prev = &self.rows[k - 1];
                let t = row[m - 1] + (row[m - 1] - prev[m - 1]) / factor;
                row.push(t);
            }
        }
        self.rows.push(row);
        let row = &self.rows[k];
        let m = row.len() - 1;
        let estimate = row[m];
        let error = if k == 0 {
            f64::INFINITY
        } else {
            let mut err: f64 = 0.0;
            let prev = &self.rows[k - 1];
            if prev.len() > m {
                err = err.max((estimate - prev[m]).abs());
            } else {
                err = err.max((estimate - prev[prev.len() - 1]).abs());
            }
            if m >= 1 {
                err = err.max((estimate - row[m - 1]).abs());
            }
            err
        };
        Extrapolant {
            value: estimate,
            error,
            order: (leading > 0.0).then_some(leading),
        }
    }

    fn push_fitted(&mut self, value: f64) -> Extrapolant {
        self.rows.push(vec![value]);
        let k = self.rows.len() - 1;
        if k < 2 {
            let error = if k == 0 {
                f64::INFINITY
            } else {
                (value - self.rows[0][0]).abs()
            };
            return Extrapolant {
                value,
                error,
                order: None,
            };
        }
        let (a, b, c) = (self.rows[k - 2][0], self.rows[k - 1][0], value);
        let d1 = a - b;
        let d2 = b - c;
        let order = if d1 != 0.0 && d2 != 0.0 && d1 / d2 > 1.0 {
            Some((d1 / d2).ln() / self.ratio.ln())
        } else {
            None
        };
        let estimate = match order {
            Some(p) => c + (c - b) / (self.ratio.powf(p) - 1.0),
            None => c,
        };
        self.fitted.push(estimate);
        let error = match self.fitted.len() {
            1 => d2.abs(),
            n => (estimate - self.fitted[n - 2]).abs().max(f64::EPSILON * estimate.abs()),
        };
        Extrapolant {
            value: estimate,
            error,
            order,
        }
    }
}
