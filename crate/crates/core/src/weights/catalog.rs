use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};

/// Shared radial evaluator `r -> v0(r)`.
pub type RadialFn = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

/// A radial weight given by a closure.
///
/// The closure must be monotone between consecutive `breaks`; rearrangement
/// relies on that.
#[derive(Clone)]
pub struct CustomRadial {
    pub label: String,
    f: RadialFn,
    breaks: Vec<f64>,
}

impl CustomRadial {
    pub fn eval(&self, r: f64) -> f64 {
        (self.f)(r)
    }
}

/// Piecewise linear radial weight through `(nodes[i], values[i])`, extended
/// by the end values outside the node range.
#[derive(Debug, Clone, PartialEq)]
pub struct TabulatedRadial {
    nodes: Vec<f64>,
    values: Vec<f64>,
}

impl TabulatedRadial {
    pub fn new(nodes: Vec<f64>, values: Vec<f64>) -> Result<Self> {
        if nodes.len() != values.len() || nodes.len() < 2 {
            return Err(Error::InvalidInput(
                "tabulated weight needs at least two (r, value) rows".into(),
            ));
        }
        if nodes[0] < 0.0 || nodes.windows(2).any(|w| !(w[1] > w[0])) {
            return Err(Error::InvalidInput(
                "radii must be non-negative and strictly increasing".into(),
            ));
        }
        if values.iter().any(|v| !(v.is_finite() && *v >= 0.0)) {
            return Err(Error::InvalidInput("weight values must be finite and >= 0".into()));
        }
        Ok(TabulatedRadial { nodes, values })
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn eval(&self, r: f64) -> f64 {
        let n = &self.nodes;
        if r <= n[0] {
            return self.values[0];
        }
        if r >= n[n.len() - 1] {
            return self.values[n.len() - 1];
        }
        let i = n.partition_point(|&x| x <= r) - 1;
        let t = (r - n[i]) / (n[i + 1] - n[i]);
        self.values[i] * (1.0 - t) + self.values[i + 1] * t
    }
}

/// Piecewise constant weight on a uniform Cartesian grid of cells in `R^n`,
/// `n <= 3`, zero outside the grid box.
#[derive(Debug, Clone, PartialEq)]
pub struct GridWeight {
    n: usize,
    lower: Vec<f64>,
    spacing: f64,
    shape: Vec<usize>,
    values: Vec<f64>,
}

impl GridWeight {
    /// `values` are in row-major order over `shape`; cell `i` along axis `d`
    /// covers `[lower[d] + i h, lower[d] + (i + 1) h)`.
    pub fn new(lower: Vec<f64>, spacing: f64, shape: Vec<usize>, values: Vec<f64>) -> Result<Self> {
        let n = lower.len();
        if !(1..=3).contains(&n) || shape.len() != n {
            return Err(Error::InvalidInput("grid weights need 1 <= n <= 3".into()));
        }
        if !(spacing > 0.0) || shape.contains(&0) {
            return Err(Error::InvalidInput("grid spacing and shape must be positive".into()));
        }
        if values.len() != shape.iter().product::<usize>() {
            return Err(Error::InvalidInput("value count does not match the grid shape".into()));
        }
        if values.iter().any(|v| !(*v >= 0.0) || v.is_nan()) {
            return Err(Error::InvalidInput("weight values must be >= 0".into()));
        }
        Ok(GridWeight {
            n,
            lower,
            spacing,
            shape,
            values,
        })
    }

    pub fn dimension(&self) -> usize {
        self.n
    }

    pub fn cell_measure(&self) -> f64 {
        self.spacing.powi(self.n as i32)
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn eval(&self, x: &[f64]) -> f64 {
        let mut idx = 0usize;
        for d in 0..self.n {
            let c = ((x[d] - self.lower[d]) / self.spacing).floor();
            if c < 0.0 || c >= self.shape[d] as f64 {
                return 0.0;
            }
            idx = idx * self.shape[d] + c as usize;
        }
        self.values[idx]
    }

    /// Lower corner of cell number `i` (row-major).
    pub fn cell_corner(&self, mut i: usize) -> Vec<f64> {
        let mut c = vec![0.0; self.n];
        for d in (0..self.n).rev() {
            c[d] = self.lower[d] + (i % self.shape[d]) as f64 * self.spacing;
            i /= self.shape[d];
        }
        c
    }

    pub fn spacing(&self) -> f64 {
        self.spacing
    }

    fn map(&self, g: impl Fn(f64) -> f64) -> GridWeight {
        GridWeight {
            values: self.values.iter().map(|&v| g(v)).collect(),
            ..self.clone()
        }
    }
}

/// A weight `v >= 0` on `R^n`.
#[derive(Clone)]
pub enum Weight {
    /// `|x|^a`.
    Power { a: f64 },
    /// `|x|^alpha` for `|x| <= 1` and `|x|^beta` beyond.
    Piecewise { alpha: f64, beta: f64 },
    /// Radial weight with `u0(r) r^(n-1) = sum_k k^n chi_{A_k}(r)`,
    /// `A_k = (k, k + k^(-n-1))`.
    Counterexample { n: usize },
    TabulatedRadial(TabulatedRadial),
    TabulatedGrid(GridWeight),
    Radial(CustomRadial),
}

impl fmt::Debug for Weight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Weight({})", self.label())
    }
}

impl Weight {
    pub fn constant() -> Self {
        Weight::Power { a: 0.0 }
    }

    pub fn power(a: f64) -> Self {
        Weight::Power { a }
    }

    pub fn piecewise(alpha: f64, beta: f64) -> Self {
        Weight::Piecewise { alpha, beta }
    }

    pub fn counterexample(n: usize) -> Self {
        assert!(n >= 1, "dimension must be positive");
        Weight::Counterexample { n }
    }

    /// A radial weight from a closure, monotone between the given breakpoints.
    pub fn radial_fn(
        label: impl Into<String>,
        breaks: Vec<f64>,
        f: impl Fn(f64) -> f64 + Send + Sync + 'static,
    ) -> Self {
        let mut breaks: Vec<f64> = breaks.into_iter().filter(|b| *b > 0.0 && b.is_finite()).collect();
        breaks.sort_by(f64::total_cmp);
        breaks.dedup();
        Weight::Radial(CustomRadial {
            label: label.into(),
            f: Arc::new(f),
            breaks,
        })
    }

    /// `(1 + |x|)^gamma`.
    pub fn shifted_power(gamma: f64) -> Self {
        Weight::radial_fn(format!("(1+|x|)^{gamma}"), vec![], move |r| (1.0 + r).powf(gamma))
    }

    pub fn tabulated_radial(nodes: Vec<f64>, values: Vec<f64>) -> Result<Self> {
        Ok(Weight::TabulatedRadial(TabulatedRadial::new(nodes, values)?))
    }

    pub fn label(&self) -> String {
        match self {
            Weight::Power { a } => format!("|x|^{a}"),
            Weight::Piecewise { alpha, beta } => format!("piecewise(alpha={alpha}, beta={beta})"),
            Weight::Counterexample { n } => format!("counterexample(n={n})"),
            Weight::TabulatedRadial(t) => format!("tabulated-radial({} nodes)", t.nodes.len()),
            Weight::TabulatedGrid(g) => format!("tabulated-grid(n={}, {} cells)", g.n, g.values.len()),
            Weight::Radial(c) => c.label.clone(),
        }
    }

    pub fn is_radial(&self) -> bool {
        !matches!(self, Weight::TabulatedGrid(_))
    }

    /// `v0(r)` for radial weights, `None` for grid weights.
    pub fn radial_value(&self, r: f64) -> Option<f64> {
        let r = r.abs();
        Some(match self {
            Weight::Power { a } => power(r, *a),
            Weight::Piecewise { alpha, beta } => {
                if r <= 1.0 {
                    power(r, *alpha)
                } else {
                    power(r, *beta)
                }
            }
            Weight::Counterexample { n } => counterexample_value(*n, r),
            Weight::TabulatedRadial(t) => t.eval(r),
            Weight::Radial(c) => c.eval(r),
            Weight::TabulatedGrid(_) => return None,
        })
    }

    /// `v0(r)`; panics on grid weights, which have no radial profile.
    pub fn radial(&self, r: f64) -> f64 {
        self.radial_value(r).expect("weight is not radial")
    }

    /// `v(x)`.
    pub fn value(&self, x: &[f64]) -> f64 {
        match self {
            Weight::TabulatedGrid(g) => g.eval(x),
            _ => self.radial(x.iter().map(|t| t * t).sum::<f64>().sqrt()),
        }
    }

    /// Radii in `(0, r_max]` where the radial profile may be non-smooth or
    /// change monotonicity.
    pub fn breakpoints(&self, r_max: f64) -> Vec<f64> {
        let mut b: Vec<f64> = match self {
            Weight::Power { .. } => vec![],
            Weight::Piecewise { .. } => vec![1.0],
            Weight::Counterexample { n } => {
                let kmax = r_max.floor().min(5e6) as u64;
                let mut v = Vec::with_capacity(2 * kmax as usize);
                for k in 1..=kmax {
                    let kf = k as f64;
                    v.push(kf);
                    v.push(kf + shell_width(*n, kf));
                }
                v
            }
            Weight::TabulatedRadial(t) => t.nodes.clone(),
            Weight::Radial(c) => c.breaks.clone(),
            Weight::TabulatedGrid(_) => vec![],
        };
        b.retain(|x| *x > 0.0 && *x <= r_max);
        b
    }

    /// Exponent `k` with `v0(r) ~ r^k` as `r -> 0`, when known exactly.
    pub fn head_exponent(&self) -> Option<f64> {
        match self {
            Weight::Power { a } => Some(*a),
            Weight::Piecewise { alpha, .. } => Some(*alpha),
            _ => None,
        }
    }

    /// Exponent `k` with `v0(r) ~ r^k` as `r -> inf`, when known exactly.
    pub fn tail_exponent(&self) -> Option<f64> {
        match self {
            Weight::Power { a } => Some(*a),
            Weight::Piecewise { beta, .. } => Some(*beta),
            _ => None,
        }
    }

    /// The weight `v^e`; zero values raised to negative powers become `+inf`.
    pub fn powf(&self, e: f64) -> Weight {
        match self {
            Weight::Power { a } => Weight::Power { a: a * e },
            Weight::Piecewise { alpha, beta } => Weight::Piecewise {
                alpha: alpha * e,
                beta: beta * e,
            },
            Weight::TabulatedGrid(g) => Weight::TabulatedGrid(g.map(|v| power(v, e))),
            other => {
                let base = other.clone();
                let breaks = match other {
                    Weight::Counterexample { .. } => vec![],
                    _ => other.breakpoints(f64::INFINITY),
                };
                Weight::radial_fn(format!("({})^{e}", other.label()), breaks, move |r| {
                    power(base.radial(r), e)
                })
            }
        }
    }
}

/// `x^a` with `0^0 = 1` and `0^a = inf` for `a < 0`.
pub(crate) fn power(x: f64, a: f64) -> f64 {
    if a == 0.0 {
        1.0
    } else {
        x.powf(a)
    }
}

/// Width `k^(-n-1)` of the shell `A_k`.
pub(crate) fn shell_width(n: usize, k: f64) -> f64 {
    k.powi(-(n as i32) - 1)
}

fn counterexample_value(n: usize, r: f64) -> f64 {
    // Only A_k with k = floor(r) can contain r, since the shells have width <= 1.
    let k = r.floor();
    if k < 1.0 {
        return 0.0;
    }
    if r > k && r < k + shell_width(n, k) {
        k.powi(n as i32) * r.powi(1 - n as i32)
    } else {
        0.0
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn counterexample_values() {
        let u = Weight::counterexample(2);
        assert!((u.radial(1.5) - 2.0 / 3.0).abs() < 1e-15);
        assert_eq!(u.radial(2.5), 0.0);
        assert!(u.radial(2.1) > 0.0);
        assert_eq!(u.radial(2.0), 0.0);
        assert_eq!(u.radial(0.5), 0.0);
        let b = u.breakpoints(3.5);
        assert_eq!(b, vec![1.0, 2.0, 2.0, 2.125, 3.0, 3.0 + 1.0 / 27.0]);
    }

    #[test]
    fn piecewise_and_powers() {
        let v = Weight::piecewise(1.0, 3.0);
        assert_eq!(v.radial(0.5), 0.5);
        assert_eq!(v.radial(2.0), 8.0);
        let w = v.powf(-1.0);
        assert_eq!(w.radial(2.0), 0.125);
        assert_eq!(Weight::power(-1.0).radial(0.0), f64::INFINITY);
        assert_eq!(Weight::constant().radial(0.0), 1.0);
        assert_eq!(Weight::power(1.0).value(&[3.0, 4.0]), 5.0);
    }

    #[test]
    fn tabulated_interpolates() {
        let t = Weight::tabulated_radial(vec![0.0, 1.0, 3.0], vec![2.0, 1.0, 0.0]).unwrap();
        assert_eq!(t.radial(0.5), 1.5);
        assert_eq!(t.radial(2.0), 0.5);
        assert_eq!(t.radial(9.0), 0.0);
        assert!(Weight::tabulated_radial(vec![0.0, 0.0], vec![1.0, 1.0]).is_err());
    }

    #[test]
    fn grid_cells() {
        let g = GridWeight::new(vec![-1.0, -1.0], 1.0, vec![2, 2], vec![1.0, 2.0, 3.0, 4.0]).unwrap();
        assert_eq!(g.eval(&[-0.5, -0.5]), 1.0);
        assert_eq!(g.eval(&[-0.5, 0.5]), 2.0);
        assert_eq!(g.eval(&[0.5, -0.5]), 3.0);
        assert_eq!(g.eval(&[1.5, 0.0]), 0.0);
        assert_eq!(g.cell_corner(2), vec![0.0, -1.0]);
    }
}
