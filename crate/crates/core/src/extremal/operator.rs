use rayon::prelude::*;

use super::RatioEstimate;
use crate::bessel::BesselOrder;
use crate::error::{Error, Result};
use crate::numerics::{sphere_measure, RadialGrid};
use crate::weights::Weight;

const RAYLEIGH_TOL: f64 = 1e-8;
const MAX_ITERATIONS: usize = 20_000;

/// `f -> u^(1/2) F(v^(-1/2) f)` on radial functions, discretized on one grid
/// used for both `r` and `rho`. In the coordinates `y_j = d_j f(r_j)`, with
/// `d_j^2 = omega w_j r_j^(n-1)`, Euclidean norms are radial `L^2` norms and
/// the operator is the matrix
/// `M_ij = d_i d_j u(r_i)^(1/2) v(r_j)^(-1/2) j_{n/2-1}(r_i r_j)`.
#[derive(Debug, Clone)]
pub struct L2Operator {
    dim: usize,
    matrix: Vec<f64>,
    scale: Vec<f64>,
    nodes: Vec<f64>,
}

impl L2Operator {
    pub fn new(u: &Weight, v: &Weight, n: usize, grid: &RadialGrid) -> Result<Self> {
        if !u.is_radial() || !v.is_radial() {
            return Err(Error::Unsupported("the L2 operator needs radial weights".into()));
        }
        let omega = sphere_measure(n);
        let nm1 = n as i32 - 1;
        let d: Vec<f64> = grid
            .nodes
            .iter()
            .zip(&grid.weights)
            .map(|(&r, &w)| (omega * w * r.powi(nm1)).sqrt())
            .collect();
        let mut left = Vec::with_capacity(d.len());
        let mut right = Vec::with_capacity(d.len());
        for (&r, &dj) in grid.nodes.iter().zip(&d) {
            let (ur, vr) = (u.radial(r), v.radial(r));
            if !(vr > 0.0) || !vr.is_finite() || !(ur >= 0.0) || !ur.is_finite() {
                return Err(Error::Domain(format!("weights must be finite with v > 0 on the grid; at r = {r}: u = {ur}, v = {vr}")));
            }
            left.push(dj * ur.sqrt());
            right.push(dj / vr.sqrt());
        }
        let order = BesselOrder::for_dimension(n);
        let nodes = grid.nodes.clone();
        let m = nodes.len();
        let matrix: Vec<f64> = (0..m)
            .into_par_iter()
            .flat_map_iter(|i| {
                let (nodes, left, right) = (&nodes, &left, &right);
                (0..m).map(move |j| left[i] * right[j] * order.normalized(nodes[i] * nodes[j]))
            })
            .collect();
        Ok(L2Operator { dim: m, matrix, scale: d, nodes })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Row-major entries.
    pub fn matrix(&self) -> &[f64] {
        &self.matrix
    }

    fn apply(&self, x: &[f64]) -> Vec<f64> {
        self.matrix.par_chunks(self.dim).map(|row| row.iter().zip(x).map(|(a, b)| a * b).sum()).collect()
    }

    fn apply_transpose(&self, y: &[f64]) -> Vec<f64> {
        let mut out = vec![0.0; self.dim];
        for (row, &yi) in self.matrix.chunks(self.dim).zip(y) {
            for (o, a) in out.iter_mut().zip(row) {
                *o += a * yi;
            }
        }
        out
    }
}

fn norm(x: &[f64]) -> f64 {
    x.iter().map(|v| v * v).sum::<f64>().sqrt()
}

/// Largest singular value of the discretized map `f -> u^(1/2) F(v^(-1/2) f)`,
/// by power iteration on `M^T M`. A lower bound for the `L^2` Pitt constant
/// up to discretization error.
pub fn best_constant_l2(u: &Weight, v: &Weight, n: usize, grid: &RadialGrid) -> Result<RatioEstimate> {
    let op = L2Operator::new(u, v, n, grid)?;
    // start from a Gaussian, which is close to extremal for u = v = 1
    let mut x: Vec<f64> = op.nodes.iter().zip(&op.scale).map(|(r, d)| d * (-0.5 * r * r).exp()).collect();
    let mut history = Vec::new();
    let mut prev = 0.0;
    let mut converged = false;
    for _ in 0..MAX_ITERATIONS {
        let nx = norm(&x);
        if !(nx > 0.0) {
            return Err(Error::NonConvergence { value: 0.0, error: f64::INFINITY });
        }
        x.iter_mut().for_each(|v| *v /= nx);
        let y = op.apply(&x);
        let value = norm(&y);
        history.push(value);
        if (value - prev).abs() <= RAYLEIGH_TOL * value {
            converged = true;
            break;
        }
        prev = value;
        x = op.apply_transpose(&y);
    }
    let value = *history.last().unwrap();
    let witness: Vec<[f64; 2]> = op
        .nodes
        .iter()
        .zip(&op.scale)
        .zip(&x)
        .map(|((&r, &d), &xv)| [r, xv / d])
        .collect();
    Ok(RatioEstimate::new(value, history, converged, witness))
}

/// [`best_constant_l2`] on successively refined grids. The estimate is
/// flagged unbounded when every refinement raises it by more than 1%.
pub fn l2_refinement(u: &Weight, v: &Weight, n: usize, grids: &[RadialGrid]) -> Result<RatioEstimate> {
    if grids.len() < 2 {
        return Err(Error::InvalidInput("refinement needs at least two grids".into()));
    }
    let estimates = grids
        .iter()
        .map(|g| best_constant_l2(u, v, n, g))
        .collect::<Result<Vec<_>>>()?;
    let values: Vec<f64> = estimates.iter().map(|e| e.value).collect();
    let growing = values.windows(2).all(|w| w[1] > 1.01 * w[0]);
    let mut best = estimates.into_iter().max_by(|a, b| a.value.total_cmp(&b.value)).unwrap();
    best.history = values;
    best.unbounded = growing && grids.len() >= 3;
    Ok(best)
}
