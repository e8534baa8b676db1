//! Tensor-product Gauss-Legendre quadrature over a chart with a fixed,
//! thread-count independent reduction order.

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{GeomError, Result};
use crate::geometry::Chart;
use crate::scalar::{lit, Real};

/// Gauss-Legendre nodes and weights on `[-1, 1]`, nodes ascending.
pub fn gauss_legendre<T: Real>(n: usize) -> (Vec<T>, Vec<T>) {
    assert!(n >= 1, "at least one node");
    let mut x = vec![T::zero(); n];
    let mut w = vec![T::zero(); n];
    let nf = T::from_usize(n).unwrap();
    for i in 0..n.div_ceil(2) {
        // Tricomi initial guess, then Newton on P_n
        let k = T::from_usize(i).unwrap();
        let mut z = (T::PI() * (k + lit(0.75)) / (nf + lit(0.5))).cos();
        for _ in 0..100 {
            let (p, d) = legendre(n, z);
            let dz = p / d;
            z = z - dz;
            if dz.abs() <= T::epsilon() * lit(4.0) {
                break;
            }
        }
        let (_, dp) = legendre(n, z);
        let wt = lit::<T>(2.0) / ((T::one() - z * z) * dp * dp);
        x[i] = -z;
        x[n - 1 - i] = z;
        w[i] = wt;
        w[n - 1 - i] = wt;
    }
    if n % 2 == 1 {
        x[n / 2] = T::zero();
    }
    (x, w)
}

/// `(P_n(z), P_n'(z))` by the three-term recurrence.
fn legendre<T: Real>(n: usize, z: T) -> (T, T) {
    let mut p0 = T::one();
    let mut p1 = z;
    for k in 2..=n {
        let kf = T::from_usize(k).unwrap();
        let p2 = ((kf + kf - T::one()) * z * p1 - (kf - T::one()) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    if n == 0 {
        return (T::one(), T::zero());
    }
    let nf = T::from_usize(n).unwrap();
    (p1, nf * (z * p1 - p0) / (z * z - T::one()))
}

/// Node counts per chart axis.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct QuadratureSpec {
    pub nodes: [usize; 4],
    /// Integrate axes the metric does not depend on with a single node.
    pub collapse_cyclic: bool,
}

impl QuadratureSpec {
    pub fn uniform(n: usize) -> Self {
        Self { nodes: [n; 4], collapse_cyclic: true }
    }

    pub fn validate(&self) -> Result<()> {
        if self.nodes.iter().any(|&n| n < 2) {
            return Err(GeomError::ParameterDomain(format!(
                "quadrature needs at least 2 nodes per axis, got {:?}",
                self.nodes
            )));
        }
        Ok(())
    }

    /// Doubles the node count on every axis that is actually sampled.
    pub fn refined<T: Real>(&self, chart: &Chart<T>) -> Self {
        let mut q = *self;
        for k in 0..4 {
            if !(self.collapse_cyclic && chart.cyclic[k]) {
                q.nodes[k] *= 2;
            }
        }
        q
    }
}

/// Nodes and weights per axis, mapped onto the chart box.
#[derive(Debug, Clone)]
pub struct TensorGrid<T> {
    pub axes: [(Vec<T>, Vec<T>); 4],
}

impl<T: Real> TensorGrid<T> {
    pub fn new(chart: &Chart<T>, q: &QuadratureSpec) -> Result<Self> {
        q.validate()?;
        let axes = std::array::from_fn(|k| {
            let (lo, hi) = (chart.lower[k], chart.upper[k]);
            let half = (hi - lo) * lit(0.5);
            if q.collapse_cyclic && chart.cyclic[k] {
                return (vec![lo + half], vec![hi - lo]);
            }
            let (x, w) = gauss_legendre::<T>(q.nodes[k]);
            (x.iter().map(|&z| lo + half * (z + T::one())).collect(), w.iter().map(|&v| v * half).collect())
        });
        Ok(Self { axes })
    }

    pub fn len(&self) -> usize {
        self.axes.iter().map(|a| a.0.len()).product()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Effective node count per axis.
    pub fn shape(&self) -> [usize; 4] {
        std::array::from_fn(|k| self.axes[k].0.len())
    }
}

/// Sum of a slice by recursive halving. The split points depend only on the
/// length, so the result is reproducible bit for bit.
pub fn pairwise_sum<T: Real, const N: usize>(v: &[[T; N]]) -> [T; N] {
    match v.len() {
        0 => [T::zero(); N],
        1 => v[0],
        n => {
            let (a, b) = v.split_at(n / 2);
            let (x, y) = (pairwise_sum(a), pairwise_sum(b));
            std::array::from_fn(|k| x[k] + y[k])
        }
    }
}

/// Weighted sums `Σ w f(x)` of a vector integrand together with the maximum
/// of an auxiliary pointwise quantity.
///
/// The two outer axes are distributed across threads; each task reduces its
/// inner block serially and the per-task results are combined by
/// [`pairwise_sum`] in index order.
pub fn integrate<T, const N: usize, F>(grid: &TensorGrid<T>, f: F) -> Result<([T; N], T)>
where
    T: Real,
    F: Fn(&[T; 4]) -> Result<([T; N], T)> + Sync,
{
    let [n0, n1, n2, n3] = grid.shape();
    let ax = &grid.axes;
    let rows: Vec<Result<([T; N], T)>> = (0..n0 * n1)
        .into_par_iter()
        .map(|row| {
            let (i0, i1) = (row / n1, row % n1);
            let w01 = ax[0].1[i0] * ax[1].1[i1];
            let mut block = Vec::with_capacity(n2 * n3);
            let mut peak = T::zero();
            for i2 in 0..n2 {
                for i3 in 0..n3 {
                    let x = [ax[0].0[i0], ax[1].0[i1], ax[2].0[i2], ax[3].0[i3]];
                    let (v, m) = f(&x)?;
                    if v.iter().any(|c| !c.is_finite()) || !m.is_finite() {
                        return Err(GeomError::NumericFailure { node: x.map(|c| c.to_f64_lossy()) });
                    }
                    let w = w01 * ax[2].1[i2] * ax[3].1[i3];
                    block.push(v.map(|c| c * w));
                    peak = peak.max(m);
                }
            }
            Ok((pairwise_sum(&block), peak))
        })
        .collect();
    let mut sums = Vec::with_capacity(rows.len());
    let mut peak = T::zero();
    for r in rows {
        let (s, m) = r?;
        sums.push(s);
        peak = peak.max(m);
    }
    Ok((pairwise_sum(&sums), peak))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn nodes_integrate_polynomials_exactly() {
        for n in 2..12 {
            let (x, w) = gauss_legendre::<f64>(n);
            assert_relative_eq!(w.iter().sum::<f64>(), 2.0, epsilon = 1e-14);
            for deg in 0..(2 * n) {
                let got: f64 = x.iter().zip(&w).map(|(x, w)| w * x.powi(deg as i32)).sum();
                let want = if deg % 2 == 1 { 0.0 } else { 2.0 / (deg as f64 + 1.0) };
                assert!((got - want).abs() < 1e-13, "n={n} deg={deg}");
            }
            assert!(x.windows(2).all(|p| p[0] < p[1]));
        }
    }

    #[test]
    fn many_nodes_stay_accurate() {
        let (x, w) = gauss_legendre::<f64>(96);
        let got: f64 = x.iter().zip(&w).map(|(x, w)| w * (3.0 * x).cos()).sum();
        assert_relative_eq!(got, 2.0 * 3.0f64.sin() / 3.0, epsilon = 1e-14);
    }

    #[test]
    fn pairwise_sum_is_exact_on_integers() {
        let v: Vec<[f64; 2]> = (0..1000).map(|i| [i as f64, 1.0]).collect();
        assert_eq!(pairwise_sum(&v), [499500.0, 1000.0]);
    }

    #[test]
    fn too_few_nodes_is_rejected() {
        assert!(QuadratureSpec { nodes: [1, 4, 4, 4], collapse_cyclic: false }.validate().is_err());
    }
}
