//! Principal component analysis through a cyclic Jacobi eigensolver, used as
//! the exact linear baseline for autoencoders.

use crate::activations::Activation;
use crate::error::{Error, Result};
use crate::linalg::Matrix;
use crate::network::{Layer, Network};

/// Convergence threshold on the off-diagonal norm, relative to
/// `max(1, ‖A‖_F)`.
pub const JACOBI_TOLERANCE: f64 = 1e-12;
const MAX_SWEEPS: usize = 100;

#[derive(Clone, Debug, PartialEq)]
pub struct PcaModel {
    pub mean: Vec<f64>,
    /// `k × d`, orthonormal rows in descending eigenvalue order.
    pub components: Matrix,
    /// Leading `k` eigenvalues of the sample covariance.
    pub eigenvalues: Vec<f64>,
    /// All `d` eigenvalues, descending.
    pub spectrum: Vec<f64>,
}

/// Eigen-decomposition of a symmetric matrix.
///
/// Returns eigenvalues in descending order with the matching unit
/// eigenvectors as the rows of the second value.
pub fn symmetric_eigen(a: &Matrix) -> Result<(Vec<f64>, Matrix)> {
    let n = a.rows();
    if a.cols() != n {
        return Err(Error::shape("symmetric_eigen", a.shape(), (n, n)));
    }
    if !a.all_finite() {
        return Err(Error::InvalidArgument("matrix has non-finite entries".into()));
    }
    let mut m = a.as_slice().to_vec();
    // rows are the eigenvectors
    let mut vt = Matrix::identity(n).into_vec();
    let scale = a.frobenius_sq().sqrt().max(1.0);
    let off = |m: &[f64]| -> f64 {
        let mut s = 0.0;
        for p in 0..n {
            for q in 0..n {
                if p != q {
                    s += m[p * n + q] * m[p * n + q];
                }
            }
        }
        s.sqrt()
    };

    let mut sweeps = 0;
    while off(&m) > JACOBI_TOLERANCE * scale {
        if sweeps == MAX_SWEEPS {
            return Err(Error::InvalidArgument(format!(
                "Jacobi iteration did not converge in {MAX_SWEEPS} sweeps"
            )));
        }
        sweeps += 1;
        for p in 0..n {
            for q in p + 1..n {
                let apq = m[p * n + q];
                if apq == 0.0 {
                    continue;
                }
                let (app, aqq) = (m[p * n + p], m[q * n + q]);
                let theta = (aqq - app) / (2.0 * apq);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                rotate_pair(&mut m, n, p, q, c, s);
                // mirror the new rows into the columns
                for k in 0..n {
                    m[k * n + p] = m[p * n + k];
                    m[k * n + q] = m[q * n + k];
                }
                m[p * n + p] = c * c * app - 2.0 * c * s * apq + s * s * aqq;
                m[q * n + q] = s * s * app + 2.0 * c * s * apq + c * c * aqq;
                m[p * n + q] = 0.0;
                m[q * n + p] = 0.0;
                rotate_pair(&mut vt, n, p, q, c, s);
            }
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| m[j * n + j].total_cmp(&m[i * n + i]));
    let values = order.iter().map(|&i| m[i * n + i]).collect();
    let mut vectors = Matrix::zeros(n, n);
    for (r, &i) in order.iter().enumerate() {
        let row = vectors.row_mut(r);
        row.copy_from_slice(&vt[i * n..(i + 1) * n]);
        fix_sign(row);
    }
    Ok((values, vectors))
}

/// Replaces rows `p < q` of a row-major `n × n` array by
/// `c·row_p − s·row_q` and `s·row_p + c·row_q`.
fn rotate_pair(m: &mut [f64], n: usize, p: usize, q: usize, c: f64, s: f64) {
    let (head, tail) = m.split_at_mut(q * n);
    let row_p = &mut head[p * n..(p + 1) * n];
    let row_q = &mut tail[..n];
    for (x, y) in row_p.iter_mut().zip(row_q.iter_mut()) {
        let (a, b) = (*x, *y);
        *x = c * a - s * b;
        *y = s * a + c * b;
    }
}

/// Makes the largest-magnitude entry positive (first one on ties).
fn fix_sign(v: &mut [f64]) {
    let mut best = 0;
    for (i, x) in v.iter().enumerate() {
        if x.abs() > v[best].abs() {
            best = i;
        }
    }
    if v.get(best).is_some_and(|x| *x < 0.0) {
        v.iter_mut().for_each(|x| *x = -*x);
    }
}

/// Sample covariance with divisor `n − 1`.
pub fn covariance(x: &Matrix) -> Result<(Vec<f64>, Matrix)> {
    if x.rows() < 2 {
        return Err(Error::InvalidArgument(format!("PCA needs at least 2 samples, got {}", x.rows())));
    }
    let mean = x.column_means();
    let mut centered = x.clone();
    centered.add_row_broadcast(&mean.iter().map(|m| -m).collect::<Vec<_>>())?;
    let cov = centered.t_matmul(&centered)?.scale(1.0 / (x.rows() - 1) as f64);
    Ok((mean, cov))
}

pub fn fit_pca(x: &Matrix, k: usize) -> Result<PcaModel> {
    let d = x.cols();
    if k == 0 || k > d {
        return Err(Error::InvalidArgument(format!("component count must lie in 1..={d}, got {k}")));
    }
    let (mean, cov) = covariance(x)?;
    let (spectrum, vectors) = symmetric_eigen(&cov)?;
    let components = vectors.select_rows(&(0..k).collect::<Vec<_>>());
    Ok(PcaModel {
        mean,
        components,
        eigenvalues: spectrum[..k].to_vec(),
        spectrum,
    })
}

impl PcaModel {
    pub fn input_dim(&self) -> usize {
        self.mean.len()
    }

    pub fn k(&self) -> usize {
        self.components.rows()
    }

    /// Sum of the eigenvalues beyond the first `k`.
    pub fn discarded_variance(&self) -> f64 {
        self.spectrum[self.k()..].iter().sum()
    }

    /// The model as a linear tied autoencoder: encoder `W = P`,
    /// `b = −P·mean`; decoder `Pᵀ` with bias `mean`.
    pub fn to_network(&self) -> Result<Network> {
        let shift: Vec<f64> = self
            .components
            .row_iter()
            .map(|p| -p.iter().zip(&self.mean).map(|(a, b)| a * b).sum::<f64>())
            .collect();
        let encoder = Layer::new(self.components.clone(), shift, Activation::Linear)?;
        let decoder = Layer::new(self.components.transpose(), self.mean.clone(), Activation::Linear)?;
        Network::new(vec![encoder, decoder], 1, true)
    }
}

/// `(X − mean) · componentsᵀ`.
pub fn pca_encode(model: &PcaModel, x: &Matrix) -> Result<Matrix> {
    if x.cols() != model.input_dim() {
        return Err(Error::shape("pca_encode", x.shape(), (x.rows(), model.input_dim())));
    }
    let mut centered = x.clone();
    centered.add_row_broadcast(&model.mean.iter().map(|m| -m).collect::<Vec<_>>())?;
    centered.matmul_t(&model.components)
}

/// `codes · components + mean`.
pub fn pca_reconstruct(model: &PcaModel, codes: &Matrix) -> Result<Matrix> {
    let mut out = codes.matmul(&model.components)?;
    out.add_row_broadcast(&model.mean)?;
    Ok(out)
}

/// `Σₙ ‖xₙ − rₙ‖² / (n − 1)`, which equals [`PcaModel::discarded_variance`]
/// on the data the model was fitted to.
pub fn reconstruction_error(model: &PcaModel, x: &Matrix) -> Result<f64> {
    if x.rows() < 2 {
        return Err(Error::InvalidArgument("need at least 2 samples".into()));
    }
    let r = pca_reconstruct(model, &pca_encode(model, x)?)?;
    Ok(x.sub(&r)?.frobenius_sq() / (x.rows() - 1) as f64)
}
