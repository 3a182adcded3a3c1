//! Dense symmetric eigensolver (cyclic Jacobi) and the dense normalized
//! adjacency matrix. This is the exact reference path: the certificate
//! module uses it for small graphs and the test suite uses it as the
//! oracle against the iterative solver.

use crate::graph::WeightedGraph;

/// Symmetric `n x n` matrix in row-major order.
#[derive(Clone, Debug)]
pub struct SymMatrix {
    pub n: usize,
    pub data: Vec<f64>,
}

impl SymMatrix {
    pub fn zeros(n: usize) -> Self {
        Self {
            n,
            data: vec![0.0; n * n],
        }
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.n + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: f64) {
        self.data[i * self.n + j] = v;
        self.data[j * self.n + i] = v;
    }
}

/// Normalized adjacency `D^{-1/2} A D^{-1/2}` with `d_i = Σ_j |A_ij|`.
/// Rows and columns of isolated vertices are zero.
pub fn normalized_adjacency(g: &WeightedGraph) -> SymMatrix {
    let n = g.n();
    let mut m = SymMatrix::zeros(n);
    let deg = g.deg();
    for e in g.edges() {
        if deg[e.u] > 0.0 && deg[e.v] > 0.0 {
            let v = m.get(e.u, e.v) + e.w / (deg[e.u] * deg[e.v]).sqrt();
            m.set(e.u, e.v, v);
        }
    }
    m
}

/// All eigenvalues of a symmetric matrix, ascending, via cyclic Jacobi
/// rotations. Robust and accurate to machine precision for the matrix
/// sizes used here (n up to a few hundred).
pub fn symmetric_eigenvalues(mat: &SymMatrix) -> Vec<f64> {
    let n = mat.n;
    if n == 0 {
        return Vec::new();
    }
    let mut a = mat.data.clone();
    let scale: f64 = a
        .iter()
        .map(|v| v * v)
        .sum::<f64>()
        .sqrt()
        .max(f64::MIN_POSITIVE);

    for _sweep in 0..100 {
        let mut off = 0.0;
        for p in 0..n {
            for q in (p + 1)..n {
                off += a[p * n + q] * a[p * n + q];
            }
        }
        if off.sqrt() <= 1e-15 * scale {
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = a[p * n + q];
                if apq.abs() <= 1e-300 {
                    continue;
                }
                let app = a[p * n + p];
                let aqq = a[q * n + q];
                let theta = (aqq - app) / (2.0 * apq);
                let t = if theta >= 0.0 {
                    1.0 / (theta + (1.0 + theta * theta).sqrt())
                } else {
                    -1.0 / (-theta + (1.0 + theta * theta).sqrt())
                };
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = t * c;

                a[p * n + p] = app - t * apq;
                a[q * n + q] = aqq + t * apq;
                a[p * n + q] = 0.0;
                a[q * n + p] = 0.0;
                for k in 0..n {
                    if k != p && k != q {
                        let akp = a[k * n + p];
                        let akq = a[k * n + q];
                        let new_kp = c * akp - s * akq;
                        let new_kq = s * akp + c * akq;
                        a[k * n + p] = new_kp;
                        a[p * n + k] = new_kp;
                        a[k * n + q] = new_kq;
                        a[q * n + k] = new_kq;
                    }
                }
            }
        }
    }

    let mut eig: Vec<f64> = (0..n).map(|i| a[i * n + i]).collect();
    eig.sort_by(|x, y| x.partial_cmp(y).unwrap());
    eig
}

/// Smallest eigenvalue of `D^{-1/2} A D^{-1/2}`.
pub fn lambda_min(g: &WeightedGraph) -> f64 {
    let m = normalized_adjacency(g);
    *symmetric_eigenvalues(&m).first().unwrap_or(&0.0)
}
