//! Numeric sampling check of the positivity condition
//! X⌟ω₁ = Y⌟ω₂ ⇒ ω₃(X,Y) ≥ 0.
//!
//! At each sample point the structure forms are evaluated numerically, a
//! basis of ker η inside the locus tangent space is built, the linear map M
//! with (MX)⌟ω₂ = X⌟ω₁ is solved for, and the quadratic form X ↦ ω₃(X, MX)
//! is tested for positive semidefiniteness to tolerance.  This check never
//! participates in exact classification.

use super::Su2Structure;
use crate::exterior::Form;
use crate::{Error, Result};

/// One evaluation point: a value for every ring generator.
#[derive(Clone, Debug)]
pub struct PointSample {
    pub gen_values: Vec<f64>,
}

#[derive(Clone, Debug)]
pub struct PositivityReport {
    pub samples: usize,
    pub min_eigenvalue: f64,
    pub pass: bool,
}

fn numeric_two_form(f: &Form, n: usize, values: &[f64]) -> Result<Vec<Vec<f64>>> {
    let mut m = vec![vec![0.0; n]; n];
    for (mono, coeff) in f.terms() {
        let idx: Vec<usize> = mono.indices().collect();
        if idx.len() != 2 {
            return Err(Error::DegreeMismatch {
                expected: 2,
                got: idx.len() as u8,
            });
        }
        let v = coeff.eval_f64(values);
        m[idx[0]][idx[1]] += v;
        m[idx[1]][idx[0]] -= v;
    }
    Ok(m)
}

fn numeric_one_form(f: &Form, n: usize, values: &[f64]) -> Result<Vec<f64>> {
    let mut v = vec![0.0; n];
    for (mono, coeff) in f.terms() {
        let idx: Vec<usize> = mono.indices().collect();
        if idx.len() != 1 {
            return Err(Error::DegreeMismatch {
                expected: 1,
                got: idx.len() as u8,
            });
        }
        v[idx[0]] += coeff.eval_f64(values);
    }
    Ok(v)
}

/// Orthonormal basis of the null space of the given row constraints.
fn null_space(rows: &[Vec<f64>], n: usize) -> Vec<Vec<f64>> {
    let mut basis: Vec<Vec<f64>> = Vec::new();
    'candidate: for k in 0..n {
        let mut v = vec![0.0; n];
        v[k] = 1.0;
        // project out rows and the already-found basis
        for _ in 0..2 {
            for r in rows {
                let rn: f64 = r.iter().map(|x| x * x).sum::<f64>().sqrt();
                if rn < 1e-12 {
                    continue;
                }
                let dot: f64 = v.iter().zip(r).map(|(a, b)| a * b).sum::<f64>() / (rn * rn);
                for (vi, ri) in v.iter_mut().zip(r) {
                    *vi -= dot * ri;
                }
            }
            for b in &basis {
                let dot: f64 = v.iter().zip(b).map(|(a, b)| a * b).sum();
                for (vi, bi) in v.iter_mut().zip(b) {
                    *vi -= dot * bi;
                }
            }
        }
        let norm: f64 = v.iter().map(|x| x * x).sum::<f64>().sqrt();
        if norm < 1e-8 {
            continue 'candidate;
        }
        for vi in v.iter_mut() {
            *vi /= norm;
        }
        basis.push(v);
    }
    basis
}

fn mat_mul(a: &[Vec<f64>], b: &[Vec<f64>]) -> Vec<Vec<f64>> {
    let (n, m, p) = (a.len(), b.len(), b[0].len());
    let mut out = vec![vec![0.0; p]; n];
    for i in 0..n {
        for k in 0..m {
            let aik = a[i][k];
            if aik == 0.0 {
                continue;
            }
            for j in 0..p {
                out[i][j] += aik * b[k][j];
            }
        }
    }
    out
}

#[allow(clippy::needless_range_loop)]
fn invert(a: &[Vec<f64>]) -> Option<Vec<Vec<f64>>> {
    let n = a.len();
    let mut m: Vec<Vec<f64>> = a
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut r = row.clone();
            r.extend((0..n).map(|j| if i == j { 1.0 } else { 0.0 }));
            r
        })
        .collect();
    for col in 0..n {
        let pivot = (col..n).max_by(|&i, &j| {
            m[i][col]
                .abs()
                .partial_cmp(&m[j][col].abs())
                .unwrap_or(std::cmp::Ordering::Equal)
        })?;
        if m[pivot][col].abs() < 1e-10 {
            return None;
        }
        m.swap(col, pivot);
        let p = m[col][col];
        for x in m[col].iter_mut() {
            *x /= p;
        }
        for row in 0..n {
            if row != col {
                let f = m[row][col];
                if f != 0.0 {
                    for j in 0..2 * n {
                        m[row][j] -= f * m[col][j];
                    }
                }
            }
        }
    }
    Some(m.into_iter().map(|r| r[n..].to_vec()).collect())
}

/// Jacobi eigenvalue iteration for a symmetric matrix.
#[allow(clippy::needless_range_loop)]
fn symmetric_eigenvalues(a: &[Vec<f64>]) -> Vec<f64> {
    let n = a.len();
    let mut m: Vec<Vec<f64>> = a.to_vec();
    for _sweep in 0..64 {
        let mut off = 0.0;
        for i in 0..n {
            for j in i + 1..n {
                off += m[i][j] * m[i][j];
            }
        }
        if off < 1e-24 {
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                if m[p][q].abs() < 1e-18 {
                    continue;
                }
                let theta = (m[q][q] - m[p][p]) / (2.0 * m[p][q]);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for k in 0..n {
                    let (mkp, mkq) = (m[k][p], m[k][q]);
                    m[k][p] = c * mkp - s * mkq;
                    m[k][q] = s * mkp + c * mkq;
                }
                for k in 0..n {
                    let (mpk, mqk) = (m[p][k], m[q][k]);
                    m[p][k] = c * mpk - s * mqk;
                    m[q][k] = s * mpk + c * mqk;
                }
            }
        }
    }
    (0..n).map(|i| m[i][i]).collect()
}

/// Sample the positivity condition at the given points.
pub fn check_positivity_numeric(
    s: &Su2Structure,
    points: &[PointSample],
    tol: f64,
) -> Result<PositivityReport> {
    let frame = s.frame();
    let n = frame.dimension();
    let mut min_eig = f64::INFINITY;
    for point in points {
        let vals = &point.gen_values;
        let w1 = numeric_two_form(&s.omega1, n, vals)?;
        let w2 = numeric_two_form(&s.omega2, n, vals)?;
        let w3 = numeric_two_form(&s.omega3, n, vals)?;
        let eta = numeric_one_form(&s.eta, n, vals)?;
        let mut rows: Vec<Vec<f64>> = vec![eta];
        for theta in frame.locus() {
            rows.push(numeric_one_form(&theta, n, vals)?);
        }
        let basis = null_space(&rows, n);
        let k = basis.len();
        if k == 0 {
            continue;
        }
        // Restrict: W[i][j] = omega(b_i, b_j) = b_i^T Omega b_j.
        let restrict = |w: &Vec<Vec<f64>>| -> Vec<Vec<f64>> {
            let mut out = vec![vec![0.0; k]; k];
            for i in 0..k {
                for j in 0..k {
                    let mut acc = 0.0;
                    for (a, &ba) in basis[i].iter().enumerate() {
                        if ba == 0.0 {
                            continue;
                        }
                        for (b, &bb) in basis[j].iter().enumerate() {
                            acc += ba * w[a][b] * bb;
                        }
                    }
                    out[i][j] = acc;
                }
            }
            out
        };
        let w1r = restrict(&w1);
        let w2r = restrict(&w2);
        let w3r = restrict(&w3);
        let w2inv = invert(&w2r).ok_or(Error::DegenerateOmega2)?;
        // (MX)⌟ω₂ = X⌟ω₁  ⇔  W2ᵀ M = W1ᵀ ⇔ M = (W2ᵀ)⁻¹ W1ᵀ = -W2⁻¹ W1ᵀ... antisymmetry:
        // ω₂(MX, ·) = ω₁(X, ·): (MX)ᵀ W2 = Xᵀ W1 ⇒ Mᵀ W2 = W1 ⇒ M = (W2⁻¹)ᵀ W1ᵀ.
        let transpose = |m: &Vec<Vec<f64>>| -> Vec<Vec<f64>> {
            let r = m.len();
            let c = m[0].len();
            let mut out = vec![vec![0.0; r]; c];
            for i in 0..r {
                for j in 0..c {
                    out[j][i] = m[i][j];
                }
            }
            out
        };
        let m_map = mat_mul(&transpose(&w2inv), &transpose(&w1r));
        // Q(X) = ω₃(X, MX) = Xᵀ W3 M X; symmetrize.
        let q = mat_mul(&w3r, &m_map);
        let mut sym = vec![vec![0.0; k]; k];
        for i in 0..k {
            for j in 0..k {
                sym[i][j] = 0.5 * (q[i][j] + q[j][i]);
            }
        }
        for ev in symmetric_eigenvalues(&sym) {
            min_eig = min_eig.min(ev);
        }
    }
    Ok(PositivityReport {
        samples: points.len(),
        min_eigenvalue: min_eig,
        pass: min_eig >= -tol,
    })
}
