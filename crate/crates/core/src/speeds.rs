//! Soliton speed systems for a truncated family of densities.
//!
//! Vectors are indexed from zero, entry `k - 1` belonging to size `k`.
//!
//! - `w_k = 1 + sum_{m>k} 2 (m - k) rho_m`, `alpha_k = rho_k / w_k`
//! - `s_k = k + sum_{m<k} 2 (k - m) s_m alpha_m`, `v_k = s_k / w_k`
//! - `h_k = k + sum_{m>k} 2 (m - k) (h_m - h_k) rho_m`
//! - `w_0 = 1 + sum 2 m rho_m`, `v_0 = sum 2 m rho_m h_m`, `h_0 = v_0 / w_0`

use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};

/// Densities per excursion (`rho`) or per slot (`alpha`).
#[derive(Clone, Debug, PartialEq)]
pub enum SpeedInput {
    Rho(Vec<f64>),
    Alpha(Vec<f64>),
}

#[derive(Clone, Debug, PartialEq)]
pub struct SpeedTable {
    pub rho: Vec<f64>,
    pub alpha: Vec<f64>,
    pub w: Vec<f64>,
    pub s: Vec<f64>,
    pub v: Vec<f64>,
    pub h: Vec<f64>,
    pub w0: f64,
    pub v0: f64,
    pub h0: f64,
}

impl SpeedTable {
    /// Truncation level.
    pub fn len(&self) -> usize {
        self.rho.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rho.is_empty()
    }

    /// `rho_bar_k = rho_k / w_0`, solitons per site.
    pub fn rho_bar(&self) -> Vec<f64> {
        self.rho.iter().map(|r| r / self.w0).collect()
    }

    /// Balls per site, `sum k rho_k / w_0`.
    pub fn ball_density(&self) -> f64 {
        weighted(&self.rho, |k| k as f64) / self.w0
    }
}

fn check(values: &[f64]) -> Result<()> {
    for (index, &value) in values.iter().enumerate() {
        if !value.is_finite() || value < 0.0 {
            return Err(Error::InvalidInput { index, value });
        }
    }
    Ok(())
}

fn weighted(x: &[f64], f: impl Fn(usize) -> f64) -> f64 {
    x.iter().enumerate().map(|(i, &r)| f(i + 1) * r).sum()
}

/// `w_k` for `k = 1..=K` from `rho`.
fn slot_means(rho: &[f64]) -> Vec<f64> {
    let n = rho.len();
    (1..=n)
        .map(|k| {
            1.0 + (k + 1..=n)
                .map(|m| 2.0 * (m - k) as f64 * rho[m - 1])
                .sum::<f64>()
        })
        .collect()
}

pub fn solve_explicit(input: &SpeedInput) -> Result<SpeedTable> {
    let (rho, alpha, w) = match input {
        SpeedInput::Rho(rho) => {
            check(rho)?;
            let w = slot_means(rho);
            let alpha = rho.iter().zip(&w).map(|(r, w)| r / w).collect();
            (rho.clone(), alpha, w)
        }
        SpeedInput::Alpha(alpha) => {
            check(alpha)?;
            let n = alpha.len();
            let mut w = vec![1.0; n];
            for k in (1..=n).rev() {
                w[k - 1] = 1.0
                    + (k + 1..=n)
                        .map(|m| 2.0 * (m - k) as f64 * w[m - 1] * alpha[m - 1])
                        .sum::<f64>();
            }
            let rho = alpha.iter().zip(&w).map(|(a, w)| a * w).collect();
            (rho, alpha.clone(), w)
        }
    };
    let n = rho.len();
    let mut s = vec![0.0; n];
    for k in 1..=n {
        s[k - 1] = k as f64
            + (1..k)
                .map(|m| 2.0 * (k - m) as f64 * s[m - 1] * alpha[m - 1])
                .sum::<f64>();
    }
    let v = s.iter().zip(&w).map(|(s, w)| s / w).collect();
    let vert = vertical(&rho, &w);
    Ok(SpeedTable {
        rho,
        alpha,
        w,
        s,
        v,
        h: vert.h,
        w0: vert.w0,
        v0: vert.v0,
        h0: vert.h0,
    })
}

pub fn solve_rho(rho: &[f64]) -> Result<SpeedTable> {
    solve_explicit(&SpeedInput::Rho(rho.to_vec()))
}

pub fn solve_alpha(alpha: &[f64]) -> Result<SpeedTable> {
    solve_explicit(&SpeedInput::Alpha(alpha.to_vec()))
}

/// Solves `v_k = k + sum_{m<k} 2 m rb_m (v_k - v_m) - sum_{m>k} 2 k rb_m (v_m - v_k)`
/// as a dense linear system.
pub fn solve_interaction(rho_bar: &[f64]) -> Result<Vec<f64>> {
    check(rho_bar)?;
    let n = rho_bar.len();
    let mut a = vec![vec![0.0f64; n]; n];
    let mut b = vec![0.0f64; n];
    for k in 1..=n {
        let row = &mut a[k - 1];
        let mut diag = 1.0;
        for m in 1..=n {
            let r = rho_bar[m - 1];
            if m < k {
                row[m - 1] = 2.0 * m as f64 * r;
                diag -= 2.0 * m as f64 * r;
            } else if m > k {
                row[m - 1] = 2.0 * k as f64 * r;
                diag -= 2.0 * k as f64 * r;
            }
        }
        row[k - 1] = diag;
        b[k - 1] = k as f64;
    }
    lu_solve(a, b)
}

fn lu_solve(mut a: Vec<Vec<f64>>, mut b: Vec<f64>) -> Result<Vec<f64>> {
    let n = b.len();
    let scale = a
        .iter()
        .flatten()
        .fold(0.0f64, |m, x| m.max(x.abs()))
        .max(1.0);
    for col in 0..n {
        let piv = (col..n)
            .max_by(|&i, &j| a[i][col].abs().total_cmp(&a[j][col].abs()))
            .unwrap();
        let pivot = a[piv][col];
        if pivot.abs() <= 1e-13 * scale {
            return Err(Error::Singular { column: col, pivot });
        }
        a.swap(col, piv);
        b.swap(col, piv);
        let (top, rest) = a.split_at_mut(col + 1);
        let pivot_row = &top[col];
        for (r, row) in rest.iter_mut().enumerate() {
            let f = row[col] / pivot_row[col];
            if f != 0.0 {
                for (x, p) in row[col..].iter_mut().zip(&pivot_row[col..]) {
                    *x -= f * p;
                }
                b[col + 1 + r] -= f * b[col];
            }
        }
    }
    let mut x = vec![0.0; n];
    for r in (0..n).rev() {
        let tail: f64 = (r + 1..n).map(|c| a[r][c] * x[c]).sum();
        x[r] = (b[r] - tail) / a[r][r];
    }
    Ok(x)
}

/// Speeds measured in records.
#[derive(Clone, Debug, PartialEq)]
pub struct Vertical {
    pub h: Vec<f64>,
    pub w0: f64,
    pub v0: f64,
    pub h0: f64,
    /// `v_k = h_k w_0 - v_0`.
    pub v: Vec<f64>,
}

fn vertical(rho: &[f64], w: &[f64]) -> Vertical {
    let n = rho.len();
    let mut h = vec![0.0; n];
    for k in (1..=n).rev() {
        let num = k as f64
            + (k + 1..=n)
                .map(|m| 2.0 * (m - k) as f64 * h[m - 1] * rho[m - 1])
                .sum::<f64>();
        h[k - 1] = num / w[k - 1];
    }
    let w0 = 1.0 + weighted(rho, |m| 2.0 * m as f64);
    let v0: f64 = rho
        .iter()
        .zip(&h)
        .enumerate()
        .map(|(i, (r, h))| 2.0 * (i + 1) as f64 * r * h)
        .sum();
    let v = h.iter().map(|h| h * w0 - v0).collect();
    Vertical {
        h,
        w0,
        v0,
        h0: v0 / w0,
        v,
    }
}

pub fn solve_vertical(rho: &[f64]) -> Result<Vertical> {
    check(rho)?;
    Ok(vertical(rho, &slot_means(rho)))
}

/// Largest residual of the interaction system at `v`.
pub fn interaction_residual(rho_bar: &[f64], v: &[f64]) -> f64 {
    let n = v.len();
    (1..=n)
        .map(|k| {
            let mut rhs = k as f64;
            for m in 1..=n {
                let r = rho_bar[m - 1];
                if m < k {
                    rhs += 2.0 * m as f64 * r * (v[k - 1] - v[m - 1]);
                } else if m > k {
                    rhs -= 2.0 * k as f64 * r * (v[m - 1] - v[k - 1]);
                }
            }
            libm::fabs(v[k - 1] - rhs)
        })
        .fold(0.0, f64::max)
}

/// Largest residual among `v_k = h_k w_0 - v_0`, `v_0 = sum 2 m rho_m v_m`,
/// `rho_k = alpha_k w_k` and the vertical recursion itself.
pub fn table_residual(t: &SpeedTable) -> f64 {
    let n = t.len();
    let mut r = 0.0f64;
    for k in 1..=n {
        r = r.max(libm::fabs(t.h[k - 1] * t.w0 - t.v0 - t.v[k - 1]));
        r = r.max(libm::fabs(t.alpha[k - 1] * t.w[k - 1] - t.rho[k - 1]));
        let hk = k as f64
            + (k + 1..=n)
                .map(|m| 2.0 * (m - k) as f64 * (t.h[m - 1] - t.h[k - 1]) * t.rho[m - 1])
                .sum::<f64>();
        r = r.max(libm::fabs(hk - t.h[k - 1]));
    }
    let v0 = weighted(&t.rho, |m| 2.0 * m as f64 * t.v[m - 1]);
    r.max(libm::fabs(v0 - t.v0))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: f64, b: f64) -> bool {
        libm::fabs(a - b) < 1e-12
    }

    #[test]
    fn no_solitons_means_free_speeds() {
        let t = solve_rho(&[0.0; 4]).unwrap();
        for k in 1..=4 {
            assert!(close(t.w[k - 1], 1.0));
            assert!(close(t.s[k - 1], k as f64));
            assert!(close(t.v[k - 1], k as f64));
        }
        assert!(close(t.w0, 1.0));
    }

    #[test]
    fn single_species_fixture() {
        let t = solve_rho(&[0.0, 0.0, 0.1]).unwrap();
        let expect_w = [1.4, 1.2, 1.0];
        let expect_v = [5.0 / 7.0, 5.0 / 3.0, 3.0];
        let expect_h = [11.0 / 7.0, 13.0 / 6.0, 3.0];
        for i in 0..3 {
            assert!(close(t.w[i], expect_w[i]));
            assert!(close(t.v[i], expect_v[i]));
            assert!(close(t.h[i], expect_h[i]));
        }
        assert!(close(t.w0, 1.6));
        assert!(close(t.v0, 1.8));
        assert!(close(t.h0, 1.125));
        let vi = solve_interaction(&t.rho_bar()).unwrap();
        for i in 0..3 {
            assert!(close(vi[i], expect_v[i]));
        }
    }

    #[test]
    fn alpha_input_inverts_rho_input() {
        let a = solve_rho(&[0.006, 0.005, 0.1, 0.003]).unwrap();
        let b = solve_alpha(&a.alpha).unwrap();
        for i in 0..4 {
            assert!(close(a.rho[i], b.rho[i]));
            assert!(close(a.v[i], b.v[i]));
        }
        assert!(table_residual(&a) < 1e-12);
    }

    #[test]
    fn single_species_vertical() {
        let v = solve_vertical(&[0.0, 0.2]).unwrap();
        assert!(close(v.h[1], 2.0));
        assert!(close(v.v0, 2.0 * 4.0 * 0.2));
        assert!(close(v.v[1], 2.0));
    }

    #[test]
    fn negative_input_is_rejected() {
        assert_eq!(
            solve_rho(&[0.1, -0.2]),
            Err(Error::InvalidInput {
                index: 1,
                value: -0.2
            })
        );
        assert!(solve_vertical(&[f64::NAN]).is_err());
    }

    #[test]
    fn singular_interaction_system() {
        assert!(matches!(
            solve_interaction(&[0.0, 0.5]),
            Err(Error::Singular { .. })
        ));
    }
}
