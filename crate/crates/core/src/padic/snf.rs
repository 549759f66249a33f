use num_rational::BigRational;
use num_traits::Zero;

use super::{valuation, Matrix, PAdicContext};
use crate::error::{Error, Result};

/// Smith form over the local ring `Z_(p)`: `U A V = D`.
///
/// `D` carries `p^{d_0}, ..., p^{d_{rank-1}}` on its diagonal (nondecreasing)
/// and zeros elsewhere. `U`, `U^{-1}` and `V` are p-integral and invertible
/// over `Z_(p)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PLocalSnf {
    pub diagonal: Vec<u32>,
    pub kernel_rank: usize,
    pub u: Matrix,
    pub u_inv: Matrix,
    pub v: Matrix,
    pub d: Matrix,
}

impl PLocalSnf {
    pub fn rank(&self) -> usize {
        self.diagonal.len()
    }
}

/// Computes the p-local Smith normal form of a p-integral matrix.
///
/// Each step pivots on an entry of minimal valuation in the remaining block,
/// the first such in row-major order, and scales it to exactly `p^d`.
pub fn p_local_snf(a: &Matrix, ctx: &PAdicContext) -> Result<PLocalSnf> {
    if let Some(bad) = a.entries().iter().find(|x| !ctx.is_p_integral(x)) {
        return Err(Error::NotPIntegral(bad.to_string()));
    }
    let (m, n) = (a.rows(), a.cols());
    let mut d = a.clone();
    let mut u = Matrix::identity(m);
    let mut u_inv = Matrix::identity(m);
    let mut v = Matrix::identity(n);
    let mut diagonal = Vec::new();

    for k in 0..m.min(n) {
        let mut best: Option<(i64, usize, usize)> = None;
        for i in k..m {
            for j in k..n {
                let x = d.get(i, j);
                if x.is_zero() {
                    continue;
                }
                let val = valuation(x, ctx)?;
                if best.is_none_or(|(bv, _, _)| val < bv) {
                    best = Some((val, i, j));
                }
            }
        }
        let Some((val, pi, pj)) = best else { break };

        d.swap_rows(k, pi);
        u.swap_rows(k, pi);
        u_inv.swap_cols(k, pi);
        d.swap_cols(k, pj);
        v.swap_cols(k, pj);

        let p_d = ctx.p_pow(val);
        let unit = d.get(k, k) / &p_d;
        let unit_inv = unit.recip();
        d.scale_row(k, &unit_inv);
        u.scale_row(k, &unit_inv);
        u_inv.scale_col(k, &unit);

        for i in k + 1..m {
            if d.get(i, k).is_zero() {
                continue;
            }
            let f: BigRational = d.get(i, k) / &p_d;
            let neg = -f.clone();
            d.add_row_multiple(i, k, &neg);
            u.add_row_multiple(i, k, &neg);
            u_inv.add_col_multiple(k, i, &f);
        }
        for j in k + 1..n {
            if d.get(k, j).is_zero() {
                continue;
            }
            let g: BigRational = -(d.get(k, j) / &p_d);
            d.add_col_multiple(j, k, &g);
            v.add_col_multiple(j, k, &g);
        }
        diagonal.push(val as u32);
    }

    let kernel_rank = n - diagonal.len();
    Ok(PLocalSnf {
        diagonal,
        kernel_rank,
        u,
        u_inv,
        v,
        d,
    })
}

/// A finitely generated `Z_(p)`-submodule of `Q^ambient`, with a basis.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Lattice {
    ambient: usize,
    /// Basis vectors as columns.
    basis: Matrix,
    /// `U` from the Smith form of the generators; `U b_i = p^{d_i} e_i`.
    u: Matrix,
    exponents: Vec<u32>,
}

impl Lattice {
    /// The `Z_(p)`-span of the columns of `gens`.
    pub fn span(gens: &Matrix, ctx: &PAdicContext) -> Result<Lattice> {
        let snf = p_local_snf(gens, ctx)?;
        let rank = snf.rank();
        let cols: Vec<Vec<BigRational>> = (0..rank)
            .map(|i| {
                let scale = ctx.p_pow(snf.diagonal[i] as i64);
                snf.u_inv.col(i).into_iter().map(|x| x * &scale).collect()
            })
            .collect();
        Ok(Lattice {
            ambient: gens.rows(),
            basis: Matrix::from_cols(gens.rows(), &cols),
            u: snf.u,
            exponents: snf.diagonal,
        })
    }

    pub fn rank(&self) -> usize {
        self.exponents.len()
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }

    pub fn basis(&self) -> &Matrix {
        &self.basis
    }

    /// Coordinates of `w` in the basis, if `w` lies in the rational span.
    /// The coordinates are p-integral exactly when `w` is in the lattice.
    pub fn rational_coords(&self, w: &[BigRational], ctx: &PAdicContext) -> Option<Vec<BigRational>> {
        let y = self.u.mul_vec(w);
        if y[self.rank()..].iter().any(|x| !x.is_zero()) {
            return None;
        }
        Some(
            self.exponents
                .iter()
                .zip(&y)
                .map(|(&e, yi)| yi * ctx.p_pow(-(e as i64)))
                .collect(),
        )
    }

    pub fn coords(&self, w: &[BigRational], ctx: &PAdicContext) -> Option<Vec<BigRational>> {
        self.rational_coords(w, ctx)
            .filter(|c| c.iter().all(|x| ctx.is_p_integral(x)))
    }

    pub fn contains(&self, w: &[BigRational], ctx: &PAdicContext) -> bool {
        self.coords(w, ctx).is_some()
    }

    /// Coordinates of every column of `m`; `None` if some column is outside.
    pub fn coords_matrix(&self, m: &Matrix, ctx: &PAdicContext) -> Option<Matrix> {
        let cols = (0..m.cols())
            .map(|j| self.coords(&m.col(j), ctx))
            .collect::<Option<Vec<_>>>()?;
        Some(Matrix::from_cols(self.rank(), &cols))
    }
}
