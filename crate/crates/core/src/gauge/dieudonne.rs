//! Gauges given by a Frobenius lattice `M^u = T ⊕ W` over `Z_p` (`q = p`),
//! and their reductions modulo `p^m`.

use serde::{Deserialize, Serialize};

use super::hodge::{hodge_from_pdiv, weighted_hodge_euler, HodgeTable};
use crate::error::{Error, Result};
use crate::padic::{FpModule, Matrix, ModuleMap, PAdicContext, Presentation, RatPolynomial};

/// Vector bundle with Hodge–Tate weights in `{0, 1}`, as a Dieudonné module
/// with its Nygaard splitting `Fil^i = p^i T ⊕ p^{i-1} W` (`i ≥ 1`).
///
/// Generators are ordered `T` first, then `W`. The gauge sits in
/// cohomological degree `degree` and carries a Breuil–Kisin twist `twist`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DieudonneGauge {
    ctx: PAdicContext,
    t_rank: usize,
    w_rank: usize,
    f: Matrix,
    degree: i64,
    twist: i64,
}

/// `Φ(x, y) = F(x) + F(y)/p`; must be an automorphism of `T ⊕ W`.
fn phi(f: &Matrix, t_rank: usize, ctx: &PAdicContext) -> Matrix {
    let mut phi = f.clone();
    let inv_p = ctx.p_pow(-1);
    for j in t_rank..f.cols() {
        for i in 0..f.rows() {
            phi.set(i, j, f.get(i, j) * &inv_p);
        }
    }
    phi
}

impl DieudonneGauge {
    pub fn new(t_rank: usize, w_rank: usize, f: Matrix, ctx: &PAdicContext) -> Result<Self> {
        if ctx.n() != 1 {
            return Err(Error::RequiresPrimeField("a Dieudonné gauge"));
        }
        let h = t_rank + w_rank;
        if f.rows() != h || f.cols() != h {
            return Err(Error::Dimension(format!("Frobenius must be {h}x{h}")));
        }
        if !f.is_p_integral(ctx) {
            return Err(Error::NotPIntegral("Frobenius matrix".into()));
        }
        let phi = phi(&f, t_rank, ctx);
        if !phi.is_p_integral(ctx) {
            return Err(Error::InvalidGauge("F(W)/p is not p-integral".into()));
        }
        if !ctx.is_unit(&phi.det()) {
            return Err(Error::InvalidGauge(
                "F(T) + F(W)/p does not span the lattice".into(),
            ));
        }
        Ok(DieudonneGauge {
            ctx: ctx.clone(),
            t_rank,
            w_rank,
            f,
            degree: 0,
            twist: 0,
        })
    }

    /// The unit object: `T = Z_p`, `F = 1`.
    pub fn unit(ctx: &PAdicContext) -> Result<Self> {
        Self::new(1, 0, Matrix::identity(1), ctx)
    }

    /// `Z_p{1}`-type object: `W = Z_p`, `F = p`.
    pub fn multiplicative(ctx: &PAdicContext) -> Result<Self> {
        Self::new(0, 1, Matrix::scalar(1, &ctx.p_pow(1)), ctx)
    }

    pub fn placed(mut self, degree: i64) -> Self {
        self.degree = degree;
        self
    }

    pub fn twisted(mut self, twist: i64) -> Self {
        self.twist += twist;
        self
    }

    pub fn ctx(&self) -> &PAdicContext {
        &self.ctx
    }

    pub fn t_rank(&self) -> usize {
        self.t_rank
    }

    pub fn w_rank(&self) -> usize {
        self.w_rank
    }

    pub fn height(&self) -> usize {
        self.t_rank + self.w_rank
    }

    pub fn frobenius(&self) -> &Matrix {
        &self.f
    }

    pub fn degree(&self) -> i64 {
        self.degree
    }

    pub fn twist(&self) -> i64 {
        self.twist
    }

    /// `det(1 - t F)` after the twist.
    pub fn zeta_factor(&self) -> RatPolynomial {
        self.f.det_one_minus_t().scale_variable(&self.ctx.q_pow(-self.twist))
    }

    /// `h^{0,0} = rank T`, `h^{1,-1} = rank W`, then twisted and placed.
    pub fn hodge_table(&self) -> HodgeTable {
        hodge_from_pdiv(self.w_rank as u64, self.t_rank as u64)
            .twist(self.twist)
            .shift(self.degree)
    }

    fn sign(&self) -> i64 {
        if self.degree.rem_euclid(2) == 0 {
            1
        } else {
            -1
        }
    }

    /// `s_r`: the identification `T ⊕ W ≅ Fil^r`, for the untwisted weight.
    fn filtration_matrix(&self, r: i64) -> Matrix {
        if r <= 0 {
            return Matrix::identity(self.height());
        }
        let mut diag = vec![self.ctx.p_pow(r); self.t_rank];
        diag.extend(vec![self.ctx.p_pow(r - 1); self.w_rank]);
        Matrix::diagonal(&diag)
    }

    /// `Fil^r → M^u` as a matrix on `T ⊕ W` coordinates of the source.
    fn syntomic_matrix(&self, r: i64) -> Matrix {
        if r >= 1 {
            phi(&self.f, self.t_rank, &self.ctx).sub(&self.filtration_matrix(r))
        } else {
            self.f
                .scale(&self.ctx.p_pow(-r))
                .sub(&Matrix::identity(self.height()))
        }
    }
}

/// Derived reduction modulo `p^m` of a Dieudonné gauge: every constituent
/// becomes `(Z/p^m)^h` and all structure maps are reduced.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TorsionGauge {
    base: DieudonneGauge,
    modulus: u32,
}

impl TorsionGauge {
    pub fn new(base: DieudonneGauge, modulus: u32) -> Result<Self> {
        if modulus == 0 {
            return Err(Error::InvalidGauge("modulus exponent must be positive".into()));
        }
        Ok(TorsionGauge { base, modulus })
    }

    pub fn base(&self) -> &DieudonneGauge {
        &self.base
    }

    pub fn modulus(&self) -> u32 {
        self.modulus
    }

    pub fn degree(&self) -> i64 {
        self.base.degree
    }

    pub fn placed(mut self, degree: i64) -> Self {
        self.base.degree = degree;
        self
    }

    pub fn twisted(mut self, twist: i64) -> Self {
        self.base.twist += twist;
        self
    }

    fn module(&self) -> Presentation {
        Presentation::torsion(self.base.height(), self.modulus, &self.base.ctx)
    }

    /// Hodge numbers of the cofiber of `p^m`: the base table plus a copy
    /// one cohomological degree lower.
    pub fn hodge_table(&self) -> HodgeTable {
        let h = self.base.hodge_table();
        h.direct_sum(&h.shift(-1))
    }
}

/// Either kind of gauge with explicit filtration data.
#[derive(Debug, Clone, Copy)]
pub enum FiltrationGauge<'a> {
    Free(&'a DieudonneGauge),
    Torsion(&'a TorsionGauge),
}

impl<'a> From<&'a DieudonneGauge> for FiltrationGauge<'a> {
    fn from(g: &'a DieudonneGauge) -> Self {
        FiltrationGauge::Free(g)
    }
}

impl<'a> From<&'a TorsionGauge> for FiltrationGauge<'a> {
    fn from(g: &'a TorsionGauge) -> Self {
        FiltrationGauge::Torsion(g)
    }
}

impl FiltrationGauge<'_> {
    fn base(&self) -> &DieudonneGauge {
        match self {
            FiltrationGauge::Free(g) => g,
            FiltrationGauge::Torsion(t) => &t.base,
        }
    }

    fn module(&self) -> Presentation {
        match self {
            FiltrationGauge::Free(g) => Presentation::free(g.height()),
            FiltrationGauge::Torsion(t) => t.module(),
        }
    }

    pub fn hodge_table(&self) -> HodgeTable {
        match self {
            FiltrationGauge::Free(g) => g.hodge_table(),
            FiltrationGauge::Torsion(t) => t.hodge_table(),
        }
    }

    fn map(&self, matrix: Matrix) -> ModuleMap {
        let m = self.module();
        ModuleMap::new(m.clone(), m, matrix, &self.base().ctx).expect("integral map of free or (Z/p^m)^h modules")
    }
}

/// `χ^l(M^u / Fil^r M)`, from Smith forms of `Fil^r → M^u`.
pub fn nygaard_characteristic<'a>(g: impl Into<FiltrationGauge<'a>>, r: i64) -> i64 {
    let g = g.into();
    let base = g.base();
    let ctx = &base.ctx;
    let inclusion = g.map(base.filtration_matrix(r + base.twist));
    // The cofiber of Fil^r → M^u has H^{-1} = kernel and H^0 = cokernel.
    let coker = inclusion.cokernel_module(ctx).length().expect("finite");
    let ker = inclusion.kernel_module(ctx).length().expect("finite");
    base.sign() * (coker as i64 - ker as i64)
}

/// `p^{Nygaard} = q^{n χ(M, r)}` against the gauge's Hodge table.
pub fn check_niceob<'a>(g: impl Into<FiltrationGauge<'a>>, r: i64) -> bool {
    let g = g.into();
    check_niceob_against(g, &g.hodge_table(), r)
}

pub fn check_niceob_against<'a>(g: impl Into<FiltrationGauge<'a>>, table: &HodgeTable, r: i64) -> bool {
    let g = g.into();
    let n = g.base().ctx.n() as i64;
    nygaard_characteristic(g, r) == n * weighted_hodge_euler(table, r)
}

/// Syntomic cohomology `H^0, H^1` of `Fil^r M → M^u`, in the gauge's own
/// degrees `degree` and `degree + 1`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SyntomicCohomology {
    pub degree: i64,
    pub h0: FpModule,
    pub h1: FpModule,
}

impl SyntomicCohomology {
    /// `χ^l` of the complex, with the placement sign.
    pub fn length_characteristic(&self) -> Result<i64> {
        let sign = if self.degree.rem_euclid(2) == 0 { 1 } else { -1 };
        Ok(sign * (self.h0.length()? as i64 - self.h1.length()? as i64))
    }

    pub fn ranks(&self) -> [(i64, usize); 2] {
        [(self.degree, self.h0.free_rank), (self.degree + 1, self.h1.free_rank)]
    }
}

pub fn syntomic_cohomology<'a>(g: impl Into<FiltrationGauge<'a>>, r: i64) -> Result<SyntomicCohomology> {
    let g = g.into();
    let base = g.base();
    if base.ctx.n() != 1 {
        return Err(Error::RequiresPrimeField("direct syntomic route"));
    }
    let map = g.map(base.syntomic_matrix(r + base.twist));
    Ok(SyntomicCohomology {
        degree: base.degree,
        h0: map.kernel_module(&base.ctx),
        h1: map.cokernel_module(&base.ctx),
    })
}

/// Ranks of syntomic cohomology and the solution of
/// `rank H^i = u_{i-1} + u_i` by nonnegative integers, if any.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DescentReport {
    pub ranks: Vec<(i64, usize)>,
    pub alternating_sum: i64,
    pub u: Option<Vec<(i64, u64)>>,
}

impl DescentReport {
    pub fn holds(&self) -> bool {
        self.alternating_sum == 0 && self.u.is_some()
    }
}

pub fn descent_rank_checks<'a>(g: impl Into<FiltrationGauge<'a>>, r: i64) -> Result<DescentReport> {
    let coh = syntomic_cohomology(g, r)?;
    Ok(descent_from_ranks(coh.ranks().to_vec()))
}

pub(crate) fn descent_from_ranks(ranks: Vec<(i64, usize)>) -> DescentReport {
    let alternating_sum = ranks
        .iter()
        .map(|&(i, k)| if i.rem_euclid(2) == 0 { k as i64 } else { -(k as i64) })
        .sum();
    let mut u = Vec::new();
    let mut prev = 0i64;
    let mut ok = true;
    for &(i, k) in &ranks {
        let next = k as i64 - prev;
        if next < 0 {
            ok = false;
            break;
        }
        u.push((i, next as u64));
        prev = next;
    }
    let u = (ok && prev == 0).then(|| {
        u.pop();
        u
    });
    DescentReport {
        ranks,
        alternating_sum,
        u,
    }
}

/// `Σ (-1)^i i rank H^i_syn`, or `None` when `p^r` is not a semisimple
/// eigenvalue of `F` and the rank formula does not apply.
pub fn order_of_vanishing_syn(g: &DieudonneGauge, r: i64) -> Result<Option<i64>> {
    let weight = r + g.twist;
    let a = g.f.sub(&Matrix::scalar(g.height(), &g.ctx.p_pow(weight)));
    let h = g.height();
    if h - a.rank() != h - a.mul(&a).rank() {
        return Ok(None);
    }
    let coh = syntomic_cohomology(g, r)?;
    let value = coh
        .ranks()
        .iter()
        .map(|&(i, k)| {
            let sign = if i.rem_euclid(2) == 0 { 1 } else { -1 };
            sign * i * k as i64
        })
        .sum();
    Ok(Some(value))
}
