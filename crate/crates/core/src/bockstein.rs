//! Bockstein complexes `[M^θ → M_θ]` and their length characteristics.
//!
//! Complexes are never replaced by a derived fiber: each cohomology module is
//! computed with its induced endomorphism and the characteristics are summed
//! with alternating signs.

use num_rational::BigRational;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::padic::{valuation, FpModule, Matrix, ModuleMap, PAdicContext, Presentation};

/// A presented module with an endomorphism.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EndoModule {
    theta: ModuleMap,
}

impl EndoModule {
    pub fn new(module: Presentation, theta: Matrix, ctx: &PAdicContext) -> Result<Self> {
        let theta = ModuleMap::new(module.clone(), module, theta, ctx)?;
        Ok(EndoModule { theta })
    }

    /// `(Z_p^n, theta)`.
    pub fn free(theta: Matrix, ctx: &PAdicContext) -> Result<Self> {
        if !theta.is_square() {
            return Err(Error::Dimension("endomorphism must be square".into()));
        }
        Self::new(Presentation::free(theta.rows()), theta, ctx)
    }

    pub fn from_map(theta: ModuleMap) -> Result<Self> {
        if theta.source() != theta.target() {
            return Err(Error::Dimension("not an endomorphism".into()));
        }
        Ok(EndoModule { theta })
    }

    pub fn module(&self) -> &Presentation {
        self.theta.source()
    }

    pub fn theta(&self) -> &ModuleMap {
        &self.theta
    }

    pub fn structure(&self, ctx: &PAdicContext) -> FpModule {
        self.module().structure(ctx)
    }

    pub fn pow(&self, k: usize) -> EndoModule {
        EndoModule {
            theta: self.theta.pow(k),
        }
    }

    /// `θ` on `M / torsion ⊗ Q`.
    pub fn rational_free_part(&self, ctx: &PAdicContext) -> Matrix {
        self.module().free_quotient_endo(self.theta.matrix(), ctx)
    }
}

/// `Bock(M, θ)`: kernel in degree 0, cokernel in degree 1.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BocksteinData {
    pub kernel: FpModule,
    pub cokernel: FpModule,
    /// `M^θ ↪ M ↠ M_θ` on presentations.
    pub connecting: ModuleMap,
}

impl BocksteinData {
    /// `len ker - len coker` of the connecting map, when both are finite.
    pub fn characteristic(&self, ctx: &PAdicContext) -> Option<i64> {
        let ker = self.connecting.kernel_module(ctx);
        let coker = self.connecting.cokernel_module(ctx);
        match (ker.length(), coker.length()) {
            (Ok(a), Ok(b)) => Some(a as i64 - b as i64),
            _ => None,
        }
    }
}

pub fn bockstein_complex(em: &EndoModule, ctx: &PAdicContext) -> BocksteinData {
    let theta = em.theta();
    let ker = theta.kernel(ctx);
    let coker = theta.cokernel();
    let connecting = ModuleMap::new(ker.presentation.clone(), coker.clone(), ker.inclusion, ctx)
        .expect("kernel inclusion descends to the cokernel");
    BocksteinData {
        kernel: ker.presentation.structure(ctx),
        cokernel: coker.structure(ctx),
        connecting,
    }
}

/// `χ^l(Bock(M, θ))`, or `None` when it does not exist.
pub fn bockstein_char(em: &EndoModule, ctx: &PAdicContext) -> Option<i64> {
    bockstein_complex(em, ctx).characteristic(ctx)
}

/// Bounded complex of presented modules with a compatible endomorphism.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EndoComplex {
    start: i64,
    modules: Vec<Presentation>,
    differentials: Vec<ModuleMap>,
    thetas: Vec<ModuleMap>,
}

impl EndoComplex {
    /// `differentials[k]` goes from `modules[k]` to `modules[k + 1]`;
    /// `thetas[k]` acts on `modules[k]`. Degrees start at `start`.
    pub fn new(
        start: i64,
        modules: Vec<Presentation>,
        differentials: Vec<Matrix>,
        thetas: Vec<Matrix>,
        ctx: &PAdicContext,
    ) -> Result<Self> {
        if modules.is_empty() {
            return Err(Error::InvalidComplex("no modules".into()));
        }
        if differentials.len() + 1 != modules.len() || thetas.len() != modules.len() {
            return Err(Error::InvalidComplex(format!(
                "{} modules need {} differentials and {} endomorphisms",
                modules.len(),
                modules.len() - 1,
                modules.len()
            )));
        }
        let differentials = differentials
            .into_iter()
            .enumerate()
            .map(|(k, d)| ModuleMap::new(modules[k].clone(), modules[k + 1].clone(), d, ctx))
            .collect::<Result<Vec<_>>>()?;
        let thetas = thetas
            .into_iter()
            .zip(&modules)
            .map(|(t, m)| ModuleMap::new(m.clone(), m.clone(), t, ctx))
            .collect::<Result<Vec<_>>>()?;
        for (k, pair) in differentials.windows(2).enumerate() {
            if !pair[0].then(&pair[1])?.is_zero(ctx) {
                return Err(Error::InvalidComplex(format!("d∘d ≠ 0 at degree {}", start + k as i64)));
            }
        }
        for (k, d) in differentials.iter().enumerate() {
            let lhs = d.then(&thetas[k + 1])?;
            let rhs = thetas[k].then(d)?;
            let diff = ModuleMap::new(
                lhs.source().clone(),
                lhs.target().clone(),
                lhs.matrix().sub(rhs.matrix()),
                ctx,
            )?;
            if !diff.is_zero(ctx) {
                return Err(Error::InvalidComplex(format!(
                    "θ does not commute with d at degree {}",
                    start + k as i64
                )));
            }
        }
        Ok(EndoComplex {
            start,
            modules,
            differentials,
            thetas,
        })
    }

    /// `M` placed in a single degree.
    pub fn concentrated(em: &EndoModule, degree: i64) -> Self {
        EndoComplex {
            start: degree,
            modules: vec![em.module().clone()],
            differentials: Vec::new(),
            thetas: vec![em.theta().clone()],
        }
    }

    pub fn degrees(&self) -> std::ops::Range<i64> {
        self.start..self.start + self.modules.len() as i64
    }

    /// `θ^k` in every degree.
    pub fn pow(&self, k: usize) -> EndoComplex {
        EndoComplex {
            start: self.start,
            modules: self.modules.clone(),
            differentials: self.differentials.clone(),
            thetas: self.thetas.iter().map(|t| t.pow(k)).collect(),
        }
    }

    /// `(degree, H^degree with induced θ)` for every degree.
    pub fn cohomology(&self, ctx: &PAdicContext) -> Vec<(i64, EndoModule)> {
        let zero = Presentation::free(0);
        (0..self.modules.len())
            .map(|k| {
                let outgoing = match self.differentials.get(k) {
                    Some(d) => d.clone(),
                    None => ModuleMap::zero(&self.modules[k], &zero),
                };
                let ker = outgoing.kernel(ctx);
                let mut relations = ker.presentation.relations().clone();
                if k > 0 {
                    let incoming = ker
                        .lattice
                        .coords_matrix(self.differentials[k - 1].matrix(), ctx)
                        .expect("image of d lies in the kernel of d");
                    relations = relations.hstack(&incoming);
                }
                let h = Presentation::new(ker.lattice.rank(), relations, ctx)
                    .expect("lattice coordinates are p-integral");
                let theta_b = self.thetas[k].matrix().mul(&ker.inclusion);
                let theta = ker
                    .lattice
                    .coords_matrix(&theta_b, ctx)
                    .expect("θ preserves cycles");
                let em = EndoModule::new(h, theta, ctx).expect("θ preserves boundaries");
                (self.start + k as i64, em)
            })
            .collect()
    }
}

fn sign(degree: i64) -> i64 {
    if degree.rem_euclid(2) == 0 {
        1
    } else {
        -1
    }
}

/// `Σ (-1)^i χ^l(Bock(H^i, θ))`, defined iff every term is.
pub fn bockstein_char_complex(ec: &EndoComplex, ctx: &PAdicContext) -> Option<i64> {
    ec.cohomology(ctx)
        .iter()
        .map(|(i, h)| bockstein_char(h, ctx).map(|c| sign(*i) * c))
        .sum()
}

/// The stable characteristic together with the power of `θ` it was read from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct StableBockstein {
    pub value: i64,
    pub index: usize,
}

/// Smallest `k ≥ 1` with `rank ker θ_Q^k = rank ker θ_Q^{k+1}`.
pub fn stabilization_index(em: &EndoModule, ctx: &PAdicContext) -> usize {
    let q = em.rational_free_part(ctx);
    let dim = q.rows();
    let mut power = q.clone();
    let mut rank = power.rank();
    for k in 1..=dim + 1 {
        let next = power.mul(&q);
        let next_rank = next.rank();
        if next_rank == rank {
            return k;
        }
        power = next;
        rank = next_rank;
    }
    panic!("kernel filtration of a {dim}-dimensional endomorphism did not stabilize");
}

pub fn stable_bockstein_char(em: &EndoModule, ctx: &PAdicContext) -> StableBockstein {
    stable_bockstein_char_complex(&EndoComplex::concentrated(em, 0), ctx)
}

pub fn stable_bockstein_char_complex(ec: &EndoComplex, ctx: &PAdicContext) -> StableBockstein {
    let h = ec.cohomology(ctx);
    let k = h
        .iter()
        .map(|(_, m)| stabilization_index(m, ctx))
        .max()
        .unwrap_or(1);
    let mut total = 0;
    for (i, m) in &h {
        let c = bockstein_char(&m.pow(k), ctx)
            .expect("Bockstein characteristic exists past the stabilization index");
        assert!(
            c % k as i64 == 0,
            "χ^l(Bock(θ^{k})) = {c} is not divisible by {k}"
        );
        total += sign(*i) * (c / k as i64);
    }
    StableBockstein { value: total, index: k }
}

/// `-v_p` of the product of the nonzero eigenvalues of `θ` on the free
/// quotient; `0` if there are none.
pub fn uk_valuation(em: &EndoModule, ctx: &PAdicContext) -> i64 {
    nonzero_eigenvalue_valuation(&em.rational_free_part(ctx), ctx)
}

/// `-v_p(g(0))` where `det(t - A) = t^z g(t)`, `g(0) ≠ 0`.
pub fn nonzero_eigenvalue_valuation(a: &Matrix, ctx: &PAdicContext) -> i64 {
    let (_, g) = a.charpoly().strip_t_power();
    let g0: BigRational = g.constant_term();
    -valuation(&g0, ctx).expect("stripped polynomial has nonzero constant term")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ctx(p: u64) -> PAdicContext {
        PAdicContext::prime_field(p).unwrap()
    }

    fn free(rows: &[Vec<i64>], c: &PAdicContext) -> EndoModule {
        EndoModule::free(Matrix::from_i64(rows), c).unwrap()
    }

    #[test]
    fn multiplication_by_p() {
        let c = ctx(5);
        let em = free(&[vec![5]], &c);
        let b = bockstein_complex(&em, &c);
        assert_eq!(b.kernel, FpModule::zero());
        assert_eq!(b.cokernel, FpModule::new(0, vec![1]));
        assert!(b.connecting.is_zero(&c));
        assert_eq!(bockstein_char(&em, &c), Some(-1));
        assert_eq!(stable_bockstein_char(&em, &c).value, -1);
        assert_eq!(uk_valuation(&em, &c), -1);
    }

    #[test]
    fn nilpotent_counterexample() {
        let c = ctx(3);
        let em = free(&[vec![0, 1], vec![0, 0]], &c);
        let b = bockstein_complex(&em, &c);
        assert_eq!(b.kernel, FpModule::free(1));
        assert_eq!(b.cokernel, FpModule::free(1));
        assert!(b.connecting.is_zero(&c));
        assert_eq!(bockstein_char(&em, &c), None);
        let s = stable_bockstein_char(&em, &c);
        assert_eq!(s, StableBockstein { value: 0, index: 2 });
        // θ^2 = 0: connecting map is the identity of Z_p^2.
        let b2 = bockstein_complex(&em.pow(2), &c);
        assert_eq!(b2.kernel, FpModule::free(2));
        assert_eq!(b2.connecting.kernel_module(&c), FpModule::zero());
        assert_eq!(b2.connecting.cokernel_module(&c), FpModule::zero());
    }

    #[test]
    fn torsion_module_has_zero_characteristic() {
        let c = ctx(2);
        let m = Presentation::torsion(1, 2, &c);
        let em = EndoModule::new(m, Matrix::from_i64(&[vec![2]]), &c).unwrap();
        let b = bockstein_complex(&em, &c);
        assert_eq!(b.kernel, FpModule::new(0, vec![1]));
        assert_eq!(b.cokernel, FpModule::new(0, vec![1]));
        assert!(b.connecting.is_zero(&c));
        assert_eq!(bockstein_char(&em, &c), Some(0));
        let m = FpModule::new(0, vec![1, 3]).presentation(&c);
        let em = EndoModule::new(m, Matrix::from_i64(&[vec![1, 0], vec![4, 6]]), &c).unwrap();
        assert_eq!(bockstein_char(&em, &c), Some(0));
    }

    #[test]
    fn uk_examples() {
        let c = ctx(5);
        assert_eq!(uk_valuation(&free(&[vec![5, 0], vec![0, 3]], &c), &c), -1);
        assert_eq!(uk_valuation(&free(&[vec![0, 0], vec![0, 0]], &c), &c), 0);
        // companion of t^2 - t + p
        assert_eq!(uk_valuation(&free(&[vec![0, -5], vec![1, 1]], &c), &c), -1);
        assert_eq!(stable_bockstein_char(&free(&[vec![5, 0], vec![0, 3]], &c), &c).value, -1);
    }

    #[test]
    fn complex_examples() {
        let c = ctx(3);
        let em = free(&[vec![3, 1], vec![0, 2]], &c);
        let single = EndoComplex::concentrated(&em, 0);
        assert_eq!(bockstein_char_complex(&single, &c), bockstein_char(&em, &c));

        // identity differential: acyclic
        let z = Presentation::free(1);
        let acyclic = EndoComplex::new(
            0,
            vec![z.clone(), z.clone()],
            vec![Matrix::from_i64(&[vec![1]])],
            vec![Matrix::from_i64(&[vec![7]]), Matrix::from_i64(&[vec![7]])],
            &c,
        )
        .unwrap();
        assert_eq!(bockstein_char_complex(&acyclic, &c), Some(0));

        // 0 -> Z_p --p--> Z_p -> 0, θ = p: H^0 = 0, H^1 = Z/p.
        let ec = EndoComplex::new(
            0,
            vec![z.clone(), z],
            vec![Matrix::from_i64(&[vec![3]])],
            vec![Matrix::from_i64(&[vec![3]]), Matrix::from_i64(&[vec![3]])],
            &c,
        )
        .unwrap();
        let h = ec.cohomology(&c);
        assert_eq!(h[0].1.structure(&c), FpModule::zero());
        assert_eq!(h[1].1.structure(&c), FpModule::new(0, vec![1]));
        assert_eq!(bockstein_char_complex(&ec, &c), Some(0));
        assert_eq!(stable_bockstein_char_complex(&ec, &c).value, 0);
    }

    #[test]
    fn rejects_bad_complexes() {
        let c = ctx(3);
        let z = Presentation::free(1);
        let err = EndoComplex::new(
            0,
            vec![z.clone(), z.clone(), z.clone()],
            vec![Matrix::from_i64(&[vec![1]]), Matrix::from_i64(&[vec![1]])],
            vec![Matrix::from_i64(&[vec![1]]); 3],
            &c,
        );
        assert!(matches!(err, Err(Error::InvalidComplex(_))));
        let err = EndoComplex::new(
            0,
            vec![z.clone(), z],
            vec![Matrix::from_i64(&[vec![1]])],
            vec![Matrix::from_i64(&[vec![1]]), Matrix::from_i64(&[vec![2]])],
            &c,
        );
        assert!(matches!(err, Err(Error::InvalidComplex(_))));
    }

    #[test]
    fn shifted_complex_flips_sign() {
        let c = ctx(5);
        let em = free(&[vec![5]], &c);
        let ec = EndoComplex::concentrated(&em, 1);
        assert_eq!(bockstein_char_complex(&ec, &c), Some(1));
        assert_eq!(stable_bockstein_char_complex(&ec, &c).value, 1);
    }
}
