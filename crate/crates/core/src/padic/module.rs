use std::fmt;

use num_rational::BigRational;
use serde::{Deserialize, Serialize};

use super::{p_local_snf, Lattice, Matrix, PAdicContext};
use crate::error::{Error, Result};

/// Isomorphism type of a finitely generated `Z_p`-module:
/// `Z_p^free_rank ⊕ ⨁ Z_p/p^e`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default, Serialize, Deserialize)]
pub struct FpModule {
    pub free_rank: usize,
    pub torsion_exponents: Vec<u32>,
}

impl FpModule {
    /// Zero exponents (trivial summands) are dropped.
    pub fn new(free_rank: usize, mut torsion_exponents: Vec<u32>) -> Self {
        torsion_exponents.retain(|&e| e > 0);
        torsion_exponents.sort_unstable();
        FpModule {
            free_rank,
            torsion_exponents,
        }
    }

    pub fn zero() -> Self {
        Self::default()
    }

    pub fn free(rank: usize) -> Self {
        Self::new(rank, Vec::new())
    }

    pub fn is_zero(&self) -> bool {
        self.free_rank == 0 && self.torsion_exponents.is_empty()
    }

    pub fn is_finite_length(&self) -> bool {
        self.free_rank == 0
    }

    pub fn length(&self) -> Result<u64> {
        if self.free_rank > 0 {
            return Err(Error::InfiniteLength(self.free_rank));
        }
        Ok(self.torsion_exponents.iter().map(|&e| e as u64).sum())
    }

    pub fn direct_sum(&self, other: &FpModule) -> FpModule {
        let mut t = self.torsion_exponents.clone();
        t.extend_from_slice(&other.torsion_exponents);
        Self::new(self.free_rank + other.free_rank, t)
    }

    /// Minimal presentation: one generator per summand.
    pub fn presentation(&self, ctx: &PAdicContext) -> Presentation {
        let gens = self.free_rank + self.torsion_exponents.len();
        let mut rel = Matrix::zeros(gens, self.torsion_exponents.len());
        for (k, &e) in self.torsion_exponents.iter().enumerate() {
            rel.set(self.free_rank + k, k, ctx.p_pow(e as i64));
        }
        Presentation {
            gens,
            relations: rel,
        }
    }
}

impl fmt::Display for FpModule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut parts = Vec::new();
        match self.free_rank {
            0 => {}
            1 => parts.push("Z_p".to_string()),
            r => parts.push(format!("Z_p^{r}")),
        }
        for &e in &self.torsion_exponents {
            parts.push(if e == 1 {
                "Z/p".to_string()
            } else {
                format!("Z/p^{e}")
            });
        }
        write!(f, "{}", parts.join(" + "))
    }
}

/// `Z_(p)^gens / (column span of relations)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Presentation {
    gens: usize,
    relations: Matrix,
}

impl Presentation {
    pub fn new(gens: usize, relations: Matrix, ctx: &PAdicContext) -> Result<Self> {
        if relations.rows() != gens {
            return Err(Error::Dimension(format!(
                "relation matrix has {} rows for {gens} generators",
                relations.rows()
            )));
        }
        if !relations.is_p_integral(ctx) {
            return Err(Error::NotPIntegral("relation matrix".into()));
        }
        Ok(Presentation { gens, relations })
    }

    pub fn free(gens: usize) -> Self {
        Presentation {
            gens,
            relations: Matrix::zeros(gens, 0),
        }
    }

    /// `(Z/p^m)^gens`.
    pub fn torsion(gens: usize, m: u32, ctx: &PAdicContext) -> Self {
        Presentation {
            gens,
            relations: Matrix::scalar(gens, &ctx.p_pow(m as i64)),
        }
    }

    pub fn gens(&self) -> usize {
        self.gens
    }

    pub fn relations(&self) -> &Matrix {
        &self.relations
    }

    pub fn structure(&self, ctx: &PAdicContext) -> FpModule {
        let snf = p_local_snf(&self.relations, ctx).expect("relations are p-integral");
        FpModule::new(self.gens - snf.rank(), snf.diagonal)
    }

    pub fn direct_sum(&self, other: &Presentation) -> Presentation {
        Presentation {
            gens: self.gens + other.gens,
            relations: self.relations.block_diag(&other.relations),
        }
    }

    /// The lattice spanned by the relations.
    pub fn relation_lattice(&self, ctx: &PAdicContext) -> Lattice {
        Lattice::span(&self.relations, ctx).expect("relations are p-integral")
    }

    /// The rational endomorphism induced by `theta` on the free quotient
    /// `M / torsion ⊗ Q`, in some basis.
    pub fn free_quotient_endo(&self, theta: &Matrix, ctx: &PAdicContext) -> Matrix {
        let snf = p_local_snf(&self.relations, ctx).expect("relations are p-integral");
        let rank = snf.rank();
        let conj = snf.u.mul(theta).mul(&snf.u_inv);
        conj.submatrix(rank, self.gens, rank, self.gens)
    }
}

/// A map of presented modules, given on generators: column `j` is the image
/// of source generator `j` in target generators.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ModuleMap {
    source: Presentation,
    target: Presentation,
    matrix: Matrix,
}

/// `ker(f)` presented on a basis of the lattice `{x : f(x) ∈ relations}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Kernel {
    pub presentation: Presentation,
    /// Inclusion into the source generators, one column per kernel generator.
    pub inclusion: Matrix,
    pub lattice: Lattice,
}

impl ModuleMap {
    /// Checks p-integrality, shapes and that relations map into relations.
    pub fn new(
        source: Presentation,
        target: Presentation,
        matrix: Matrix,
        ctx: &PAdicContext,
    ) -> Result<Self> {
        if matrix.rows() != target.gens || matrix.cols() != source.gens {
            return Err(Error::Dimension(format!(
                "map matrix is {}x{}, expected {}x{}",
                matrix.rows(),
                matrix.cols(),
                target.gens,
                source.gens
            )));
        }
        if !matrix.is_p_integral(ctx) {
            return Err(Error::NotPIntegral("map matrix".into()));
        }
        let images = matrix.mul(&source.relations);
        let lattice = target.relation_lattice(ctx);
        for j in 0..images.cols() {
            if !lattice.contains(&images.col(j), ctx) {
                return Err(Error::NotWellDefined(format!("relation {j} leaves the target relations")));
            }
        }
        Ok(ModuleMap {
            source,
            target,
            matrix,
        })
    }

    pub fn identity(m: &Presentation) -> Self {
        ModuleMap {
            source: m.clone(),
            target: m.clone(),
            matrix: Matrix::identity(m.gens),
        }
    }

    pub fn zero(source: &Presentation, target: &Presentation) -> Self {
        ModuleMap {
            source: source.clone(),
            target: target.clone(),
            matrix: Matrix::zeros(target.gens, source.gens),
        }
    }

    pub fn source(&self) -> &Presentation {
        &self.source
    }

    pub fn target(&self) -> &Presentation {
        &self.target
    }

    pub fn matrix(&self) -> &Matrix {
        &self.matrix
    }

    /// `other ∘ self`.
    pub fn then(&self, other: &ModuleMap) -> Result<ModuleMap> {
        if self.target != other.source {
            return Err(Error::Dimension("composable maps need matching modules".into()));
        }
        Ok(ModuleMap {
            source: self.source.clone(),
            target: other.target.clone(),
            matrix: other.matrix.mul(&self.matrix),
        })
    }

    /// Whether the map is zero as a map of modules.
    pub fn is_zero(&self, ctx: &PAdicContext) -> bool {
        let lattice = self.target.relation_lattice(ctx);
        (0..self.matrix.cols()).all(|j| lattice.contains(&self.matrix.col(j), ctx))
    }

    pub fn kernel(&self, ctx: &PAdicContext) -> Kernel {
        let a = self.source.gens;
        let stacked = self.matrix.hstack(&self.target.relations);
        let snf = p_local_snf(&stacked, ctx).expect("validated map");
        let rank = snf.rank();
        let gens: Vec<Vec<BigRational>> = (rank..stacked.cols())
            .map(|j| snf.v.col(j)[..a].to_vec())
            .collect();
        let lattice = Lattice::span(&Matrix::from_cols(a, &gens), ctx).expect("p-integral");
        let relations = lattice
            .coords_matrix(&self.source.relations, ctx)
            .expect("source relations lie in the kernel lattice");
        Kernel {
            presentation: Presentation {
                gens: lattice.rank(),
                relations,
            },
            inclusion: lattice.basis().clone(),
            lattice,
        }
    }

    pub fn cokernel(&self) -> Presentation {
        Presentation {
            gens: self.target.gens,
            relations: self.matrix.hstack(&self.target.relations),
        }
    }

    pub fn kernel_module(&self, ctx: &PAdicContext) -> FpModule {
        self.kernel(ctx).presentation.structure(ctx)
    }

    pub fn cokernel_module(&self, ctx: &PAdicContext) -> FpModule {
        self.cokernel().structure(ctx)
    }

    /// `f(S) ≅ S / ker f`.
    pub fn image_module(&self, ctx: &PAdicContext) -> FpModule {
        let ker = self.kernel(ctx);
        Presentation {
            gens: self.source.gens,
            relations: ker.lattice.basis().clone(),
        }
        .structure(ctx)
    }

    pub fn scalar(m: &Presentation, c: &BigRational) -> ModuleMap {
        ModuleMap {
            source: m.clone(),
            target: m.clone(),
            matrix: Matrix::scalar(m.gens, c),
        }
    }

    /// Matrix power for endomorphisms.
    pub fn pow(&self, k: usize) -> ModuleMap {
        assert_eq!(self.source, self.target, "power of a non-endomorphism");
        ModuleMap {
            source: self.source.clone(),
            target: self.target.clone(),
            matrix: self.matrix.pow(k),
        }
    }
}
