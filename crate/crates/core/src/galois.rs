//! Subgroup recovery from hom-closed subspaces of `M`.
//!
//! Given `R ⊆ M` containing the trivial block and closed under every
//! G-homomorphism `M⊗M → M`, the subspace `S ⊆ CG` whose Fourier blocks have
//! all columns in `R ∩ M_χ` is a right ideal and a subalgebra for the
//! coordinatewise product. Such a subalgebra is spanned by the indicators
//! of a partition of `G`; the block through the identity is a subgroup
//! `G₁`, the other blocks are its cosets `G₁·g`, and `R = M^{G₁}`.

use std::fmt;

use crate::chars::{character_table, CharacterTable};
use crate::error::{Error, Result};
use crate::group::{conjugacy_classes, Group, Subgroup};
use crate::homs::{hom_basis, IntertwinerBasis};
use crate::linalg::{max_abs, nullspace, CMatrix, CVector, RngSeed, Subspace, C64, ONE, ZERO};
use crate::rep::{build_M, fixed_subspace, ModuleM};

/// Coordinate-equality tolerance for partition extraction.
pub const PARTITION_TOL: f64 = 1e-6;

/// Everything derived from a group once: characters, `M`, and the
/// intertwiner basis.
#[derive(Clone, Debug)]
pub struct GaloisContext {
    pub group: Group,
    pub table: CharacterTable,
    pub module: ModuleM,
    pub homs: IntertwinerBasis,
    pub tol: f64,
}

impl GaloisContext {
    pub fn new(group: Group, seed: RngSeed, tol: f64) -> Result<Self> {
        let classes = conjugacy_classes(&group);
        let table = character_table(&group, &classes, tol)?;
        let module = build_M(&group, &table, seed, tol)?;
        let homs = hom_basis(&module, &table, tol)?;
        Ok(GaloisContext {
            group,
            table,
            module,
            homs,
            tol,
        })
    }
}

/// `R` together with its block components `R ∩ M_χ`, the latter in block
/// coordinates.
#[derive(Clone, Debug)]
pub struct RSubspace {
    pub space: Subspace,
    pub components: Vec<Subspace>,
}

impl RSubspace {
    pub fn component_dims(&self) -> Vec<usize> {
        self.components.iter().map(Subspace::dim).collect()
    }
}

#[allow(non_snake_case)]
pub fn decompose_R(space: &Subspace, module: &ModuleM, tol: f64) -> Result<RSubspace> {
    let d = module.total_dim();
    if space.ambient_dim() != d {
        return Err(Error::DimensionMismatch {
            expected: d,
            found: space.ambient_dim(),
        });
    }
    if !space.contains_subspace(&module.trivial_block())? {
        return Err(Error::MissingTrivial);
    }
    let mut components = Vec::with_capacity(module.block_count());
    for r in 0..module.block_count() {
        let inter = space.intersect(&module.block(r))?;
        let (off, len) = (module.offsets()[r], module.block_dim(r));
        let local = inter.basis().rows(off, len).into_owned();
        components.push(Subspace::column_span(&local, tol)?);
    }
    let total: usize = components.iter().map(Subspace::dim).sum();
    if total != space.dim() {
        return Err(Error::NotBlockDecomposable {
            dim: space.dim(),
            components: total,
        });
    }
    Ok(RSubspace {
        space: space.clone(),
        components,
    })
}

/// Witness that `π(u ⊗ v) ∉ R` for a basis map `π` and basis vectors `u, v`
/// of `R`.
#[derive(Clone, Debug)]
pub struct Violation {
    pub map_index: usize,
    pub u_index: usize,
    pub v_index: usize,
    pub u: CVector,
    pub v: CVector,
    pub image: CVector,
    pub residual: f64,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "map {} sends basis pair ({}, {}) outside R (residual {:.3e})",
            self.map_index, self.u_index, self.v_index, self.residual
        )
    }
}

/// Checks `π(R ⊗ R) ⊆ R` for every basis map. Returns the violation with
/// the largest residual, if any.
pub fn check_closure(r: &RSubspace, basis: &IntertwinerBasis) -> std::result::Result<(), Box<Violation>> {
    let space = &r.space;
    let d = basis.dim();
    let vecs = space.basis_vectors();
    let pairs: Vec<(usize, usize)> = (0..vecs.len()).flat_map(|a| (0..vecs.len()).map(move |b| (a, b))).collect();
    let refs: Vec<(&CVector, &CVector)> = pairs.iter().map(|&(a, b)| (&vecs[a], &vecs[b])).collect();
    let images = basis.apply_pairs(&refs);
    let mut worst: Option<Violation> = None;
    for (q, &(a, b)) in pairs.iter().enumerate() {
        for p in 0..basis.len() {
            let w: CVector = images.row(q).columns(p * d, d).transpose();
            let residual = space.residual_norm(&w);
            if residual > space.tol() * w.norm().max(1.0) && worst.as_ref().is_none_or(|v| residual > v.residual) {
                worst = Some(Violation {
                    map_index: p,
                    u_index: a,
                    v_index: b,
                    u: vecs[a].clone(),
                    v: vecs[b].clone(),
                    image: w,
                    residual,
                });
            }
        }
    }
    match worst {
        Some(v) => Err(Box::new(v)),
        None => Ok(()),
    }
}

/// Least subspace containing `space` and the trivial block that is closed
/// under every basis map.
pub fn closure(space: &Subspace, module: &ModuleM, basis: &IntertwinerBasis, tol: f64) -> Result<RSubspace> {
    let mut current = space.sum(&module.trivial_block())?;
    let d = module.total_dim();
    loop {
        let vecs = current.basis_vectors();
        let refs: Vec<(&CVector, &CVector)> = vecs.iter().flat_map(|u| vecs.iter().map(move |v| (u, v))).collect();
        let images = basis.apply_pairs(&refs);
        let mut candidates = vecs.clone();
        for q in 0..refs.len() {
            for p in 0..basis.len() {
                candidates.push(images.row(q).columns(p * d, d).transpose());
            }
        }
        let next = Subspace::span(d, &candidates, tol)?;
        if next.dim() == current.dim() {
            break;
        }
        current = next;
    }
    decompose_R(&current, module, tol)
}

/// Coordinatewise product on `C^G`.
pub fn hadamard(a: &CVector, b: &CVector) -> CVector {
    a.component_mul(b)
}

/// `S ⊆ C^G`, stored as a subspace of functions on group elements.
#[derive(Clone, Debug)]
pub struct SSpace {
    pub space: Subspace,
}

impl SSpace {
    pub fn dim(&self) -> usize {
        self.space.dim()
    }
}

/// `S = { a : every column of Σ_g a(g) ρ_χ(g) lies in R ∩ M_χ, for all χ }`.
///
/// Solved as the nullspace of `(I − P_{R_χ}) F(a)(χ) = 0`, with rows scaled
/// by `√(χ(1)/|G|)` so the Fourier map is unitary and the rank decision is
/// well conditioned.
#[allow(non_snake_case)]
pub fn embed_S(r: &RSubspace, module: &ModuleM, group: &Group, tol: f64) -> Result<SSpace> {
    let n = group.order();
    let mut rows: Vec<Vec<C64>> = Vec::new();
    for (chi, irrep) in module.irreps().iter().enumerate() {
        let comp = &r.components[chi];
        if comp.dim() == irrep.dim {
            continue;
        }
        let q = CMatrix::identity(irrep.dim, irrep.dim) - comp.projector();
        let weight = (irrep.dim as f64 / n as f64).sqrt();
        let blocks: Vec<CMatrix> = irrep.matrices.iter().map(|m| &q * m).collect();
        for i in 0..irrep.dim {
            for j in 0..irrep.dim {
                rows.push((0..n).map(|g| blocks[g][(i, j)] * weight).collect());
            }
        }
    }
    let space = if rows.is_empty() {
        Subspace::full(n, tol)
    } else {
        let constraints = CMatrix::from_fn(rows.len(), n, |i, g| rows[i][g]);
        Subspace::column_span(&nullspace(&constraints, tol), tol)?
    };

    let expected: usize = module
        .irreps()
        .iter()
        .zip(&r.components)
        .map(|(irrep, comp)| irrep.dim * comp.dim())
        .sum();
    let fail = |reason: String| Error::RightIdealCheckFailed { reason };
    if space.dim() != expected {
        return Err(fail(format!("dim S = {}, expected Σ χ(1)·dim R_χ = {expected}", space.dim())));
    }
    if !space.contains(&CVector::from_element(n, ONE))? {
        return Err(fail("S does not contain the identity 1°".into()));
    }
    for &s in group.generator_indices() {
        let s_inv = group.inv(s);
        for a in space.basis_vectors() {
            let shifted = CVector::from_fn(n, |x, _| a[group.mul(x, s_inv)]);
            if !space.contains(&shifted)? {
                return Err(fail(format!("not stable under right translation by element {s}")));
            }
        }
    }
    Ok(SSpace { space })
}

/// Groups elements whose coordinates agree across every basis vector of
/// `S`. The block count must equal `dim S`, which certifies that `S` is
/// exactly the span of the block indicators.
#[allow(non_snake_case)]
pub fn partition_from_S(s: &SSpace, tol: f64) -> Result<Vec<Vec<usize>>> {
    let basis = s.space.basis();
    let n = basis.nrows();
    let mut reps: Vec<usize> = Vec::new();
    let mut blocks: Vec<Vec<usize>> = Vec::new();
    for g in 0..n {
        let row = basis.row(g);
        let found = reps.iter().position(|&r| max_abs(&(row - basis.row(r))) <= tol);
        match found {
            Some(b) => blocks[b].push(g),
            None => {
                reps.push(g);
                blocks.push(vec![g]);
            }
        }
    }
    if blocks.len() != s.dim() {
        return Err(Error::NotAnIdempotentSpan {
            blocks: blocks.len(),
            dim: s.dim(),
        });
    }
    Ok(blocks)
}

/// Output of [`recover_subgroup`]: every intermediate object of the
/// recovery, already checked.
#[derive(Clone, Debug)]
pub struct RecoveryCertificate {
    pub partition: Vec<Vec<usize>>,
    pub subgroup: Subgroup,
    /// 0/1 indicator of each block, in partition order.
    pub idempotents: Vec<Vec<u8>>,
    pub component_dims: Vec<usize>,
    pub s_dim: usize,
    pub fixed_match: bool,
}

pub fn recover_subgroup(r: &RSubspace, ctx: &GaloisContext) -> Result<RecoveryCertificate> {
    check_closure(r, &ctx.homs).map_err(Error::NotClosed)?;
    let group = &ctx.group;
    let n = group.order();
    let s = embed_S(r, &ctx.module, group, ctx.tol)?;
    let partition = partition_from_S(&s, PARTITION_TOL)?;

    // Primitive idempotents read back from S: the projection of δ_g onto
    // S is the block indicator of g scaled by 1/|block|.
    let mut idempotents = Vec::with_capacity(partition.len());
    for block in &partition {
        let mut delta = CVector::zeros(n);
        delta[block[0]] = ONE;
        let proj = s.space.project(&delta);
        let e = proj.unscale(proj[block[0]].re);
        let rounded: Vec<u8> = e.iter().map(|z| if z.re > 0.5 { 1 } else { 0 }).collect();
        let exact = e
            .iter()
            .zip(&rounded)
            .all(|(z, &b)| (z - C64::new(b as f64, 0.0)).norm() <= PARTITION_TOL);
        let matches_block = (0..n).all(|g| (rounded[g] == 1) == block.binary_search(&g).is_ok());
        let squared = hadamard(&e, &e);
        let idempotent = max_abs(&(&squared - &e)) <= PARTITION_TOL;
        if !(exact && matches_block && idempotent) {
            return Err(Error::NotAnIdempotentSpan {
                blocks: partition.len(),
                dim: s.dim(),
            });
        }
        idempotents.push(rounded);
    }

    let subgroup = Subgroup::new(group, partition[0].clone()).map_err(|reason| Error::SubgroupAxiomFailed { reason })?;
    for (i, block) in partition.iter().enumerate() {
        let g = block[0];
        let mut coset: Vec<usize> = subgroup.members().iter().map(|&h| group.mul(h, g)).collect();
        coset.sort_unstable();
        if &coset != block {
            return Err(Error::CosetCheckFailed { block: i });
        }
    }

    let fixed = fixed_subspace(&ctx.module, &subgroup)?;
    let fixed_match = fixed.equal(&r.space)?;
    if !fixed_match {
        return Err(Error::FixedSpaceMismatch);
    }
    Ok(RecoveryCertificate {
        partition,
        subgroup,
        idempotents,
        component_dims: r.component_dims(),
        s_dim: s.dim(),
        fixed_match,
    })
}

/// Random vector supported on the given blocks of `M`.
pub fn random_block_vector<R: rand::Rng>(rng: &mut R, module: &ModuleM, blocks: &[usize]) -> CVector {
    let mut v = CVector::from_element(module.total_dim(), ZERO);
    for &b in blocks {
        let off = module.offsets()[b];
        for i in 0..module.block_dim(b) {
            v[off + i] = crate::linalg::random_complex(rng);
        }
    }
    v
}
