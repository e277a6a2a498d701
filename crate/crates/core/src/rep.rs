//! Explicit unitary irreducible representations cut out of the regular
//! representation, the multiplicity-one module `M = ⊕ M_χ`, and fixed
//! subspaces `M^H`.
//!
//! The regular representation acts on functions `a : G → C` by left
//! translation, `(g·a)(x) = a(g⁻¹x)`.

use nalgebra::DMatrix;

use crate::chars::{central_idempotents, CentralIdempotent, CharacterTable};
use crate::error::{Error, Result};
use crate::group::{Group, Subgroup};
use crate::linalg::{
    hermitian_eigensplit, max_abs, nullspace, random_complex, CMatrix, RngSeed, Subspace, C64, ONE,
};

const SPLIT_ATTEMPTS: usize = 8;
/// Groups up to this order get exhaustive pairwise homomorphism checks.
pub const EXHAUSTIVE_CHECK_ORDER: usize = 48;

/// Left-translation permutation matrices on `C^G`, one per element.
pub fn regular_rep(group: &Group) -> Vec<CMatrix> {
    let n = group.order();
    (0..n)
        .map(|g| {
            let mut m = CMatrix::zeros(n, n);
            for y in 0..n {
                m[(group.mul(g, y), y)] = ONE;
            }
            m
        })
        .collect()
}

/// `L_g · B` for a matrix whose rows are indexed by group elements.
fn left_translate_rows(group: &Group, g: usize, b: &CMatrix) -> CMatrix {
    let mut out = CMatrix::zeros(b.nrows(), b.ncols());
    for y in 0..group.order() {
        out.row_mut(group.mul(g, y)).copy_from(&b.row(y));
    }
    out
}

/// Image of convolution by `e_χ` on `C^G`. Its dimension must be `χ(1)²`.
pub fn isotypic_component(
    group: &Group,
    idempotent: &CentralIdempotent,
    degree: usize,
    tol: f64,
) -> Result<Subspace> {
    let n = group.order();
    let e = &idempotent.coeffs;
    let conv = CMatrix::from_fn(n, n, |x, y| e[group.mul(x, group.inv(y))]);
    let space = Subspace::column_span(&conv, tol)?;
    if space.dim() != degree * degree {
        return Err(Error::BadIsotypicDim {
            chi: idempotent.chi_index,
            expected: degree * degree,
            found: space.dim(),
        });
    }
    Ok(space)
}

/// A unitary irreducible representation, one matrix per group element.
#[derive(Clone, Debug)]
pub struct Irrep {
    pub chi_index: usize,
    pub dim: usize,
    pub matrices: Vec<CMatrix>,
}

impl Irrep {
    pub fn unitarity_error(&self) -> f64 {
        let id = CMatrix::identity(self.dim, self.dim);
        self.matrices
            .iter()
            .map(|m| max_abs(&(m.adjoint() * m - &id)))
            .fold(0.0, f64::max)
    }

    /// Worst `‖ρ(g)ρ(h) − ρ(gh)‖` over all pairs.
    pub fn homomorphism_error(&self, group: &Group) -> f64 {
        let n = group.order();
        let mut worst: f64 = 0.0;
        for g in 0..n {
            for h in 0..n {
                let err = max_abs(&(&self.matrices[g] * &self.matrices[h] - &self.matrices[group.mul(g, h)]));
                worst = worst.max(err);
            }
        }
        worst
    }

    fn generator_homomorphism_error(&self, group: &Group) -> f64 {
        let mut worst: f64 = 0.0;
        for &s in group.generator_indices() {
            for h in 0..group.order() {
                let err = max_abs(&(&self.matrices[s] * &self.matrices[h] - &self.matrices[group.mul(s, h)]));
                worst = worst.max(err);
            }
        }
        worst
    }

    /// `(1/|G|) Σ_g |tr ρ(g)|²`, which is 1 exactly for irreducibles.
    pub fn character_norm(&self) -> f64 {
        let total: f64 = self.matrices.iter().map(|m| m.trace().norm_sqr()).sum();
        total / self.matrices.len() as f64
    }

    /// Worst `|tr ρ(g) − χ(g)|` over class representatives.
    pub fn character_error(&self, table: &CharacterTable) -> f64 {
        table
            .classes()
            .representatives
            .iter()
            .map(|&g| (self.matrices[g].trace() - table.value(self.chi_index, g)).norm())
            .fold(0.0, f64::max)
    }

    fn certify(&self, group: &Group, table: &CharacterTable, tol: f64) -> Result<()> {
        let fail = |reason: String| Error::IrreducibilityCheckFailed {
            chi: self.chi_index,
            reason,
        };
        let u = self.unitarity_error();
        if u > tol {
            return Err(fail(format!("unitarity error {u:e}")));
        }
        let h = if group.order() <= EXHAUSTIVE_CHECK_ORDER {
            self.homomorphism_error(group)
        } else {
            self.generator_homomorphism_error(group)
        };
        if h > tol {
            return Err(fail(format!("homomorphism error {h:e}")));
        }
        let c = self.character_error(table);
        if c > tol {
            return Err(fail(format!("trace differs from character by {c:e}")));
        }
        let norm = self.character_norm();
        if (norm - 1.0).abs() > tol {
            return Err(fail(format!("character norm {norm}")));
        }
        Ok(())
    }
}

/// Cuts one copy of `M_χ` out of its isotypic component.
///
/// The commutant of the left action restricted to the component is solved
/// from `X·L(s) = L(s)·X` over the generators `s`; a random Hermitian
/// element of it has eigenspaces that are submodules, and the first one of
/// dimension `χ(1)` is taken.
pub fn split_irrep(
    group: &Group,
    table: &CharacterTable,
    isotypic: &Subspace,
    chi_row: usize,
    seed: RngSeed,
    tol: f64,
) -> Result<Irrep> {
    let degree = table.degrees()[chi_row];
    let m = isotypic.dim();
    if m != degree * degree {
        return Err(Error::BadIsotypicDim {
            chi: chi_row,
            expected: degree * degree,
            found: m,
        });
    }
    let basis = isotypic.basis();
    let restricted: Vec<CMatrix> = group
        .generator_indices()
        .iter()
        .map(|&s| basis.adjoint() * left_translate_rows(group, s, basis))
        .collect();

    // vec(X·A − A·X) = (Aᵀ ⊗ I − I ⊗ A) vec(X), column-major.
    let id = CMatrix::identity(m, m);
    let mut system = CMatrix::zeros(restricted.len() * m * m, m * m);
    for (i, a) in restricted.iter().enumerate() {
        let block = a.transpose().kronecker(&id) - id.kronecker(a);
        system.view_mut((i * m * m, 0), (m * m, m * m)).copy_from(&block);
    }
    let commutant = nullspace(&system, tol);
    if commutant.ncols() != degree * degree {
        return Err(Error::IrreducibilityCheckFailed {
            chi: chi_row,
            reason: format!(
                "commutant has dimension {}, expected {}",
                commutant.ncols(),
                degree * degree
            ),
        });
    }

    let mut rng = seed.rng(0x1000 + chi_row as u64);
    for attempt in 0..SPLIT_ATTEMPTS {
        let mut x = CMatrix::zeros(m, m);
        for col in commutant.column_iter() {
            let c = random_complex(&mut rng);
            x += DMatrix::from_column_slice(m, m, col.as_slice()).map(|z| z * c);
        }
        let herm = &x + x.adjoint();
        let split = hermitian_eigensplit(&herm, tol)?;
        let Some(cluster) = split.iter().find(|c| c.space.dim() == degree) else {
            log::debug!("split of χ{chi_row}: attempt {attempt} found no eigenspace of dim {degree}");
            continue;
        };
        let w = basis * cluster.space.basis();
        let matrices: Vec<CMatrix> = (0..group.order())
            .map(|g| w.adjoint() * left_translate_rows(group, g, &w))
            .collect();
        let irrep = Irrep {
            chi_index: chi_row,
            dim: degree,
            matrices,
        };
        irrep.certify(group, table, tol)?;
        return Ok(irrep);
    }
    Err(Error::SplitDegenerate {
        chi: chi_row,
        degree,
        attempts: SPLIT_ATTEMPTS,
    })
}

/// `M = ⊕_χ M_χ` with each irreducible exactly once, trivial block first.
#[derive(Clone, Debug)]
pub struct ModuleM {
    irreps: Vec<Irrep>,
    offsets: Vec<usize>,
    total_dim: usize,
    action: Vec<CMatrix>,
    tol: f64,
}

impl ModuleM {
    pub fn irreps(&self) -> &[Irrep] {
        &self.irreps
    }

    pub fn offsets(&self) -> &[usize] {
        &self.offsets
    }

    pub fn total_dim(&self) -> usize {
        self.total_dim
    }

    pub fn action(&self, g: usize) -> &CMatrix {
        &self.action[g]
    }

    pub fn actions(&self) -> &[CMatrix] {
        &self.action
    }

    pub fn tol(&self) -> f64 {
        self.tol
    }

    pub fn block_count(&self) -> usize {
        self.irreps.len()
    }

    pub fn block_dim(&self, r: usize) -> usize {
        self.irreps[r].dim
    }

    /// Coordinate subspace `M_χ` for block `r`.
    pub fn block(&self, r: usize) -> Subspace {
        Subspace::coordinate_block(self.total_dim, self.offsets[r], self.irreps[r].dim, self.tol)
    }

    pub fn trivial_block(&self) -> Subspace {
        self.block(0)
    }
}

#[allow(non_snake_case)]
pub fn build_M(group: &Group, table: &CharacterTable, seed: RngSeed, tol: f64) -> Result<ModuleM> {
    let idempotents = central_idempotents(group, table);
    let mut irreps = Vec::with_capacity(table.len());
    for (r, e) in idempotents.iter().enumerate() {
        let degree = table.degrees()[r];
        let iso = isotypic_component(group, e, degree, tol)?;
        irreps.push(split_irrep(group, table, &iso, r, seed, tol)?);
    }
    let mut offsets = Vec::with_capacity(irreps.len());
    let mut total_dim = 0;
    for irrep in &irreps {
        offsets.push(total_dim);
        total_dim += irrep.dim;
    }
    let action = (0..group.order())
        .map(|g| {
            let mut m = CMatrix::zeros(total_dim, total_dim);
            for (irrep, &off) in irreps.iter().zip(&offsets) {
                m.view_mut((off, off), (irrep.dim, irrep.dim)).copy_from(&irrep.matrices[g]);
            }
            m
        })
        .collect();
    Ok(ModuleM {
        irreps,
        offsets,
        total_dim,
        action,
        tol,
    })
}

/// `P_H = (1/|H|) Σ_{h∈H} action(h)`.
pub fn averaging_operator(module: &ModuleM, sub: &Subgroup) -> CMatrix {
    let d = module.total_dim();
    let mut p = CMatrix::zeros(d, d);
    for &h in sub.members() {
        p += module.action(h);
    }
    p.unscale(sub.order() as f64)
}

/// `M^H` as the column space of the averaging projector.
pub fn fixed_subspace(module: &ModuleM, sub: &Subgroup) -> Result<Subspace> {
    let p = averaging_operator(module, sub);
    let defect = max_abs(&(&p * &p - &p));
    if defect > module.tol() {
        log::warn!("averaging operator deviates from a projector by {defect:e}");
    }
    Subspace::column_span(&p, module.tol())
}

/// Dimension of `M_χ^H` per block, read from the diagonal blocks of `P_H`.
pub fn fixed_block_dims(module: &ModuleM, sub: &Subgroup) -> Result<Vec<usize>> {
    let p = averaging_operator(module, sub);
    (0..module.block_count())
        .map(|r| {
            let (off, d) = (module.offsets()[r], module.block_dim(r));
            let block = p.view((off, off), (d, d)).into_owned();
            Ok(Subspace::column_span(&block, module.tol())?.dim())
        })
        .collect()
}

/// `dim M_χ^H = (1/|H|) Σ_{h∈H} χ(h)`, from the character table alone.
pub fn fixed_dim_by_character(table: &CharacterTable, sub: &Subgroup, chi_row: usize) -> Result<usize> {
    let total: C64 = sub.members().iter().map(|&h| table.value(chi_row, h)).sum();
    let avg = total / sub.order() as f64;
    let rounded = avg.re.round();
    if (avg - C64::new(rounded, 0.0)).norm() > 1e-6 || rounded < 0.0 {
        return Err(Error::NotAnInteger {
            what: "fixed-space dimension",
            value: avg.re,
        });
    }
    Ok(rounded as usize)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chars::character_table;
    use crate::group::{conjugacy_classes, enumerate_subgroups};
    use crate::linalg::{DEFAULT_TOL, ZERO};
    use crate::suite;

    fn setup(g: &Group) -> (CharacterTable, ModuleM) {
        let t = character_table(g, &conjugacy_classes(g), DEFAULT_TOL).unwrap();
        let m = build_M(g, &t, RngSeed(0), DEFAULT_TOL).unwrap();
        (t, m)
    }

    #[test]
    fn regular_rep_examples() {
        let t = suite::trivial();
        let r = regular_rep(&t);
        assert_eq!(r.len(), 1);
        assert_eq!(r[0], CMatrix::identity(1, 1));

        let c2 = suite::c2();
        let r = regular_rep(&c2);
        assert_eq!(r[0], CMatrix::identity(2, 2));
        assert_eq!(r[1], CMatrix::from_row_slice(2, 2, &[ZERO, ONE, ONE, ZERO]));
    }

    #[test]
    fn isotypic_dims() {
        let g = suite::s3();
        let t = character_table(&g, &conjugacy_classes(&g), DEFAULT_TOL).unwrap();
        let es = central_idempotents(&g, &t);
        let dims: Vec<usize> = es
            .iter()
            .map(|e| isotypic_component(&g, e, t.degrees()[e.chi_index], DEFAULT_TOL).unwrap().dim())
            .collect();
        assert_eq!(dims, vec![1, 1, 4]);
        assert_eq!(dims.iter().sum::<usize>(), g.order());

        let triv = isotypic_component(&g, &es[0], 1, DEFAULT_TOL).unwrap();
        let ones = crate::linalg::CVector::from_element(6, ONE);
        assert!(triv.contains(&ones).unwrap());

        // Invariance under left translation.
        let iso = isotypic_component(&g, &es[2], 2, DEFAULT_TOL).unwrap();
        let regular = regular_rep(&g);
        for l in &regular {
            assert!(iso.contains_subspace(&iso.map(l).unwrap()).unwrap());
        }
    }

    #[test]
    fn isotypic_rank_matches_direct_convolution() {
        // Oracle: rank of the convolution operator via its projector trace.
        let g = suite::s3();
        let t = character_table(&g, &conjugacy_classes(&g), DEFAULT_TOL).unwrap();
        let e = &central_idempotents(&g, &t)[2];
        let n = g.order();
        let conv = CMatrix::from_fn(n, n, |x, y| e.coeffs[g.mul(x, g.inv(y))]);
        assert!((conv.trace().re - 4.0).abs() < 1e-9);
    }

    #[test]
    fn bad_isotypic_dim_reported() {
        let g = suite::s3();
        let t = character_table(&g, &conjugacy_classes(&g), DEFAULT_TOL).unwrap();
        let e = &central_idempotents(&g, &t)[2];
        assert!(matches!(
            isotypic_component(&g, e, 1, DEFAULT_TOL),
            Err(Error::BadIsotypicDim { expected: 1, found: 4, .. })
        ));
    }

    #[test]
    fn linear_irreps_are_characters() {
        let g = suite::c6();
        let (t, m) = setup(&g);
        for irrep in m.irreps() {
            for x in 0..g.order() {
                assert!((irrep.matrices[x][(0, 0)] - t.value(irrep.chi_index, x)).norm() < 1e-9);
            }
        }
    }

    #[test]
    fn s3_standard_irrep() {
        let g = suite::s3();
        let (_, m) = setup(&g);
        let std = &m.irreps()[2];
        let three_cycle = g.index_of(&crate::group::Perm::new(vec![1, 2, 0]).unwrap()).unwrap();
        assert!((std.matrices[three_cycle].trace() - C64::new(-1.0, 0.0)).norm() < DEFAULT_TOL);
    }

    #[test]
    fn q8_central_involution_is_minus_identity() {
        let g = suite::q8();
        let (t, m) = setup(&g);
        let z = (1..8).find(|&x| g.mul(x, x) == 0).unwrap();
        let r = t.degrees().iter().position(|&d| d == 2).unwrap();
        let minus = -CMatrix::identity(2, 2);
        assert!(max_abs(&(&m.irreps()[r].matrices[z] - minus)) < DEFAULT_TOL);
    }

    #[test]
    fn module_dims() {
        assert_eq!(setup(&suite::trivial()).1.total_dim(), 1);
        assert_eq!(setup(&suite::s3()).1.total_dim(), 4);
        assert_eq!(setup(&suite::s4()).1.total_dim(), 10);
    }

    #[test]
    fn irreps_certify_on_suite() {
        for (name, g) in suite::all() {
            let (t, m) = setup(&g);
            for irrep in m.irreps() {
                assert!(irrep.homomorphism_error(&g) <= DEFAULT_TOL, "{name}");
                assert!(irrep.unitarity_error() <= DEFAULT_TOL, "{name}");
                assert!((irrep.character_norm() - 1.0).abs() <= DEFAULT_TOL, "{name}");
                assert!(irrep.character_error(&t) <= DEFAULT_TOL, "{name}");
            }
        }
    }

    #[test]
    fn fixed_subspace_examples() {
        let g = suite::s3();
        let (t, m) = setup(&g);
        assert_eq!(fixed_subspace(&m, &Subgroup::trivial()).unwrap().dim(), 4);
        let whole = fixed_subspace(&m, &Subgroup::whole(&g)).unwrap();
        assert!(whole.equal(&m.trivial_block()).unwrap());

        let subs = enumerate_subgroups(&g);
        let h = subs.iter().find(|h| h.members() == [0, g.index_of(&crate::group::Perm::new(vec![1, 0, 2]).unwrap()).unwrap()]).unwrap();
        assert_eq!(fixed_subspace(&m, h).unwrap().dim(), 2);
        assert_eq!(fixed_block_dims(&m, h).unwrap(), vec![1, 0, 1]);

        let a3 = subs.iter().find(|h| h.order() == 3).unwrap();
        assert_eq!(fixed_dim_by_character(&t, a3, 0).unwrap(), 1);
        assert_eq!(fixed_dim_by_character(&t, a3, 1).unwrap(), 1);
        assert_eq!(fixed_dim_by_character(&t, a3, 2).unwrap(), 0);
    }

    #[test]
    fn fixed_spaces_agree_with_characters() {
        for (name, g) in suite::all() {
            let (t, m) = setup(&g);
            let subs = enumerate_subgroups(&g);
            let spaces: Vec<Subspace> = subs.iter().map(|h| fixed_subspace(&m, h).unwrap()).collect();
            for (h, space) in subs.iter().zip(&spaces) {
                let by_char: Vec<usize> = (0..t.len()).map(|r| fixed_dim_by_character(&t, h, r).unwrap()).collect();
                assert_eq!(fixed_block_dims(&m, h).unwrap(), by_char, "{name}");
                assert_eq!(space.dim(), by_char.iter().sum::<usize>(), "{name}");
                let p = averaging_operator(&m, h);
                assert!(max_abs(&(&p * &p - &p)) <= DEFAULT_TOL, "{name}");
                for &x in h.members() {
                    for v in space.basis_vectors() {
                        assert!((m.action(x) * &v - &v).norm() <= DEFAULT_TOL, "{name}");
                    }
                }
            }
            for (i, a) in subs.iter().enumerate() {
                for (j, b) in subs.iter().enumerate() {
                    if a.is_subset_of(b) {
                        assert!(spaces[i].contains_subspace(&spaces[j]).unwrap(), "{name}");
                    }
                    if i != j {
                        assert!(!spaces[i].equal(&spaces[j]).unwrap(), "{name}: injectivity");
                    }
                }
            }
        }
    }
}
