//! The space `Hom_G(M⊗M, M)` of equivariant bilinear products on `M`.
//!
//! A map is stored as a dense tensor `T[i][j][k]`, the `k`-th output
//! coordinate of `π(e_i ⊗ e_j)`.

use crate::chars::CharacterTable;
use crate::error::{Error, Result};
use crate::linalg::{max_abs, CMatrix, CVector, Subspace, C64, ZERO};
use crate::rep::ModuleM;

#[derive(Clone, Debug, PartialEq)]
pub struct Intertwiner {
    dim: usize,
    tensor: Vec<C64>,
}

impl Intertwiner {
    pub fn new(dim: usize, tensor: Vec<C64>) -> Result<Self> {
        if tensor.len() != dim * dim * dim {
            return Err(Error::DimensionMismatch {
                expected: dim * dim * dim,
                found: tensor.len(),
            });
        }
        Ok(Intertwiner { dim, tensor })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn tensor(&self) -> &[C64] {
        &self.tensor
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize, k: usize) -> C64 {
        self.tensor[(i * self.dim + j) * self.dim + k]
    }

    /// `π(u ⊗ v)`.
    pub fn apply(&self, u: &CVector, v: &CVector) -> CVector {
        let d = self.dim;
        let mut out = CVector::zeros(d);
        for i in 0..d {
            if u[i] == ZERO {
                continue;
            }
            for j in 0..d {
                let w = u[i] * v[j];
                if w == ZERO {
                    continue;
                }
                let base = (i * d + j) * d;
                for k in 0..d {
                    out[k] += w * self.tensor[base + k];
                }
            }
        }
        out
    }

    /// `max ‖A_g ∘ π − π ∘ (A_g ⊗ A_g)‖` entrywise for one element.
    pub fn equivariance_error(&self, module: &ModuleM, g: usize) -> f64 {
        let d = self.dim;
        let a = module.action(g);
        let mut worst: f64 = 0.0;
        for i in 0..d {
            for j in 0..d {
                let mut e_i = CVector::zeros(d);
                e_i[i] = C64::new(1.0, 0.0);
                let mut e_j = CVector::zeros(d);
                e_j[j] = C64::new(1.0, 0.0);
                let lhs = a * self.apply(&e_i, &e_j);
                let rhs = self.apply(&a.column(i).into_owned(), &a.column(j).into_owned());
                worst = worst.max(max_abs(&(lhs - rhs)));
            }
        }
        worst
    }
}

/// Reynolds projector `(1/|G|) Σ_g A_g ∘ f ∘ (A_g⁻¹ ⊗ A_g⁻¹)` on a full tensor.
pub fn reynolds(module: &ModuleM, f: &Intertwiner) -> Intertwiner {
    let d = module.total_dim();
    let n = module.actions().len();
    let mut out = vec![ZERO; d * d * d];
    for a in module.actions() {
        // A⁻¹ = A* for the unitary action.
        for i in 0..d {
            for j in 0..d {
                for i0 in 0..d {
                    let ci = a[(i, i0)].conj();
                    if ci == ZERO {
                        continue;
                    }
                    for j0 in 0..d {
                        let cj = ci * a[(j, j0)].conj();
                        if cj == ZERO {
                            continue;
                        }
                        let src = (i0 * d + j0) * d;
                        for k in 0..d {
                            let mut acc = ZERO;
                            for k0 in 0..d {
                                acc += a[(k, k0)] * f.tensor[src + k0];
                            }
                            out[(i * d + j) * d + k] += cj * acc;
                        }
                    }
                }
            }
        }
    }
    let scale = 1.0 / n as f64;
    Intertwiner {
        dim: d,
        tensor: out.into_iter().map(|z| z * scale).collect(),
    }
}

/// An orthonormal basis of `Hom_G(M⊗M, M)` in coefficient space, with the
/// block triple `(a, b, c)` each map is supported on.
#[derive(Clone, Debug)]
pub struct IntertwinerBasis {
    dim: usize,
    maps: Vec<Intertwiner>,
    triples: Vec<(usize, usize, usize)>,
    /// Row `i·d + j`, column `p·d + k` holds `T_p[i][j][k]`.
    stacked: CMatrix,
}

impl IntertwinerBasis {
    pub fn len(&self) -> usize {
        self.maps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.maps.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn maps(&self) -> &[Intertwiner] {
        &self.maps
    }

    pub fn triples(&self) -> &[(usize, usize, usize)] {
        &self.triples
    }

    /// Images of every `u_q ⊗ v_q` under every basis map: entry
    /// `[q][p·d + k]` is coordinate `k` of `π_p(u_q ⊗ v_q)`.
    pub fn apply_pairs(&self, pairs: &[(&CVector, &CVector)]) -> CMatrix {
        let d = self.dim;
        let outer = CMatrix::from_fn(pairs.len(), d * d, |q, ij| pairs[q].0[ij / d] * pairs[q].1[ij % d]);
        outer * &self.stacked
    }
}

/// Basis of all G-homomorphisms `M⊗M → M`.
///
/// The Reynolds projector preserves the block triple `(a, b, c)` of an
/// elementary map, so it is applied triple by triple as
/// `(1/|G|) Σ_g conj(ρ_a(g)) ⊗ conj(ρ_b(g)) ⊗ ρ_c(g)`. Each triple's rank is
/// checked against its Clebsch–Gordan multiplicity.
pub fn hom_basis(module: &ModuleM, table: &CharacterTable, tol: f64) -> Result<IntertwinerBasis> {
    let d = module.total_dim();
    let blocks = module.block_count();
    let n = module.actions().len() as f64;
    let mut maps = Vec::new();
    let mut triples = Vec::new();
    let mut expected_total = 0;
    for a in 0..blocks {
        for b in 0..blocks {
            for c in 0..blocks {
                let expected = cg_multiplicity(table, a, b, c)?;
                expected_total += expected;
                let (ra, rb, rc) = (&module.irreps()[a], &module.irreps()[b], &module.irreps()[c]);
                let local = ra.dim * rb.dim * rc.dim;
                let mut proj = CMatrix::zeros(local, local);
                for g in 0..ra.matrices.len() {
                    let ab = ra.matrices[g].conjugate().kronecker(&rb.matrices[g].conjugate());
                    proj += ab.kronecker(&rc.matrices[g]);
                }
                proj.unscale_mut(n);
                let span = Subspace::column_span(&proj, tol)?;
                if span.dim() != expected {
                    log::error!("triple ({a},{b},{c}): Reynolds rank {} vs multiplicity {expected}", span.dim());
                }
                let (oa, ob, oc) = (module.offsets()[a], module.offsets()[b], module.offsets()[c]);
                for col in span.basis().column_iter() {
                    let mut tensor = vec![ZERO; d * d * d];
                    for i in 0..ra.dim {
                        for j in 0..rb.dim {
                            for k in 0..rc.dim {
                                tensor[((oa + i) * d + ob + j) * d + oc + k] = col[(i * rb.dim + j) * rc.dim + k];
                            }
                        }
                    }
                    maps.push(Intertwiner { dim: d, tensor });
                    triples.push((a, b, c));
                }
            }
        }
    }
    if maps.len() != expected_total {
        return Err(Error::DimensionMismatchWithCharacterCount {
            expected: expected_total,
            found: maps.len(),
        });
    }
    let stacked = CMatrix::from_fn(d * d, maps.len() * d, |ij, pk| maps[pk / d].tensor[ij * d + pk % d]);
    Ok(IntertwinerBasis {
        dim: d,
        maps,
        triples,
        stacked,
    })
}

/// `dim Hom_G(M_a ⊗ M_b, M_c) = (1/|G|) Σ_g χ_a(g) χ_b(g) conj(χ_c(g))`.
pub fn cg_multiplicity(table: &CharacterTable, a: usize, b: usize, c: usize) -> Result<usize> {
    let (ra, rb, rc) = (table.row(a), table.row(b), table.row(c));
    let total: C64 = table
        .class_sizes()
        .iter()
        .enumerate()
        .map(|(k, &size)| ra[k] * rb[k] * rc[k].conj() * size as f64)
        .sum();
    let avg = total / table.group_order() as f64;
    let rounded = avg.re.round();
    if (avg - C64::new(rounded, 0.0)).norm() > 1e-6 || rounded < 0.0 {
        return Err(Error::NotAnInteger {
            what: "Clebsch–Gordan multiplicity",
            value: avg.re,
        });
    }
    Ok(rounded as usize)
}

/// `Σ_{a,b,c} cg_multiplicity(a, b, c)`, the expected size of [`hom_basis`].
pub fn character_hom_count(table: &CharacterTable) -> Result<usize> {
    let n = table.len();
    let mut total = 0;
    for a in 0..n {
        for b in 0..n {
            for c in 0..n {
                total += cg_multiplicity(table, a, b, c)?;
            }
        }
    }
    Ok(total)
}

/// Largest deviation of the basis Gram matrix from the identity.
pub fn basis_gram_error(basis: &IntertwinerBasis) -> f64 {
    let m = basis.len();
    let gram = CMatrix::from_fn(m, m, |p, q| {
        basis.maps[p]
            .tensor
            .iter()
            .zip(&basis.maps[q].tensor)
            .map(|(x, y)| x.conj() * y)
            .sum()
    });
    max_abs(&(gram - CMatrix::identity(m, m)))
}
