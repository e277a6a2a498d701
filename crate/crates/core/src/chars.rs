//! Irreducible characters by Burnside's class-sum method, and the central
//! idempotents of the group algebra.
//!
//! Left multiplication by a class sum preserves the centre of `CG`. In the
//! orthonormal basis `C_c / √|K_c|` of the centre these operators are normal
//! and commute, and their common eigenvectors are the central idempotents.
//! A random combination `A` gives the Hermitian `A + A*`, whose (generically
//! simple) eigenvectors are read back as character rows.

use std::cmp::Ordering;

use crate::error::{Error, Result};
use crate::group::{ConjClasses, Group};
use crate::linalg::{hermitian_eigensplit, max_abs, random_complex, CMatrix, CVector, RngSeed, C64, ZERO};

const SPLIT_ATTEMPTS: u64 = 8;
/// Internal stream id, keeps the character-table draws apart from other consumers.
const CHAR_STREAM: u64 = 0x0c4a;

#[derive(Clone, Debug)]
pub struct CharacterTable {
    classes: ConjClasses,
    class_sizes: Vec<usize>,
    group_order: usize,
    /// `chars[r][c]` is the value of row `r` on class `c`.
    chars: Vec<Vec<C64>>,
    degrees: Vec<usize>,
}

impl CharacterTable {
    pub fn classes(&self) -> &ConjClasses {
        &self.classes
    }

    pub fn class_sizes(&self) -> &[usize] {
        &self.class_sizes
    }

    pub fn group_order(&self) -> usize {
        self.group_order
    }

    pub fn rows(&self) -> &[Vec<C64>] {
        &self.chars
    }

    pub fn row(&self, r: usize) -> &[C64] {
        &self.chars[r]
    }

    pub fn degrees(&self) -> &[usize] {
        &self.degrees
    }

    pub fn len(&self) -> usize {
        self.chars.len()
    }

    pub fn is_empty(&self) -> bool {
        self.chars.is_empty()
    }

    pub fn trivial_row(&self) -> usize {
        0
    }

    /// `χ_r(g)` for an element index.
    pub fn value(&self, r: usize, g: usize) -> C64 {
        self.chars[r][self.classes.class_of[g]]
    }

    /// Largest deviation of `Σ_c |K_c| χ_r(c) conj(χ_s(c))` from `|G| δ_rs`.
    pub fn row_orthogonality_error(&self) -> f64 {
        let n = self.len();
        let mut worst: f64 = 0.0;
        for r in 0..n {
            for s in 0..n {
                let ip: C64 = (0..n)
                    .map(|c| self.chars[r][c] * self.chars[s][c].conj() * self.class_sizes[c] as f64)
                    .sum();
                let target = if r == s { self.group_order as f64 } else { 0.0 };
                worst = worst.max((ip - target).norm());
            }
        }
        worst
    }

    /// Largest deviation of `Σ_r χ_r(c) conj(χ_r(c'))` from `(|G|/|K_c|) δ_cc'`.
    pub fn column_orthogonality_error(&self) -> f64 {
        let n = self.len();
        let mut worst: f64 = 0.0;
        for c in 0..n {
            for d in 0..n {
                let ip: C64 = (0..n).map(|r| self.chars[r][c] * self.chars[r][d].conj()).sum();
                let target = if c == d {
                    self.group_order as f64 / self.class_sizes[c] as f64
                } else {
                    0.0
                };
                worst = worst.max((ip - target).norm());
            }
        }
        worst
    }
}

/// Structure constants `a[j][c][k] = #{x ∈ K_j : x⁻¹·g_k ∈ K_c}`, so that
/// `C_j C_c = Σ_k a[j][c][k] C_k`.
fn class_structure_constants(group: &Group, classes: &ConjClasses) -> Vec<Vec<Vec<usize>>> {
    let k = classes.len();
    let mut a = vec![vec![vec![0usize; k]; k]; k];
    for (kk, &gk) in classes.representatives.iter().enumerate() {
        for x in 0..group.order() {
            let j = classes.class_of[x];
            let c = classes.class_of[group.mul(group.inv(x), gk)];
            a[j][c][kk] += 1;
        }
    }
    a
}

/// Multiplication by each class sum on the centre, in the orthonormal
/// basis of normalized class sums.
fn class_sum_operators(group: &Group, classes: &ConjClasses) -> Vec<CMatrix> {
    let a = class_structure_constants(group, classes);
    let k = classes.len();
    let sizes: Vec<f64> = classes.sizes().iter().map(|&s| (s as f64).sqrt()).collect();
    (0..k)
        .map(|j| CMatrix::from_fn(k, k, |kk, c| C64::new(a[j][c][kk] as f64 * sizes[kk] / sizes[c], 0.0)))
        .collect()
}

/// Orders two rows by degree, then by descending (re, im) values class by
/// class. Values within 1e-6 compare equal.
fn row_order(da: usize, a: &[C64], db: usize, b: &[C64]) -> Ordering {
    const EPS: f64 = 1e-6;
    let cmp = |x: f64, y: f64| {
        if (x - y).abs() <= EPS {
            Ordering::Equal
        } else {
            y.partial_cmp(&x).unwrap_or(Ordering::Equal)
        }
    };
    da.cmp(&db).then_with(|| {
        a.iter()
            .zip(b)
            .map(|(x, y)| cmp(x.re, y.re).then(cmp(x.im, y.im)))
            .find(|o| *o != Ordering::Equal)
            .unwrap_or(Ordering::Equal)
    })
}

pub fn character_table(group: &Group, classes: &ConjClasses, tol: f64) -> Result<CharacterTable> {
    let k = classes.len();
    let order = group.order();
    let sizes = classes.sizes();
    let ops = class_sum_operators(group, classes);

    'attempt: for attempt in 0..SPLIT_ATTEMPTS {
        let mut rng = RngSeed(attempt).rng(CHAR_STREAM);
        let mut combo = CMatrix::zeros(k, k);
        for op in &ops {
            let z = random_complex(&mut rng);
            combo += op * z;
        }
        let herm = &combo + combo.adjoint();
        let split = hermitian_eigensplit(&herm, tol)?;
        if split.len() != k || split.iter().any(|c| c.space.dim() != 1) {
            log::debug!("class-sum split attempt {attempt} degenerate");
            continue;
        }

        let mut rows: Vec<(usize, Vec<C64>)> = Vec::with_capacity(k);
        for cluster in &split {
            let v: CVector = cluster.space.basis().column(0).into_owned();
            for op in &ops {
                let lambda = v.dotc(&(op * &v));
                let residual = (op * &v - &v * lambda).norm();
                if residual > tol * max_abs(op).max(1.0) {
                    log::debug!("attempt {attempt}: eigenvector not common to all class sums");
                    continue 'attempt;
                }
            }
            let phase = v[0] / v[0].norm();
            let scale = (order as f64).sqrt();
            let mut row: Vec<C64> = (0..k)
                .map(|c| v[c].conj() * phase * scale / (sizes[c] as f64).sqrt())
                .collect();
            let raw = row[0].re;
            let degree = raw.round();
            if (raw - degree).abs() > 1e-6 || degree < 1.0 {
                return Err(Error::NotAnInteger {
                    what: "character degree",
                    value: raw,
                });
            }
            row[0] = C64::new(degree, 0.0);
            rows.push((degree as usize, row));
        }
        rows.sort_by(|(da, a), (db, b)| row_order(*da, a, *db, b));

        let table = CharacterTable {
            classes: classes.clone(),
            class_sizes: sizes.clone(),
            group_order: order,
            degrees: rows.iter().map(|(d, _)| *d).collect(),
            chars: rows.into_iter().map(|(_, r)| r).collect(),
        };
        let square_sum: usize = table.degrees.iter().map(|d| d * d).sum();
        let trivial_ok = table.chars[0].iter().all(|z| (z - C64::new(1.0, 0.0)).norm() <= tol);
        if square_sum != order || !trivial_ok || table.row_orthogonality_error() > tol * order as f64 {
            log::debug!("attempt {attempt}: table failed certification");
            continue;
        }
        return Ok(table);
    }
    Err(Error::SplitFailure {
        expected: k,
        attempts: SPLIT_ATTEMPTS as usize,
    })
}

/// `e_χ = (χ(1)/|G|) Σ_g conj(χ(g)) g`, one coefficient per element.
#[derive(Clone, Debug)]
pub struct CentralIdempotent {
    pub chi_index: usize,
    pub coeffs: Vec<C64>,
}

pub fn central_idempotents(group: &Group, table: &CharacterTable) -> Vec<CentralIdempotent> {
    let order = group.order() as f64;
    (0..table.len())
        .map(|r| {
            let d = table.degrees()[r] as f64;
            let coeffs = (0..group.order())
                .map(|g| table.value(r, g).conj() * (d / order))
                .collect();
            CentralIdempotent { chi_index: r, coeffs }
        })
        .collect()
}

/// Group-algebra product: `(a * b)(x) = Σ_g a(g) b(g⁻¹x)`.
pub fn convolve(group: &Group, a: &[C64], b: &[C64]) -> Vec<C64> {
    let n = group.order();
    let mut out = vec![ZERO; n];
    for (g, &ag) in a.iter().enumerate() {
        if ag == ZERO {
            continue;
        }
        for (h, &bh) in b.iter().enumerate() {
            out[group.mul(g, h)] += ag * bh;
        }
    }
    out
}
