//! The desk-scale groups used throughout tests, benches and the bundled
//! group files.

use crate::group::{Group, Perm};

fn build(degree: usize, gens: &[&[usize]]) -> Group {
    let gens = gens
        .iter()
        .map(|g| Perm::new(g.to_vec()).expect("valid permutation"))
        .collect();
    Group::from_generators(degree, gens).expect("suite group")
}

pub fn trivial() -> Group {
    build(1, &[&[0]])
}

/// Cyclic group of order `n` acting regularly on `n` points.
pub fn cyclic(n: usize) -> Group {
    let shift: Vec<usize> = (0..n).map(|i| (i + 1) % n).collect();
    build(n, &[&shift])
}

pub fn c2() -> Group {
    cyclic(2)
}

pub fn c6() -> Group {
    cyclic(6)
}

pub fn s3() -> Group {
    build(3, &[&[1, 0, 2], &[1, 2, 0]])
}

/// Symmetries of a square on its corners.
pub fn d4() -> Group {
    build(4, &[&[1, 2, 3, 0], &[2, 1, 0, 3]])
}

/// Quaternion group in its left regular action, with points
/// `1, −1, i, −i, j, −j, k, −k`.
pub fn q8() -> Group {
    build(8, &[&[2, 3, 1, 0, 6, 7, 5, 4], &[4, 5, 7, 6, 1, 0, 2, 3]])
}

pub fn a4() -> Group {
    build(4, &[&[1, 2, 0, 3], &[1, 0, 3, 2]])
}

pub fn s4() -> Group {
    build(4, &[&[1, 0, 2, 3], &[1, 2, 3, 0]])
}

/// The acceptance suite in canonical order.
pub fn all() -> Vec<(&'static str, Group)> {
    vec![
        ("C2", c2()),
        ("C6", c6()),
        ("S3", s3()),
        ("D4", d4()),
        ("Q8", q8()),
        ("A4", a4()),
        ("S4", s4()),
    ]
}

pub fn by_name(name: &str) -> Option<Group> {
    match name.to_ascii_uppercase().as_str() {
        "TRIVIAL" | "C1" => Some(trivial()),
        "C2" => Some(c2()),
        "C6" => Some(c6()),
        "S3" => Some(s3()),
        "D4" => Some(d4()),
        "Q8" => Some(q8()),
        "A4" => Some(a4()),
        "S4" => Some(s4()),
        _ => None,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn orders() {
        let orders: Vec<usize> = all().iter().map(|(_, g)| g.order()).collect();
        assert_eq!(orders, vec![2, 6, 6, 8, 8, 12, 24]);
        assert_eq!(trivial().order(), 1);
    }

    #[test]
    fn q8_has_one_involution() {
        let q8 = q8();
        let involutions = (1..8).filter(|&g| q8.mul(g, g) == 0).count();
        assert_eq!(involutions, 1);
    }
}
