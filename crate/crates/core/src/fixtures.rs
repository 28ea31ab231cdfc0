//! The CP² (`N = 4, k = 1`) and octic (`N = k = 8`) example tables.

use crate::invariants::{Context, GwKey, InsertionMultiset, InvariantTable, TableKind, WKey};
use crate::scalar::{self, Scalar};

fn ms(e: &[u32]) -> InsertionMultiset {
    InsertionMultiset::from_exponents(e.iter().copied())
}

fn val(s: &str) -> Scalar {
    scalar::parse(s).expect("fixture value")
}

pub fn cp2_context() -> Context {
    Context::new(4, 1).expect("valid context")
}

pub fn octic_context() -> Context {
    Context::new(8, 8).expect("valid context")
}

/// `w(h,h^2|h^2)_1 = 1`, `w(h,h|h^2,h^2)_1 = 2`, `w(h^2,1|h^2,h^2)_1 = 1`,
/// `w(h^2,h^2)_1 = 1`.
pub fn cp2_w() -> InvariantTable {
    let ctx = cp2_context();
    let mut t = InvariantTable::new(TableKind::W, ctx);
    for (a, b, ins, d, v) in [
        (2, 1, &[2][..], 1, "1"),
        (1, 1, &[2, 2][..], 1, "2"),
        (2, 0, &[2, 2][..], 1, "1"),
        (2, 2, &[][..], 1, "1"),
    ] {
        t.insert(WKey::new(ctx, a, b, ms(ins), d), val(v)).expect("fixture entry");
    }
    t
}

/// `<h^2,h^2>_1 = 1` (the reduced form of `<h,h^2,h^2>_1` and `<h,h,h^2,h^2>_1`).
pub fn cp2_gw() -> InvariantTable {
    let ctx = cp2_context();
    let mut t = InvariantTable::new(TableKind::Gw, ctx);
    t.insert(GwKey::new(ctx, ms(&[2, 2]), 1), val("1")).expect("fixture entry");
    t
}

pub fn octic_w() -> InvariantTable {
    let ctx = octic_context();
    let mut t = InvariantTable::new(TableKind::W, ctx);
    for (a, b, ins, d, v) in [
        (2, 2, &[2][..], 1, "83871744"),
        (2, 2, &[2][..], 2, "1238948617930752"),
        (4, 0, &[2][..], 1, "24850432"),
        (4, 0, &[2][..], 2, "201251978293248"),
        (5, 0, &[][..], 1, "4432896"),
    ] {
        t.insert(WKey::new(ctx, a, b, ms(ins), d), val(v)).expect("fixture entry");
    }
    t
}

pub fn octic_gw() -> InvariantTable {
    let ctx = octic_context();
    let mut t = InvariantTable::new(TableKind::Gw, ctx);
    t.insert(GwKey::new(ctx, ms(&[2, 2, 2]), 1), val("59021312")).expect("fixture entry");
    t.insert(GwKey::new(ctx, ms(&[2, 2, 2]), 2), val("821654084851712")).expect("fixture entry");
    t
}

/// `(file name, table)` for every bundled fixture.
pub fn all() -> Vec<(&'static str, InvariantTable)> {
    vec![
        ("cp2.w.json", cp2_w()),
        ("cp2.gw.json", cp2_gw()),
        ("octic.w.json", octic_w()),
        ("octic.gw.json", octic_gw()),
    ]
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fixtures_build() {
        assert_eq!(cp2_w().len(), 4);
        assert_eq!(cp2_gw().len(), 1);
        assert_eq!(octic_w().len(), 5);
        assert_eq!(octic_gw().len(), 2);
    }
}
