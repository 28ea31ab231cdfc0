use quasimap_gmt::fixtures;
use quasimap_gmt::gmt::{enumerate_terms, evaluate_rhs, solve_gw_from_w, solve_w_from_gw, verify_identity, KeyDomain};
use quasimap_gmt::scalar::{int, ratio};
use quasimap_gmt::{GwKey, InsertionMultiset, InvariantKey, InvariantTable, TableKind, WKey};

fn ms(e: &[u32]) -> InsertionMultiset {
    InsertionMultiset::from_exponents(e.iter().copied())
}

#[test]
fn octic_degree_one_terms() {
    let ctx = fixtures::octic_context();
    let terms = enumerate_terms(&WKey::new(ctx, 2, 2, ms(&[2]), 1)).unwrap();
    assert_eq!(terms.len(), 2);
    assert_eq!(terms[0].gw_factor, Some(GwKey::new(ctx, ms(&[2, 2, 2]), 1)));
    assert_eq!(terms[1].w_factors, vec![WKey::new(ctx, 4, 0, ms(&[2]), 1)]);
}

#[test]
fn octic_degree_two_terms() {
    let ctx = fixtures::octic_context();
    let terms = enumerate_terms(&WKey::new(ctx, 2, 2, ms(&[2]), 2)).unwrap();
    assert_eq!(terms.len(), 4);
    let middle: Vec<_> = terms.iter().filter(|t| t.g == 1).collect();
    assert_eq!(middle.len(), 2);
    // free insertion with e = 1, or absorbed insertion with e = 2
    let free = middle.iter().find(|t| t.absorbed().is_empty()).unwrap();
    assert_eq!(free.e, vec![1]);
    assert_eq!(free.w_factors, vec![WKey::new(ctx, 5, 0, ms(&[]), 1)]);
    let absorbed = middle.iter().find(|t| !t.absorbed().is_empty()).unwrap();
    assert_eq!(absorbed.e, vec![2]);
    assert_eq!(absorbed.w_factors, vec![WKey::new(ctx, 4, 0, ms(&[2]), 1)]);
    for t in &middle {
        assert_eq!(t.scalar, ratio(1, 8));
    }
}

#[test]
fn cp2_single_insertion_has_only_the_gw_term() {
    let terms = enumerate_terms(&WKey::new(fixtures::cp2_context(), 1, 2, ms(&[2]), 1)).unwrap();
    assert_eq!(terms.len(), 1);
    assert_eq!(terms[0].g, 0);
}

#[test]
fn fixture_values() {
    let (gw, w) = (fixtures::octic_gw(), fixtures::octic_w());
    let ctx = w.context();
    assert_eq!(evaluate_rhs(&WKey::new(ctx, 2, 2, ms(&[2]), 1), &gw, &w).unwrap(), int(83871744));
    assert_eq!(evaluate_rhs(&WKey::new(ctx, 2, 2, ms(&[2]), 2), &gw, &w).unwrap(), int(1238948617930752));
    let ctx = fixtures::cp2_context();
    let v = evaluate_rhs(&WKey::new(ctx, 1, 1, ms(&[2, 2]), 1), &fixtures::cp2_gw(), &fixtures::cp2_w()).unwrap();
    assert_eq!(v, int(2));
}

#[test]
fn every_fixture_identity_holds() {
    for (gw, w) in [(fixtures::cp2_gw(), fixtures::cp2_w()), (fixtures::octic_gw(), fixtures::octic_w())] {
        for (key, _) in w.w_entries() {
            let r = verify_identity(key, &gw, &w).unwrap();
            assert!(r.equal, "{r}");
        }
    }
}

#[test]
fn perturbed_fixtures_fail() {
    let gw = fixtures::octic_gw();
    let key = WKey::new(gw.context(), 2, 2, ms(&[2]), 2);
    let w = fixtures::octic_w();
    for (tampered, _) in w.w_entries() {
        let mut t = InvariantTable::new(TableKind::W, w.context());
        for (k, v) in w.w_entries() {
            let v = if k == tampered { v + int(1) } else { v.clone() };
            t.insert(k.clone(), v).unwrap();
        }
        let r = verify_identity(&key, &gw, &t).unwrap();
        let used = tampered == &key || r.terms.iter().any(|tv| tv.term.w_factors.contains(tampered));
        assert_eq!(r.equal, !used, "{tampered}");
    }
}

#[test]
fn gw_from_w_examples() {
    let w = fixtures::octic_w();
    let ctx = w.context();
    let gw = solve_gw_from_w(&w, &KeyDomain::from_profiles(ctx, &[(2, 2, ms(&[2]))], 1)).unwrap();
    assert_eq!(gw.len(), 1);
    assert_eq!(gw.lookup_gw(&GwKey::new(ctx, ms(&[2, 2, 2]), 1)).unwrap(), int(59021312));

    let w = fixtures::cp2_w();
    let ctx = w.context();
    let gw = solve_gw_from_w(&w, &KeyDomain::from_profiles(ctx, &[(1, 1, ms(&[2, 2]))], 1)).unwrap();
    assert_eq!(gw.lookup_gw(&GwKey::new(ctx, ms(&[1, 1, 2, 2]), 1)).unwrap(), int(1));
}

#[test]
fn gw_from_w_reports_open_frontier() {
    // the d = 2 key needs <2,2,2>_1, which a d = 2 only domain does not fix
    let w = fixtures::octic_w();
    let key = WKey::new(w.context(), 2, 2, ms(&[2]), 2);
    let err = solve_gw_from_w(&w, &KeyDomain::from_keys([key])).unwrap_err();
    assert!(matches!(err, quasimap_gmt::Error::DomainNotClosed(ref keys) if keys == &["<2,2,2>_1"]), "{err}");
}

#[test]
fn w_from_gw_example() {
    let gw = fixtures::octic_gw();
    let ctx = gw.context();
    let mut mirror = InvariantTable::new(TableKind::W, ctx);
    mirror.insert(WKey::new(ctx, 4, 0, ms(&[2]), 1), int(24850432)).unwrap();
    let w = solve_w_from_gw(&gw, &mirror, &KeyDomain::from_profiles(ctx, &[(2, 2, ms(&[2]))], 1)).unwrap();
    let key = InvariantKey::W(WKey::new(ctx, 2, 2, ms(&[2]), 1));
    assert_eq!(w.get(&key), Some(&int(83871744)));
}

#[test]
fn w_from_gw_reproduces_octic_degree_two() {
    let gw = fixtures::octic_gw();
    let ctx = gw.context();
    let w = solve_w_from_gw(
        &gw,
        &fixtures::octic_w().b0_slice(),
        &KeyDomain::from_profiles(ctx, &[(2, 2, ms(&[2]))], 2),
    )
    .unwrap();
    assert_eq!(w.lookup_w(&WKey::new(ctx, 2, 2, ms(&[2]), 2)).unwrap(), int(1238948617930752));
}
