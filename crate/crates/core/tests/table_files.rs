use quasimap_gmt::fixtures;
use quasimap_gmt::invariants::{load_table, parse_table, render_table, store_table};
use quasimap_gmt::{Error, TableKind};

#[test]
fn fixtures_round_trip_through_files() {
    let dir = tempfile::tempdir().unwrap();
    for (name, table) in fixtures::all() {
        let path = dir.path().join(name);
        store_table(&table, &path).unwrap();
        let loaded = load_table(&path).unwrap();
        assert_eq!(loaded, table, "{name}");
        assert_eq!(render_table(&loaded), std::fs::read_to_string(&path).unwrap());
    }
}

#[test]
fn octic_fixture_sizes() {
    let sizes: Vec<(&str, usize)> = fixtures::all().iter().map(|(n, t)| (*n, t.len())).collect();
    assert!(sizes.contains(&("octic.w.json", 5)));
    assert!(sizes.contains(&("octic.gw.json", 2)));
    assert_eq!(sizes.iter().filter(|(n, _)| n.starts_with("octic")).map(|(_, s)| s).sum::<usize>(), 7);
}

#[test]
fn empty_table_file() {
    let t = parse_table(r#"{"kind": "W", "N": 5, "k": 5, "entries": []}"#).unwrap();
    assert!(t.is_empty());
    assert_eq!(t.kind(), TableKind::W);
}

#[test]
fn selection_violation_is_rejected() {
    let text = r#"{"kind": "W", "N": 8, "k": 8, "entries": [
        {"a": 2, "b": 2, "insertions": [3], "d": 1, "value": "1"}
    ]}"#;
    assert!(matches!(parse_table(text), Err(Error::Rejected(_))));
}

#[test]
fn missing_file_is_io_error() {
    let err = load_table("/nonexistent/table.json").unwrap_err();
    assert!(matches!(err, Error::Io { .. }));
    assert!(!err.is_validation());
}
