use std::path::PathBuf;

use fundamental_tone::harness::{run_scenario, Kind, Scenario};

fn shipped() -> Vec<PathBuf> {
    let dir = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("scenarios");
    let mut paths: Vec<PathBuf> = std::fs::read_dir(dir)
        .unwrap()
        .map(|e| e.unwrap().path())
        .filter(|p| p.extension().is_some_and(|e| e == "toml"))
        .collect();
    paths.sort();
    paths
}

#[test]
fn every_shipped_scenario_succeeds() {
    let paths = shipped();
    assert!(paths.len() >= 8);
    for path in paths {
        let mut scenario = Scenario::from_file(&path, None).unwrap();
        // verification rows are checked at their shipped grid; others are cut down
        if scenario.kind != Kind::Verify {
            scenario.grid_m = scenario.grid_m.min(512);
        }
        let report = run_scenario(&scenario).unwrap();
        assert!(!report.rows.is_empty(), "{}", path.display());
        assert!(report.success(), "{}: {:#?}", path.display(), report.rows);
        if scenario.kind == Kind::Verify {
            assert!(report.rows.iter().all(|r| r.pass == Some(true)));
        }
    }
}
