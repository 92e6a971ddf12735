//! Re-reading an exported trajectory reproduces the exported metrics byte for
//! byte.

use std::fs;
use std::path::Path;

use stmr_core::analysis::compute_metrics;
use stmr_core::controllers::ControllerKind;
use stmr_core::engine::{run, ScenarioConfig};
use stmr_sim::export::{header_line, read_trajectory, write_bundle, write_metrics};
use stmr_sim::load_scenario;

fn recompute(dir: &Path) -> Vec<u8> {
    let cfg = load_scenario(&dir.join("resolved_config.toml")).unwrap();
    let log = read_trajectory(fs::File::open(dir.join("trajectory.csv")).unwrap(), cfg.dt).unwrap();
    let metrics = compute_metrics(&cfg.controller, cfg.r_min, &cfg.reactive_mask(), &log);
    let mut buf = Vec::new();
    write_metrics(&mut buf, &header_line(&cfg), &metrics).unwrap();
    buf
}

#[test]
fn metrics_are_reproduced_from_the_trajectory_file() {
    for kind in [
        ControllerKind::StmrPurePursuit,
        ControllerKind::StmrMotionCamouflage,
        ControllerKind::Vicsek,
        ControllerKind::CuckerSmale,
        ControllerKind::Wfi,
    ] {
        let mut cfg = ScenarioConfig::reference_preset(17);
        cfg.duration = 10.0;
        cfg.controller.kind = kind;
        let out = run(&cfg).unwrap();
        let tmp = tempfile::tempdir().unwrap();
        write_bundle(tmp.path(), &cfg, &out).unwrap();
        let exported = fs::read(tmp.path().join("metrics.csv")).unwrap();
        assert_eq!(recompute(tmp.path()), exported, "{kind:?}");
    }
}

#[test]
fn trajectory_file_parses_back_to_the_run() {
    let mut cfg = ScenarioConfig::reference_preset(2);
    cfg.duration = 3.0;
    let out = run(&cfg).unwrap();
    let tmp = tempfile::tempdir().unwrap();
    write_bundle(tmp.path(), &cfg, &out).unwrap();
    let log = read_trajectory(
        fs::File::open(tmp.path().join("trajectory.csv")).unwrap(),
        cfg.dt,
    )
    .unwrap();
    assert_eq!(log, out.trajectory);
}
