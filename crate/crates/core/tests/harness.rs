use std::collections::BTreeMap;

use gradelab::harness::{read_rows, rows_to_csv, run_sweep, HEADER};
use gradelab::{figure_config, reproduce, ExperimentConfig, FigureId};

fn small(id: FigureId) -> ExperimentConfig {
    let mut c = figure_config(id, 4);
    c.n = 300;
    c
}

#[test]
fn fig1a_has_six_series_of_eleven_points() {
    let rows = run_sweep(&small(FigureId::Fig1a)).unwrap();
    let mut series: BTreeMap<String, Vec<f64>> = BTreeMap::new();
    for r in &rows {
        series.entry(r.scheme.clone()).or_default().push(r.alpha_m);
    }
    assert_eq!(series.len(), 6);
    for xs in series.values() {
        assert_eq!(xs.len(), 11);
    }
    assert!(rows.iter().all(|r| r.r == 2 && r.mu == Some(65.0) && r.sigma == Some(12.0)));
}

#[test]
fn reproduce_writes_config_and_csv() {
    let dir = tempfile::tempdir().unwrap();
    let mut paths = Vec::new();
    for seed in [9, 9] {
        let path = reproduce(FigureId::Fig1c, dir.path(), seed).unwrap();
        paths.push(std::fs::read_to_string(&path).unwrap());
    }
    assert_eq!(paths[0], paths[1]);
    let text = &paths[0];
    assert_eq!(text.lines().next().unwrap(), HEADER.join(","));
    let rows = read_rows(text.as_bytes()).unwrap();
    assert_eq!(rows.len(), 6 * 20);
    assert_eq!(&rows_to_csv(&rows), text);

    let config = std::fs::read_to_string(dir.path().join("fig1c.config.json")).unwrap();
    let parsed = ExperimentConfig::from_json(&config).unwrap();
    assert_eq!(parsed, figure_config(FigureId::Fig1c, 9));
}

#[test]
fn csv_does_not_depend_on_thread_count() {
    let config = small(FigureId::Fig4);
    let run = |threads| {
        rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build()
            .unwrap()
            .install(|| rows_to_csv(&run_sweep(&config).unwrap()))
    };
    assert_eq!(run(1), run(4));
}

#[test]
fn sweep_values_appear_in_display_scale() {
    let rows = run_sweep(&small(FigureId::Fig3)).unwrap();
    let sigmas: Vec<f64> = rows.iter().map(|r| r.sigma.unwrap()).collect();
    assert!((sigmas.iter().cloned().fold(f64::INFINITY, f64::min) - 4.0).abs() < 1e-9);
    assert!((sigmas.iter().cloned().fold(0.0, f64::max) - 24.0).abs() < 1e-9);
}
