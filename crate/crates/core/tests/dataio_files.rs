use std::path::{Path, PathBuf};

use hyperon::dataio::{
    bundled_parameters, emit_table, load_parameters, read_events, write_events, Format,
    EVENT_HEADER, REFERENCE_VALUES,
};
use hyperon::mc::{generate, Model, SampleConfig};
use hyperon::{Error, Vec3};

fn fixtures(kind: &str) -> Vec<PathBuf> {
    let dir = Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures").join(kind);
    let mut files: Vec<PathBuf> = std::fs::read_dir(dir)
        .unwrap()
        .map(|e| e.unwrap().path())
        .collect();
    files.sort();
    assert!(!files.is_empty());
    files
}

#[test]
fn every_malformed_parameter_file_is_located() {
    for path in fixtures("params") {
        match load_parameters(&path) {
            Err(Error::Parse { line, column, .. }) => assert!(line >= 1 && column >= 1, "{path:?}"),
            Err(Error::Invalid { row, .. }) => assert!(row >= 1, "{path:?}"),
            other => panic!("{path:?}: {other:?}"),
        }
    }
}

#[test]
fn every_malformed_event_file_is_located() {
    for path in fixtures("events") {
        match read_events(&path) {
            Err(Error::MalformedEvent { line, path: p, .. }) => {
                assert!(line >= 1, "{path:?}");
                assert!(p.ends_with(path.file_name().unwrap().to_str().unwrap()));
            }
            other => panic!("{path:?}: {other:?}"),
        }
    }
}

#[test]
fn truncated_event_file_names_last_good_id() {
    let path = Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures/events/truncated.csv");
    let err = read_events(&path).unwrap_err();
    assert!(matches!(err, Error::MalformedEvent { last_good: Some(0), line: 3, .. }));
    assert!(err.to_string().ends_with("last good event id: 0"), "{err}");
}

#[test]
fn parameter_file_round_trip_through_disk() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("p.csv");
    std::fs::write(&path, hyperon::dataio::BUNDLED_PARAMETERS).unwrap();
    assert_eq!(load_parameters(&path).unwrap(), bundled_parameters());
}

#[test]
fn missing_parameter_file_names_path() {
    let err = load_parameters("/no/such/params.csv").unwrap_err();
    assert!(err.to_string().contains("/no/such/params.csv"));
}

#[test]
fn table_json_matches_csv() {
    let report = emit_table(&bundled_parameters());
    let csv = report.render(Format::Csv);
    let json: serde_json::Value = serde_json::from_str(&report.render(Format::Json)).unwrap();
    let rows = json.as_array().unwrap();
    assert_eq!(rows.len(), REFERENCE_VALUES.len());
    for (line, obj) in csv.lines().skip(1).zip(rows) {
        let fields: Vec<&str> = line.split(',').collect();
        for (i, col) in ["branching", "alpha", "chi_sp_pi", "visibility", "predictability"].iter().enumerate() {
            let printed: f64 = fields[3 + i].parse().unwrap();
            assert_eq!(obj[*col].as_f64().unwrap(), printed, "{col}");
        }
    }
}

#[test]
fn thousand_events_round_trip() {
    let records = generate(&SampleConfig {
        seed: 5,
        events: 1000,
        model: Model::Single {
            channel: "Lambda -> p pi-".into(),
            params: bundled_parameters().find("Lambda").unwrap().params,
            polarization: Vec3::new(0.0, 0.0, 0.8),
        },
        workers: None,
    })
    .unwrap();
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("ev.csv");
    write_events(&path, &records).unwrap();
    let text = std::fs::read_to_string(&path).unwrap();
    assert_eq!(text.lines().next().unwrap(), EVENT_HEADER.join(","));
    let back = read_events(&path).unwrap();
    assert_eq!(back.len(), 1000);
    for (a, b) in records.iter().zip(&back) {
        assert_eq!(a.event_id, b.event_id);
        assert!((a.n - b.n).amax() < 1e-9);
    }
}

#[test]
fn header_only_event_file_is_empty() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("ev.csv");
    std::fs::write(&path, format!("{}\n", EVENT_HEADER.join(","))).unwrap();
    assert!(read_events(&path).unwrap().is_empty());
}
