use std::path::Path;
use std::process::{Command, Output};

use coarse_lip::commands::{
    ComponentsReport, DecomposeReport, LambdaDistReport, MlCheckReport, NearestReport, ReconstructReport,
    RoughDistReport, ValidateReport,
};
use coarse_lip::formats::{FunctionFile, OracleDescriptor, SpaceFile};
use coarse_lip_core::ml::ReconstructionBounds;
use coarse_lip_core::scaling::ScalingReport;
use coarse_lip_core::{ExtReal, MapPair};
use serde::de::DeserializeOwned;
use serde::Serialize;
use tempfile::TempDir;

fn fixtures() -> TempDir {
    let dir = tempfile::tempdir().unwrap();
    let put = |name: &str, body: &str| std::fs::write(dir.path().join(name), body).unwrap();
    put("abc.json", r#"{"points": ["a", "b", "c"], "d": [[0, 1, 2], [1, 0, 1], [2, 1, 0]]}"#);
    put("split.json", r#"{"points": ["a", "b", "c"], "d": [[0, 1, "inf"], [1, 0, "inf"], ["inf", "inf", 0]]}"#);
    put("x.json", r#"{"points": ["p", "q"], "d": [[0, 2], [2, 0]]}"#);
    put("pair.json", r#"{"forward": [0, 2], "backward": [0, 0, 1]}"#);
    put("f.json", r#"{"space": "abc.json", "values": [0, 2, 2]}"#);
    put("g.json", r#"{"space": "abc.json", "values": [2, 1, 0]}"#);
    put("bad.json", r#"{"points": ["a", "b", "c"], "d": [[0, 1, 5], [1, 0, 1], [5, 1, 0]]}"#);
    put("broken.json", "{\"points\": [\"a\"],\n \"d\": [[0,]]}");
    dir
}

fn run(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_coarse-lip")).current_dir(dir).args(args).output().unwrap()
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

/// Runs in JSON mode, parses into `T` and checks the value re-serializes
/// to the same document.
fn round_trip<T: DeserializeOwned + Serialize + PartialEq + std::fmt::Debug>(dir: &Path, args: &[&str]) -> T {
    let mut full = vec!["--format", "json"];
    full.extend_from_slice(args);
    let out = run(dir, &full);
    assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    let text = stdout(&out);
    let value: T = serde_json::from_str(&text).unwrap();
    assert_eq!(serde_json::to_string_pretty(&value).unwrap(), text.trim_end());
    let again: T = serde_json::from_str(&serde_json::to_string(&value).unwrap()).unwrap();
    assert_eq!(again, value);
    value
}

#[test]
fn validate_reports_components() {
    let dir = fixtures();
    let out = run(dir.path(), &["validate", "abc.json"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout(&out), "valid, 1 component\n");
    let split = run(dir.path(), &["validate", "split.json"]);
    assert_eq!(stdout(&split), "valid, 2 components\n");
    let r: ValidateReport = round_trip(dir.path(), &["validate", "split.json"]);
    assert_eq!((r.points, r.components), (3, 2));
}

#[test]
fn lambda_dist_on_the_line() {
    let dir = fixtures();
    let out = run(dir.path(), &["lambda-dist", "abc.json", "a", "2", "b", "3"]);
    assert_eq!(stdout(&out), "2\n");
    let r: LambdaDistReport = round_trip(dir.path(), &["lambda-dist", "abc.json", "a", "inf", "c", "inf"]);
    assert_eq!(r.distance, ExtReal::ZERO);
}

#[test]
fn exit_codes() {
    let dir = fixtures();
    assert_eq!(run(dir.path(), &["validate", "bad.json"]).status.code(), Some(1));
    assert_eq!(run(dir.path(), &["validate", "missing.json"]).status.code(), Some(1));
    assert_eq!(run(dir.path(), &["lambda-dist", "abc.json", "z", "1", "a", "1"]).status.code(), Some(1));
    assert_eq!(run(dir.path(), &["no-such-command"]).status.code(), Some(2));
    assert_eq!(run(dir.path(), &["--tol", "0", "validate", "abc.json"]).status.code(), Some(2));
    assert_eq!(run(dir.path(), &["lambda-dist", "abc.json", "a", "-1", "b", "1"]).status.code(), Some(2));
}

#[test]
fn errors_are_structured() {
    let dir = fixtures();
    let out = run(dir.path(), &["--format", "json", "validate", "bad.json"]);
    let v: serde_json::Value = serde_json::from_slice(&out.stderr).unwrap();
    assert_eq!(v["error"]["kind"], "invalid-input");
    assert!(v["error"]["violations"][0].as_str().unwrap().contains("triangle"));

    let out = run(dir.path(), &["--format", "json", "validate", "broken.json"]);
    let v: serde_json::Value = serde_json::from_slice(&out.stderr).unwrap();
    assert_eq!(v["error"]["kind"], "parse");
    assert_eq!(v["error"]["line"], 2);
    assert!(v["error"]["path"].as_str().unwrap().ends_with("broken.json"));
}

#[test]
fn space_artifacts_round_trip() {
    let dir = fixtures();
    let cut: SpaceFile = round_trip(dir.path(), &["cutoff", "abc.json", "1.5"]);
    assert_eq!(cut.build(1e-9).unwrap().d(0, 2), ExtReal::new(1.5).unwrap());
    let scaled: SpaceFile = round_trip(dir.path(), &["scale", "split.json", "2"]);
    assert!(scaled.build(1e-9).unwrap().d(0, 2).is_inf());
    let c: ComponentsReport = round_trip(dir.path(), &["components", "split.json"]);
    assert_eq!(c.components, [vec!["a", "b"], vec!["c"]]);
}

#[test]
fn function_commands() {
    let dir = fixtures();
    let f: FunctionFile = round_trip(dir.path(), &["lipschitzise", "f.json", "--epsilon", "1"]);
    let expect: Vec<ExtReal> = [1.0, 2.0, 2.0].iter().map(|&v| ExtReal::new(v).unwrap()).collect();
    assert_eq!(f.values, expect);
    assert_eq!(run(dir.path(), &["lipschitzise", "f.json"]).status.code(), Some(1));

    let d: DecomposeReport = round_trip(dir.path(), &["lambda-decompose", "g.json"]);
    assert_eq!(d.cones.len(), 3);
    let n: NearestReport = round_trip(dir.path(), &["nearest-lambda", "g.json"]);
    assert_eq!((n.center.as_str(), n.distance), ("a", ExtReal::ZERO));
}

#[test]
fn oracle_pipeline() {
    let dir = fixtures();
    let r: RoughDistReport = round_trip(dir.path(), &["rough-dist", "x.json", "abc.json"]);
    assert_eq!(r.distance, ExtReal::new(1.0).unwrap());
    assert_eq!(r.defect.overall, r.distance);

    let desc: OracleDescriptor = round_trip(dir.path(), &["lift", "x.json", "abc.json", "pair.json"]);
    std::fs::write(dir.path().join("oracle.json"), serde_json::to_string(&desc).unwrap()).unwrap();

    let m: MlCheckReport = round_trip(dir.path(), &["ml-check", "oracle.json"]);
    assert_eq!(m.epsilon, 4.0);
    assert!(m.ok);
    let rec: ReconstructReport = round_trip(dir.path(), &["reconstruct", "oracle.json"]);
    assert!(rec.defect.ok);
    let t: ReconstructionBounds = round_trip(dir.path(), &["verify-thm2", "oracle.json", "--seed", "7"]);
    assert!(t.all_ok());
    assert_eq!(t.pair, rec.pair);
}

#[test]
fn perturbed_descriptor() {
    let dir = fixtures();
    let body = r#"{"kind": "perturbed-lifted", "x": "x.json", "y": "abc.json",
        "forward": [0, 2], "backward": [0, 0, 1], "perturbation": [0.5, 0]}"#;
    std::fs::write(dir.path().join("perturbed.json"), body).unwrap();
    let m: MlCheckReport = round_trip(dir.path(), &["ml-check", "perturbed.json"]);
    assert_eq!(m.epsilon, 6.0);
    assert!(m.ok);
}

#[test]
fn pair_files_reject_bad_shapes() {
    let dir = fixtures();
    std::fs::write(dir.path().join("short.json"), r#"{"forward": [0], "backward": [0, 0, 1]}"#).unwrap();
    let out = run(dir.path(), &["lift", "x.json", "abc.json", "short.json"]);
    assert_eq!(out.status.code(), Some(1));
    let p: MapPair = serde_json::from_str(r#"{"forward": [0, 2], "backward": [0, 0, 1]}"#).unwrap();
    assert_eq!(p, MapPair::new(vec![0, 2], vec![0, 0, 1]));
}

#[test]
fn scaling_report() {
    let dir = fixtures();
    let r: ScalingReport = round_trip(
        dir.path(),
        &["scaling-experiment", "--levels", "2,4,8", "--reference", "16", "--samples", "16"],
    );
    assert_eq!(r.levels.len(), 3);
    assert!(r.epsilon_decreasing && r.all_ok);
    let bad = run(dir.path(), &["scaling-experiment", "--levels", "4,2", "--reference", "8"]);
    assert_eq!(bad.status.code(), Some(1));
}
