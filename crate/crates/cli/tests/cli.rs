use std::path::PathBuf;
use std::process::Command;

use serde_json::Value;
use sponge::model::parse_template;
use sponge_cli::report::{from_text, to_text, CheckDoc, ConvergeDoc, DimensionDoc, ErrorDoc, SubsystemDoc, ValidateDoc};
use sponge_cli::run_args;

fn data(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../data").join(name).display().to_string()
}

fn sponge(args: &[&str]) -> (i32, String) {
    let out = run_args(std::iter::once("sponge").chain(args.iter().copied()));
    (out.code, out.stdout)
}

fn binary(args: &[&str]) -> (i32, Vec<u8>) {
    let out = Command::new(env!("CARGO_BIN_EXE_sponge")).args(args).output().expect("binary runs");
    (out.status.code().unwrap_or(-1), out.stdout)
}

fn round_trips<T>(text: &str)
where
    T: serde::Serialize + for<'de> serde::Deserialize<'de>,
{
    let doc: T = from_text(text).unwrap();
    assert_eq!(to_text(&doc), text);
}

#[test]
fn check_reproduces_example_flags() {
    let (code, text) = sponge(&["check", &data("phi1.json")]);
    assert_eq!(code, 0);
    let doc: CheckDoc = from_text(&text).unwrap();
    assert!(doc.baranski && !doc.strongly_baranski && doc.distinguishable);
    assert!(doc.irreducible && !doc.uniformly_irreducible);
    assert_eq!(doc.lg_sigma, Some(vec![2, 1]));
    round_trips::<CheckDoc>(&text);

    let doc: CheckDoc = from_text(&sponge(&["check", &data("phi2.json")]).1).unwrap();
    assert!(!doc.irreducible && doc.distinguishable);
    let doc: CheckDoc = from_text(&sponge(&["check", &data("phi3.json")]).1).unwrap();
    assert!(doc.uniformly_irreducible);
    let doc: CheckDoc = from_text(&sponge(&["check", &data("slg9.json")]).1).unwrap();
    assert_eq!(doc.diffuseness, "diffuse");
}

#[test]
fn check_with_measure_profile() {
    let (code, text) = sponge(&["check", &data("phi1.json"), "--measure", &data("phi1_skewed.weights.json")]);
    assert_eq!(code, 0);
    let doc: CheckDoc = from_text(&text).unwrap();
    let profile = doc.measure.expect("profile");
    assert_eq!(profile.ascending, vec![2, 1]);
    assert!(profile.good);
}

#[test]
fn missing_file_is_an_input_error() {
    let (code, text) = sponge(&["dims", "missing.json"]);
    assert_eq!(code, 1);
    let doc: ErrorDoc = from_text(&text).unwrap();
    assert_eq!(doc.error, "FileNotFound");
    let (code, stdout) = binary(&["dims", "missing.json"]);
    assert_eq!(code, 1);
    assert_eq!(String::from_utf8(stdout).unwrap(), text);
}

#[test]
fn bad_arguments_are_input_errors() {
    let (code, text) = sponge(&["bogus"]);
    assert_eq!(code, 1);
    assert_eq!(from_text::<ErrorDoc>(&text).unwrap().error, "MalformedInput");
    let (code, _) = sponge(&["subsystem", &data("phi1.json"), "--eps", "1.5", "-N", "4"]);
    assert_eq!(code, 1);
    let (code, _) = sponge(&["estimate", &data("phi1.json"), "--rho", "9:1x"]);
    assert_eq!(code, 1);
    assert_eq!(sponge(&["--help"]).0, 0);
}

#[test]
fn computation_failures_exit_with_two() {
    let (code, text) = sponge(&["subsystem", &data("phi3.json"), "--eps", "0.1", "-N", "12", "--cap", "1000"]);
    assert_eq!(code, 2);
    assert_eq!(from_text::<ErrorDoc>(&text).unwrap().error, "EnumerationCapExceeded");
    let (code, text) = sponge(&["subsystem", &data("square.json"), "--eps", "0.1", "-N", "2"]);
    assert_eq!(code, 2);
    assert_eq!(from_text::<ErrorDoc>(&text).unwrap().error, "HypothesesViolated");
}

#[test]
fn dyndim_is_deterministic() {
    let args = ["dyndim", &data("phi1.json"), "--seed", "7"];
    let (code, first) = binary(&args);
    assert_eq!(code, 0);
    assert_eq!(binary(&args).1, first);
    let doc: DimensionDoc = from_text(std::str::from_utf8(&first).unwrap()).unwrap();
    let dynamical = doc.dynamical_dimension.expect("dynamical dimension");
    assert!((dynamical.value - 1.3496838201955774).abs() < 1e-4);
}

#[test]
fn dims_reports_formulas() {
    let (code, text) = sponge(&["dims", &data("slg9.json")]);
    assert_eq!(code, 0);
    let doc: DimensionDoc = from_text(&text).unwrap();
    let expected = 3f64.ln() / 4f64.ln() + 3f64.ln() / 5f64.ln();
    assert!((doc.lower_assouad.unwrap() - expected).abs() < 1e-12);
    assert_eq!(doc.separation_constant.as_deref(), Some("1/8"));
    round_trips::<DimensionDoc>(&text);
    let (_, text) = sponge(&["dims", &data("square.json")]);
    let doc: DimensionDoc = from_text(&text).unwrap();
    assert!(doc.lower_assouad.is_none() && !doc.warnings.is_empty());
}

#[test]
fn validate_round_trips_the_template() {
    for name in ["phi1.json", "slg9.json", "cube.json", "separated_phi2.json"] {
        let (code, text) = sponge(&["validate", &data(name)]);
        assert_eq!(code, 0, "{name}");
        let doc: ValidateDoc = from_text(&text).unwrap();
        let original = parse_template(&std::fs::read_to_string(data(name)).unwrap()).unwrap();
        assert_eq!(parse_template(&doc.template.to_string()).unwrap(), original);
        round_trips::<ValidateDoc>(&text);
    }
}

#[test]
fn subsystem_emits_a_reusable_template() {
    let (code, text) = sponge(&["subsystem", &data("phi1.json"), "--eps", "0.2", "-N", "6"]);
    assert_eq!(code, 0);
    let doc: SubsystemDoc = from_text(&text).unwrap();
    assert_eq!(doc.s_size, 432);
    assert!((doc.delta_sum - 0.2869449564440135).abs() < 1e-12);
    let psi = parse_template(&doc.psi.to_string()).unwrap();
    assert_eq!(psi.num_digits(), doc.t0_size);
    round_trips::<SubsystemDoc>(&text);
}

#[test]
fn converge_lists_every_pair() {
    let (code, text) = sponge(&["converge", &data("phi3.json"), "--eps", "0.1,0.2", "-N", "2,4"]);
    assert_eq!(code, 0);
    let doc: ConvergeDoc = from_text(&text).unwrap();
    assert_eq!(doc.rows.len(), 4);
    round_trips::<ConvergeDoc>(&text);
}

#[test]
fn output_flag_writes_the_report() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("report.json");
    let (code, stdout) = sponge(&["check", &data("phi1.json"), "-o", path.to_str().unwrap()]);
    assert_eq!(code, 0);
    assert!(stdout.is_empty());
    assert_eq!(std::fs::read_to_string(&path).unwrap(), sponge(&["check", &data("phi1.json")]).1);
}

#[test]
fn render_writes_cells() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("phi1.svg");
    let (code, _) = sponge(&["render", &data("phi1.json"), "--out", out.to_str().unwrap()]);
    assert_eq!(code, 0);
    let svg = std::fs::read_to_string(&out).unwrap();
    assert_eq!(svg.matches("<rect x=").count() - 1, 3);
    let again = dir.path().join("again.svg");
    sponge(&["render", &data("phi1.json"), "--out", again.to_str().unwrap()]);
    assert_eq!(std::fs::read(&again).unwrap(), svg.as_bytes());

    let square = dir.path().join("square.svg");
    sponge(&["render", &data("square.json"), "--out", square.to_str().unwrap(), "--size", "120"]);
    let svg = std::fs::read_to_string(&square).unwrap();
    assert_eq!(svg.matches("<rect x=").count() - 1, 4);
    assert!(svg.contains(r#"width="120""#));
}

#[test]
fn estimate_with_csv_and_extras() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("counts.csv");
    let (code, text) = sponge(&[
        "estimate",
        &data("slg9.json"),
        "--points",
        "5000",
        "--centers",
        "4",
        "--rho",
        "1:4",
        "--beta",
        "2:4",
        "--csv",
        csv.to_str().unwrap(),
        "--witness-rho",
        "0.015625",
    ]);
    assert_eq!(code, 0, "{text}");
    let doc: Value = serde_json::from_str(&text).unwrap();
    assert_eq!(doc["source"], "template");
    assert_eq!(doc["witness"]["upper_triangular"], true);
    let table = std::fs::read_to_string(&csv).unwrap();
    assert_eq!(table.lines().next(), Some("center,rho,beta,count"));
    assert_eq!(table.lines().count(), 1 + 4 * 4 * 3);

    let (code, text) = sponge(&[
        "estimate",
        &data("separated_phi2.json"),
        "--points",
        "20000",
        "--centers",
        "4",
        "--rho",
        "1:4",
        "--beta",
        "2:4",
        "--flatness",
    ]);
    assert_eq!(code, 0, "{text}");
    let doc: Value = serde_json::from_str(&text).unwrap();
    assert_eq!(doc["flatness"]["passed"], true);
}
