//! Runs the binary on the example corpus and compares its output with the
//! files in `tests/golden`. Set `UPDATE_GOLDEN=1` to rewrite them.

use std::path::{Path, PathBuf};
use std::process::Command;

const BIN: &str = env!("CARGO_BIN_EXE_tropmod");
const TMP: &str = env!("CARGO_TARGET_TMPDIR");

fn manifest() -> &'static Path {
    Path::new(env!("CARGO_MANIFEST_DIR"))
}

fn updating() -> bool {
    std::env::var_os("UPDATE_GOLDEN").is_some_and(|v| v == "1")
}

fn compare(name: &str, actual: &str) {
    let path = manifest().join("tests/golden").join(name);
    if updating() {
        std::fs::write(&path, actual).unwrap();
        return;
    }
    let expected = std::fs::read_to_string(&path)
        .unwrap_or_else(|_| panic!("missing {}; run with UPDATE_GOLDEN=1", path.display()));
    assert_eq!(actual, expected, "output of {name} changed");
}

fn svg_path(name: &str) -> PathBuf {
    let dir = Path::new(TMP).join("golden-svg");
    std::fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

/// Runs `tropmod args` from the crate directory and records stdout, stderr
/// and the exit status in one transcript.
fn transcript(args: &[&str]) -> (String, i32) {
    let out = Command::new(BIN).args(args).current_dir(manifest()).output().expect("binary runs");
    let code = out.status.code().expect("exit status");
    let tmp = Path::new(TMP).join("golden-svg").display().to_string();
    let shown: Vec<String> = args.iter().map(|a| a.replace(&tmp, "$TMP")).collect();
    let mut t = format!("$ tropmod {}\n", shown.join(" "));
    t.push_str(&String::from_utf8(out.stdout).unwrap());
    let err = String::from_utf8(out.stderr).unwrap();
    if !err.is_empty() {
        t.push_str("[stderr]\n");
        t.push_str(&err);
    }
    t.push_str(&format!("[exit {code}]\n"));
    (t.replace(&tmp, "$TMP"), code)
}

fn case(name: &str, args: &[&str], expected_exit: i32) {
    let (t, code) = transcript(args);
    assert_eq!(code, expected_exit, "exit status of {name}:\n{t}");
    compare(&format!("{name}.txt"), &t);
}

fn svg_case(name: &str, args: &[&str], flag: &str) {
    let path = svg_path(&format!("{name}.svg"));
    let p = path.display().to_string();
    let mut all: Vec<&str> = args.to_vec();
    all.extend([flag, &p]);
    case(name, &all, 0);
    compare(&format!("{name}.svg"), &std::fs::read_to_string(&path).unwrap());
}

#[test]
fn curve_of_the_line() {
    svg_case("curve_line", &["curve", "--poly", "examples/line.json"], "--render");
}

#[test]
fn curve_from_explicit_data() {
    case("curve_line_curve", &["curve", "--curve", "examples/line_curve.json"], 0);
}

#[test]
fn quartic_curve_and_subdivision() {
    svg_case("curve_quartic", &["curve", "--poly", "examples/quartic.json"], "--render");
    svg_case("subdivision_quartic", &["subdivision", "--poly", "examples/quartic.json"], "--render");
}

#[test]
fn chain_subdivision() {
    case("subdivision_chain", &["subdivision", "examples/chain.json"], 0);
}

#[test]
fn stable_intersection_of_the_overlap() {
    case("intersect_overlap", &["intersect", "--stable", "examples/overlap.json#F", "examples/overlap.json#L"], 0);
}

#[test]
fn transversal_intersection_refuses_the_overlap() {
    case("intersect_overlap_transversal", &["intersect", "examples/overlap.json#F", "examples/overlap.json#L"], 1);
}

#[test]
fn stable_intersection_with_the_tangent() {
    case(
        "intersect_inflection",
        &["intersect", "--stable", "examples/inflection.json#Q", "examples/inflection.json#T"],
        0,
    );
}

#[test]
fn moved_lift_is_not_subordinate() {
    case(
        "subordinate_moved",
        &[
            "subordinate",
            "--curve",
            "examples/horizontal.json",
            "--along",
            "examples/overlap.json#F",
            "--lift",
            "examples/moved_lift.json",
        ],
        3,
    );
}

#[test]
fn three_root_lift_is_subordinate() {
    case(
        "subordinate_chain",
        &[
            "subordinate",
            "--curve",
            "examples/horizontal.json",
            "--along",
            "examples/chain.json",
            "--lift",
            "examples/three_root_lift.json",
        ],
        0,
    );
}

#[test]
fn given_lift_of_the_line() {
    case(
        "modify_chain_lift",
        &[
            "modify",
            "--along",
            "examples/chain.json",
            "--poly",
            "examples/horizontal.json",
            "--lift",
            "examples/three_root_lift.json",
        ],
        0,
    );
}

#[test]
fn modifications_of_space() {
    svg_case("modify_line", &["modify", "--along", "examples/chips.json"], "--render");
    svg_case("modify_plane", &["modify", "--along", "examples/inflection.json#T"], "--render");
}

#[test]
fn stable_lift_of_the_quartic() {
    svg_case(
        "modify_inflection",
        &["modify", "--along", "examples/inflection.json#T", "--poly", "examples/inflection.json#Q"],
        "--render",
    );
}

#[test]
fn momentum_reports() {
    case("momentum_quartic", &["momentum", "--poly", "examples/quartic.json", "--point", "1,2"], 0);
    case(
        "momentum_inflection",
        &["momentum", "--poly", "examples/inflection.json#Q", "--point", "examples/inflection.json#point"],
        0,
    );
    case("momentum_json", &["--json", "momentum", "examples/line_curve.json", "--point", "1,1"], 0);
}

#[test]
fn reciprocity() {
    case("weil", &["weil", "examples/weil.json"], 0);
    case("admissible", &["admissible", "examples/weil.json"], 0);
}

#[test]
fn chip_moves() {
    svg_case("chips", &["chips", "examples/chips.json", "--decrease", "1=-2", "--decrease", "0=-inf"], "--render");
    case("chips_increase", &["chips", "examples/chips.json", "--decrease", "1=5"], 1);
    case("chips_decimal", &["chips", "examples/univariate.json"], 0);
}

#[test]
fn audits() {
    case("audit_chain", &["audit", "--poly", "examples/chain.json", "--vertex=-2,0", "--edge", "1", "--m", "3"], 0);
    case("audit_shrunk", &["audit", "--poly", "examples/shrunk.json", "--vertex=-1,0", "--edge", "1", "--m", "3"], 0);
    case(
        "audit_not_a_vertex",
        &["audit", "--poly", "examples/chain.json", "--vertex=0,0", "--edge", "1", "--m", "3"],
        1,
    );
}

#[test]
fn render_command() {
    svg_case("render_chain", &["render", "--poly", "examples/chain.json"], "-o");
}

#[test]
fn parse_errors() {
    case("error_syntax", &["curve", "tests/data/bad_syntax.json"], 2);
    case("error_coefficient", &["curve", "tests/data/bad_coefficient.json"], 2);
    case("error_duplicate", &["chips", "tests/data/duplicate_exponent.json"], 2);
    case("error_missing_file", &["curve", "tests/data/none.json"], 2);
    case("error_json", &["--json", "curve", "tests/data/bad_syntax.json"], 2);
}

#[test]
fn selftest_passes() {
    case("selftest", &["selftest", "--cases", "6"], 0);
}

#[test]
fn reports_are_byte_stable() {
    let args = ["--json", "intersect", "--stable", "examples/inflection.json#Q", "examples/inflection.json#T"];
    assert_eq!(transcript(&args), transcript(&args));
}
