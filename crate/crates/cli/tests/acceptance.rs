//! Acceptance suite for the command-line contract: the exit-code table
//! (0 = verified, 1 = well-formed but failing, 2 = parse/validation error)
//! exercised across the verbs, plus JSON output stability. The grammar
//! round-trip half of this criterion runs in the engine crate's acceptance
//! suite next to the generator it shares.

use std::path::PathBuf;
use std::process::{Command, Output};

fn qmx(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qmx")).args(args).output().expect("binary runs")
}

fn code(output: &Output) -> i32 {
    output.status.code().expect("no signal")
}

fn stdout(output: &Output) -> String {
    String::from_utf8_lossy(&output.stdout).into_owned()
}

fn tmp_dir(name: &str) -> PathBuf {
    let dir = PathBuf::from(env!("CARGO_TARGET_TMPDIR")).join(name);
    let _ = std::fs::remove_dir_all(&dir);
    std::fs::create_dir_all(&dir).expect("create temp dir");
    dir
}

/// Criterion 9 (CLI side): the exit-code table.
#[test]
fn acceptance_9_exit_codes() {
    // 0: verified identity, inline and from a file
    let out = qmx(&["verify", "D[1;1]D[1;2] - q*D[1;2]D[1;1]"]);
    assert_eq!(code(&out), 0, "identity must exit 0");

    let dir = tmp_dir("exit-codes");
    let seed = dir.join("seed.qid");
    std::fs::write(&seed, "# commutation seed\nD[1;2]@1 D[1,2;1,2] - D[1,2;1,2] D[1;2]@1\n")
        .unwrap();
    let out = qmx(&["verify", "-f", seed.to_str().unwrap()]);
    assert_eq!(code(&out), 0);

    // 1: well-formed non-identity
    let out = qmx(&["verify", "D[1;1]"]);
    assert_eq!(code(&out), 1, "non-identity must exit 1");

    // 1: failed exchange hypotheses
    let out = qmx(&[
        "exchange",
        "--k",
        "1",
        "--kprime",
        "2",
        "--l0",
        "1",
        "D[1;1]@1 D[1,2;1,2] - D[1,2;1,2] D[1;1]@1",
    ]);
    assert_eq!(code(&out), 1, "failed hypotheses must exit 1");

    // 1: failed match
    let out = qmx(&["match", "--rule", "rows:1->2", "D[1;2]@1 D[1;3]@1"]);
    assert_eq!(code(&out), 1, "failed match must exit 1");

    // 2: syntax error, label validation error, unknown flag
    let out = qmx(&["verify", "D[1;"]);
    assert_eq!(code(&out), 2, "syntax error must exit 2");
    let out = qmx(&["verify", "D[2,1;1,2]"]);
    assert_eq!(code(&out), 2, "unsorted labels must exit 2");
    let out = qmx(&["minor", "--K", "1,2", "--L", "1"]);
    assert_eq!(code(&out), 2, "size mismatch must exit 2");
    let out = qmx(&["detq", "--frobnicate"]);
    assert_eq!(code(&out), 2, "unknown flag must exit 2");

    // 0: the full transform pipeline succeeds end to end
    let out = qmx(&[
        "exchange",
        "--k",
        "1",
        "--kprime",
        "2",
        "--l0",
        "1",
        "--trace",
        "-f",
        seed.to_str().unwrap(),
    ]);
    assert_eq!(code(&out), 0, "exchange trace must exit 0: {}", stdout(&out));
    assert_eq!(stdout(&out).matches("[ok ]").count(), 5, "five verified steps expected");

    println!("[acceptance 9] CLI contract (exit-code table over 0/1/2 paths): PASS");
}

#[test]
fn batch_verification_reports_per_file() {
    let dir = tmp_dir("batch-mixed");
    std::fs::write(dir.join("a_good.qid"), "D[1;1]D[1;2] - q*D[1;2]D[1;1]\n").unwrap();
    std::fs::write(dir.join("b_bad.qid"), "D[1;1]\n").unwrap();
    std::fs::write(dir.join("ignored.txt"), "not parsed\n").unwrap();
    let out = qmx(&["verify", "--batch", dir.to_str().unwrap()]);
    assert_eq!(code(&out), 1);
    let text = stdout(&out);
    assert!(text.contains("a_good.qid: identity"), "got: {text}");
    assert!(text.contains("b_bad.qid: not-identity"), "got: {text}");

    // a parse error dominates the exit code
    std::fs::write(dir.join("c_broken.qid"), "D[1;\n").unwrap();
    let out = qmx(&["verify", "--batch", dir.to_str().unwrap()]);
    assert_eq!(code(&out), 2);

    // all identities: exit 0
    let dir = tmp_dir("batch-clean");
    std::fs::write(dir.join("a.qid"), "D[1;1]D[1;2] - q*D[1;2]D[1;1]\n").unwrap();
    std::fs::write(dir.join("b.qid"), "D[1;1]D[2;1] - q*D[2;1]D[1;1]\n").unwrap();
    let out = qmx(&["verify", "--batch", dir.to_str().unwrap()]);
    assert_eq!(code(&out), 0);
}

#[test]
fn json_output_carries_schema_version() {
    let out = qmx(&["--json", "verify", "D[1;1]"]);
    assert_eq!(code(&out), 1);
    let value: serde_json::Value = serde_json::from_str(&stdout(&out)).expect("valid json");
    assert_eq!(value["schema"], 1);
    assert_eq!(value["identity"], false);
    assert_eq!(value["normal_form"]["terms"][0]["word"][0], serde_json::json!([1, 1]));

    let out = qmx(&["--json", "detq", "--n", "2"]);
    assert_eq!(code(&out), 0);
    let value: serde_json::Value = serde_json::from_str(&stdout(&out)).expect("valid json");
    assert_eq!(value["schema"], 1);
    assert_eq!(value["result"]["text"], "t[1,1]*t[2,2] - q*t[1,2]*t[2,1]");
    // coefficients are exponent/integer-string pairs
    assert_eq!(value["result"]["terms"][1]["coeff"][0], serde_json::json!([1, "-1"]));

    let out = qmx(&[
        "--json",
        "exchange",
        "--k",
        "1",
        "--kprime",
        "2",
        "--l0",
        "1",
        "--trace",
        "D[1;2]@1 D[1,2;1,2] - D[1,2;1,2] D[1;2]@1",
    ]);
    assert_eq!(code(&out), 0);
    let value: serde_json::Value = serde_json::from_str(&stdout(&out)).expect("valid json");
    assert_eq!(value["schema"], 1);
    assert_eq!(value["trace"].as_array().map(|steps| steps.len()), Some(5));
    assert_eq!(value["verified"], true);
}

#[test]
fn transform_outputs_reverify_through_the_binary() {
    // laplace | verify round trip through files
    let dir = tmp_dir("reverify");
    let out = qmx(&["laplace", "--n", "3", "--K", "1,2", "--L", "1,2", "--form", "row-first"]);
    assert_eq!(code(&out), 0);
    let path = dir.join("laplace.qid");
    std::fs::write(&path, stdout(&out)).unwrap();
    let out = qmx(&["verify", "-f", path.to_str().unwrap()]);
    assert_eq!(code(&out), 0, "generated expansion fails to re-verify");

    // muir output re-verifies as well
    let out = qmx(&[
        "muir",
        "--I",
        "1",
        "--J",
        "1,2",
        "--rows",
        "2",
        "--cols",
        "3",
        "D[1;1]D[1;2] - q*D[1;2]D[1;1]",
    ]);
    assert_eq!(code(&out), 0);
    let path = dir.join("muir.qid");
    std::fs::write(&path, stdout(&out)).unwrap();
    let out = qmx(&["verify", "-f", path.to_str().unwrap()]);
    assert_eq!(code(&out), 0, "extension fails to re-verify");
}

#[test]
fn nf_accepts_entry_sugar_and_matches_symbol_form() {
    let sugar = qmx(&["nf", "t[1,2]*t[1,1]"]);
    let plain = qmx(&["nf", "D[1;2]D[1;1]"]);
    assert_eq!(code(&sugar), 0);
    assert_eq!(stdout(&sugar), stdout(&plain));
    assert_eq!(stdout(&sugar).trim(), "q^-1*t[1,1]*t[1,2]");
}

#[test]
fn match_applies_rule_sequences() {
    let out = qmx(&[
        "match",
        "--rule",
        "rows:2->3",
        "--rule",
        "rows:3,3->2,3;cols:2,3->2,3",
        "--apply",
        "D[3,3;2,3]@2 * D[3;3] * D[2;1]@1 * D[3;3]",
    ]);
    assert_eq!(code(&out), 0, "{}", stdout(&out));
    let text = stdout(&out);
    assert!(text.contains("injective match"), "got: {text}");
    assert!(text.contains("D[2,3;2,3]@2*D[3;3]*D[3;1]@1*D[3;3]"), "got: {text}");
}

#[test]
fn expansion_verbs_agree() {
    let det = "t[1,1]*t[2,2] - q*t[1,2]*t[2,1]";
    let out = qmx(&["detq", "--n", "2"]);
    assert_eq!(stdout(&out).trim(), det);
    let out = qmx(&["minor", "--K", "1,2", "--L", "1,2"]);
    assert_eq!(stdout(&out).trim(), det);
    // any permutation pair collapses to the determinant
    let out = qmx(&["detperm", "--kind", "c", "--sigma", "2,1", "--tau", "2,1", "--n", "2"]);
    assert_eq!(stdout(&out).trim(), det);
    // top-form coaction coefficients on both sides
    for side in ["left", "right"] {
        let out = qmx(&["colike", "--n", "2", "--side", side]);
        assert_eq!(stdout(&out).trim(), det);
    }
    // repeated rows vanish, injective selections do not
    let out = qmx(&["detphi", "--phi", "2,2", "--n", "2"]);
    assert_eq!(stdout(&out).trim(), "0");
    let out = qmx(&["detphi", "--phi", "1,2", "--n", "2"]);
    assert_eq!(stdout(&out).trim(), det);
}
