use std::io::Write;
use std::process::{Command, Output, Stdio};

use serde_json::Value;
use supercohom::spec_file::{self, AlgebraSpecFile};
use supercohom::AnyAlgebra;
use supercohom_core::families::{model_filiform, model_nilpotent, solvable_model_filiform, solvable_model_nilpotent};
use supercohom_core::{Field, Parity, PrimeField, Rationals, SuperAlgebra};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_supercohom"))
}

fn run(args: &[&str], stdin: Option<&[u8]>) -> Output {
    let mut cmd = bin();
    cmd.args(args).stdin(Stdio::piped()).stdout(Stdio::piped()).stderr(Stdio::piped());
    let mut child = cmd.spawn().unwrap();
    let mut input = child.stdin.take().unwrap();
    if let Some(bytes) = stdin {
        input.write_all(bytes).unwrap();
    }
    drop(input);
    child.wait_with_output().unwrap()
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| {
        panic!("{e}: {}\n{}", String::from_utf8_lossy(&out.stdout), String::from_utf8_lossy(&out.stderr))
    })
}

fn family(args: &[&str]) -> Vec<u8> {
    let mut full = vec!["family"];
    full.extend_from_slice(args);
    let out = run(&full, None);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    out.stdout
}

fn stderr(out: &Output) -> String {
    String::from_utf8_lossy(&out.stderr).into_owned()
}

fn terms(v: &Value) -> Vec<(String, String)> {
    v.as_array()
        .unwrap()
        .iter()
        .map(|t| (t["cochain"].as_str().unwrap().to_string(), t["coeff"].as_str().unwrap().to_string()))
        .collect()
}

#[test]
fn modular_h2_through_stdin() {
    let file = family(&["SL", "4", "3", "--field", "Fp:3"]);
    let out = run(&["cohomology", "-", "--q", "2", "--blocks", "--representatives"], Some(&file));
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    let r = &v["results"];
    assert_eq!(r["total"]["dim"], 2);
    assert_eq!(r["even"]["dim"], 2);
    assert_eq!(r["odd"]["dim"], 0);
    assert_eq!(r["representatives_match_reference"], true);
    let nonzero: Vec<&Value> = r["blocks"].as_array().unwrap().iter().filter(|b| b["dim"] != 0).collect();
    assert_eq!(nonzero.len(), 1);
    assert_eq!(nonzero[0]["weight"], serde_json::json!([-3]));
    let reps: Vec<Vec<(String, String)>> =
        r["representatives"].as_array().unwrap().iter().map(|x| terms(&x["terms"])).collect();
    assert!(reps.contains(&vec![("X1^Y3 -> Y1".to_string(), "1 mod 3".to_string())]), "{reps:?}");
    assert!(reps.contains(&vec![("X1^X4 -> X2".to_string(), "1 mod 3".to_string())]), "{reps:?}");
    assert_eq!(v["field"], "Fp:3");
    assert_eq!(v["algebra"]["label"], "SL^{4,3}");
    assert_eq!(v["algebra"]["family"]["kind"], "SL");
}

#[test]
fn reference_cocycles_at_p5() {
    let file = family(&["SL", "6", "5", "--field", "Fp:5"]);
    let out = run(&["cohomology", "-", "--representatives"], Some(&file));
    let r = &json(&out)["results"];
    assert_eq!(r["total"]["dim"], 2);
    let refs: Vec<Vec<(String, String)>> = r["reference_cocycles"].as_array().unwrap().iter().map(terms).collect();
    assert_eq!(
        refs,
        vec![
            vec![("X1^Y5 -> Y1".to_string(), "1 mod 5".to_string())],
            vec![("X1^X6 -> X2".to_string(), "1 mod 5".to_string())]
        ]
    );
    assert_eq!(r["representatives_match_reference"], true);
}

#[test]
fn rigid_over_rationals_reports_empty_cohomology() {
    let file = family(&["SL", "3", "2"]);
    let out = run(&["cohomology", "-", "--q", "2", "--representatives"], Some(&file));
    assert_eq!(out.status.code(), Some(0));
    let r = &json(&out)["results"];
    assert_eq!(r["total"]["dim"], 0);
    assert_eq!(r["representatives"], serde_json::json!([]));
    assert!(r.get("reference_cocycles").is_none());
}

#[test]
fn restricted_verdicts() {
    let file = family(&["SL", "4", "4"]);
    let out = run(&["restricted", "-", "--p", "3"], Some(&file));
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let v = json(&out);
    assert_eq!(v["results"]["verdict"], "not restricted");
    assert_eq!(v["results"]["obstruction"]["at"], "X1");
    assert_eq!(v["results"]["obstruction"]["verified"], true);
    assert_eq!(v["field"], "Fp:3");

    let file = family(&["SL", "4", "3", "--field", "Fp:3"]);
    let v = json(&run(&["restricted", "-", "--p", "3"], Some(&file)));
    let r = &v["results"];
    assert_eq!(r["verdict"], "restricted");
    assert_eq!(r["unique"], true);
    assert_eq!(r["sr1_verified"], true);
    assert_eq!(r["p_map"]["X1"], serde_json::json!([]));
    assert_eq!(r["p_map"]["T2"], serde_json::json!([{"basis": "T2", "coeff": "1 mod 3"}]));

    // An algebra over F_3 cannot be read over F_5.
    let out = run(&["restricted", "-", "--p", "5"], Some(&file));
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn derivations_are_inner() {
    let file = family(&["SN", "3,2", "2,1"]);
    let out = run(&["derivations", "-"], Some(&file));
    assert_eq!(out.status.code(), Some(0));
    let r = &json(&out)["results"];
    assert_eq!(r["complete"], true);
    assert_eq!(r["centre"], serde_json::json!([]));
    let ders = r["derivations"].as_array().unwrap();
    assert!(!ders.is_empty());
    assert!(ders.iter().all(|d| d["inner"] == true && d["witness"].is_array()));

    // L^{3,2} has a centre and outer derivations.
    let file = family(&["L", "3", "2"]);
    let r = json(&run(&["derivations", "-"], Some(&file)))["results"].clone();
    assert_eq!(r["complete"], false);
    assert!(!r["centre"].as_array().unwrap().is_empty());
    assert!(r["derivations"].as_array().unwrap().iter().any(|d| d["inner"] == false));
}

#[test]
fn charseq_and_exit_codes() {
    let file = family(&["L", "4", "3"]);
    let v = json(&run(&["charseq", "-"], Some(&file)));
    assert_eq!(v["results"]["characteristic_sequence"]["even"], serde_json::json!([3, 1]));
    assert_eq!(v["results"]["characteristic_sequence"]["odd"], serde_json::json!([3]));
    assert_eq!(v["results"]["s_nilindex"], serde_json::json!([3, 3]));

    let file = family(&["SL", "3", "2"]);
    let out = run(&["charseq", "-"], Some(&file));
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(json(&out)["results"]["nilpotent"], false);
}

#[test]
fn hs_check_reports_both_sides() {
    let file = family(&["SL", "4", "3"]);
    let out = run(&["hs-check", "-", "--torus", "T1,T2,T3", "--q", "1"], Some(&file));
    assert_eq!(out.status.code(), Some(0));
    let r = &json(&out)["results"];
    assert_eq!(r["lhs"], r["rhs"]);
    assert_eq!(r["equal"], true);

    // X1 is not diagonalisable: a precondition failure.
    let out = run(&["hs-check", "-", "--torus", "X1", "--q", "1"], Some(&file));
    assert_eq!(out.status.code(), Some(1), "{}", stderr(&out));
    let out = run(&["hs-check", "-", "--torus", "Z9"], Some(&file));
    assert_eq!(out.status.code(), Some(2));
}

fn same_constants<F: Field>(a: &SuperAlgebra<F>, b: &SuperAlgebra<F>) -> bool {
    a.dim() == b.dim()
        && a.even_dim() == b.even_dim()
        && (0..a.dim()).all(|i| a.name(i) == b.name(i))
        && (0..a.dim()).all(|i| (0..a.dim()).all(|j| a.bracket(i, j) == b.bracket(i, j)))
}

#[test]
fn emitted_families_parse_back_identically() {
    let f3 = PrimeField::new(3).unwrap();
    let cases: Vec<(Vec<&str>, AnyAlgebra)> = vec![
        (vec!["L", "4", "3"], AnyAlgebra::Rational(model_filiform(&Rationals, 4, 3).unwrap())),
        (vec!["SL", "5", "2"], AnyAlgebra::Rational(solvable_model_filiform(&Rationals, 5, 2).unwrap())),
        (vec!["N", "3,2", "-"], AnyAlgebra::Rational(model_nilpotent(&Rationals, &[3, 2], &[]).unwrap())),
        (
            vec!["SN", "3,2", "2,1", "--field", "Fp:3"],
            AnyAlgebra::Prime(solvable_model_nilpotent(&f3, &[3, 2], &[2, 1]).unwrap()),
        ),
    ];
    for (args, expected) in cases {
        let text = String::from_utf8(family(&args)).unwrap();
        let parsed = spec_file::parse(&text).unwrap();
        let ok = match (&parsed, &expected) {
            (AnyAlgebra::Rational(a), AnyAlgebra::Rational(b)) => same_constants(a, b) && a.family() == b.family(),
            (AnyAlgebra::Prime(a), AnyAlgebra::Prime(b)) => same_constants(a, b) && a.family() == b.family(),
            _ => false,
        };
        assert!(ok, "{args:?}");
        // Without the family record the brackets alone must rebuild it.
        let mut file: AlgebraSpecFile = serde_json::from_str(&text).unwrap();
        file.family = None;
        let bare = file.build().unwrap();
        let ok = match (&bare, &expected) {
            (AnyAlgebra::Rational(a), AnyAlgebra::Rational(b)) => same_constants(a, b),
            (AnyAlgebra::Prime(a), AnyAlgebra::Prime(b)) => same_constants(a, b),
            _ => false,
        };
        assert!(ok, "{args:?} without family");
    }
}

const L32: &str = r#"{
  "field": "Q",
  "even_basis": ["X1", "X2", "X3"],
  "odd_basis": ["Y1", "Y2"],
  "brackets": [
    {"left": "X1", "right": "X2", "result": [{"basis": "X3", "coeff": "1"}]},
    {"left": "Y1", "right": "X1", "result": [{"basis": "Y2", "coeff": -1}]}
  ]
}"#;

#[test]
fn handwritten_file_matches_constructor() {
    let AnyAlgebra::Rational(g) = spec_file::parse(L32).unwrap() else { panic!("field") };
    assert!(same_constants(&g, &model_filiform(&Rationals, 3, 2).unwrap()));
}

#[test]
fn orientation_conflict_is_a_usage_error() {
    let text = L32.replace(
        r#"{"left": "Y1", "right": "X1", "result": [{"basis": "Y2", "coeff": -1}]}"#,
        r#"{"left": "Y1", "right": "X1", "result": [{"basis": "Y2", "coeff": -1}]},
    {"left": "X1", "right": "Y1", "result": [{"basis": "Y2", "coeff": "2"}]}"#,
    );
    let out = run(&["validate", "-"], Some(text.as_bytes()));
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("brackets[2]"), "{}", stderr(&out));
    // The consistent opposite orientation is accepted.
    let text = L32.replace(r#""coeff": "2""#, r#""coeff": "1""#).replace(
        r#"{"left": "Y1", "right": "X1", "result": [{"basis": "Y2", "coeff": -1}]}"#,
        r#"{"left": "Y1", "right": "X1", "result": [{"basis": "Y2", "coeff": -1}]},
    {"left": "X1", "right": "Y1", "result": [{"basis": "Y2", "coeff": "1"}]}"#,
    );
    assert_eq!(run(&["validate", "-"], Some(text.as_bytes())).status.code(), Some(0));
}

/// Brute-force graded Jacobi residual on one ordered triple.
fn jacobi_residual_nonzero<F: Field>(g: &SuperAlgebra<F>, i: usize, j: usize, k: usize) -> bool {
    let f = g.field();
    let e = |x: usize| g.basis_vector(x);
    let sign =
        |a: usize, b: usize| f.from_i64(if g.parity(a) == Parity::Odd && g.parity(b) == Parity::Odd { -1 } else { 1 });
    let t1 = g.bracket_elements(&e(i), &g.bracket_elements(&e(j), &e(k))).scale(f, &sign(i, k));
    let t2 = g.bracket_elements(&e(j), &g.bracket_elements(&e(k), &e(i))).scale(f, &sign(j, i));
    let t3 = g.bracket_elements(&e(k), &g.bracket_elements(&e(i), &e(j))).scale(f, &sign(k, j));
    !t1.add(f, &t2).add(f, &t3).is_zero()
}

#[test]
fn jacobi_violation_names_the_triple() {
    let text = L32.replace(
        r#"{"left": "X1", "right": "X2", "result": [{"basis": "X3", "coeff": "1"}]},"#,
        r#"{"left": "X1", "right": "X2", "result": [{"basis": "X3", "coeff": "1"}]},
    {"left": "X2", "right": "Y1", "result": [{"basis": "Y1", "coeff": "1/2"}]},"#,
    );
    let out = run(&["validate", "-"], Some(text.as_bytes()));
    assert_eq!(out.status.code(), Some(1));
    let v = json(&out);
    assert_eq!(v["results"]["valid"], false);
    let triple: Vec<String> =
        v["results"]["jacobi_violation"].as_array().unwrap().iter().map(|s| s.as_str().unwrap().into()).collect();
    let AnyAlgebra::Rational(g) = spec_file::parse_unvalidated(&text).unwrap() else { panic!() };
    let idx: Vec<usize> = triple.iter().map(|n| g.index_of(n).unwrap()).collect();
    assert!(jacobi_residual_nonzero(&g, idx[0], idx[1], idx[2]), "{triple:?}");

    let out = run(&["cohomology", "-"], Some(text.as_bytes()));
    assert_eq!(out.status.code(), Some(1));
    assert!(stderr(&out).contains("Jacobi"), "{}", stderr(&out));
    assert!(triple.iter().all(|n| stderr(&out).contains(n.as_str())));
}

#[test]
fn parse_errors_carry_locations() {
    let out = run(&["validate", "-"], Some(b"{\n  \"field\": \"Q\",\n  \"even_basis\": [\"X1\",]\n}"));
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("line 3 column"), "{}", stderr(&out));

    let text = L32.replace(r#""basis": "X3""#, r#""basis": "X9""#);
    let out = run(&["validate", "-"], Some(text.as_bytes()));
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("brackets[0].result[0].basis"), "{}", stderr(&out));

    let text = L32.replace(r#""coeff": "1""#, r#""coeff": "1/0""#);
    let out = run(&["validate", "-"], Some(text.as_bytes()));
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("brackets[0].result[0].coeff"), "{}", stderr(&out));

    let text = L32.replace(r#""field": "Q""#, r#""field": {"Fp": 4}"#);
    assert_eq!(run(&["validate", "-"], Some(text.as_bytes())).status.code(), Some(2));
}

#[test]
fn family_record_must_match_brackets() {
    let text = L32.replace(r#""field": "Q","#, r#""field": "Q", "family": {"kind": "L", "n": 3, "m": 2},"#);
    assert_eq!(run(&["validate", "-"], Some(text.as_bytes())).status.code(), Some(0));
    let text = L32.replace(r#""field": "Q","#, r#""field": "Q", "family": {"kind": "L", "n": 3, "m": 3},"#);
    let out = run(&["validate", "-"], Some(text.as_bytes()));
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn reports_are_reproducible_except_timing() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("sl43.json");
    let p = path.to_str().unwrap();
    assert_eq!(run(&["family", "SL", "4", "3", "--field", "Fp:3", "--emit", p], None).status.code(), Some(0));
    let mut reports = Vec::new();
    for _ in 0..2 {
        let out = run(&["cohomology", p, "--blocks", "--representatives"], None);
        let mut v = json(&out);
        v.as_object_mut().unwrap().remove("timing_ms");
        reports.push(serde_json::to_string(&v).unwrap());
    }
    assert_eq!(reports[0], reports[1]);
    // Keys come out sorted.
    let text = String::from_utf8(run(&["cohomology", p], None).stdout).unwrap();
    let keys: Vec<usize> = [
        "\"algebra\"",
        "\"command\"",
        "\"field\"",
        "\"parameters\"",
        "\"results\"",
        "\"timing_ms\"",
        "\"tool_version\"",
    ]
    .iter()
    .map(|k| text.find(&format!("\n  {k}")).unwrap())
    .collect();
    assert!(keys.windows(2).all(|w| w[0] < w[1]));
    // The report records the input hash.
    let v: Value = serde_json::from_str(&text).unwrap();
    assert_eq!(v["algebra"]["input_sha256"].as_str().unwrap().len(), 64);
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(run(&["no-such-command"], None).status.code(), Some(2));
    assert_eq!(run(&["family", "SL", "x", "3"], None).status.code(), Some(2));
    assert_eq!(run(&["family", "SL", "1", "3"], None).status.code(), Some(2));
    let file = family(&["SL", "4", "4"]);
    assert_eq!(run(&["restricted", "-", "--p", "4"], Some(&file)).status.code(), Some(2));
    assert_eq!(run(&["family", "SL", "4", "3", "--field", "Fp:9"], None).status.code(), Some(2));
    assert_eq!(run(&["cohomology", "/nonexistent/file.json"], None).status.code(), Some(2));
    assert_eq!(run(&["reproduce-paper", "--primes", "4"], None).status.code(), Some(2));
    assert_eq!(run(&["--help"], None).status.code(), Some(0));
    let out = bin().args(["family", "SL", "3", "2"]).env("SUPERCOHOM_THREADS", "many").output().unwrap();
    assert_eq!(out.status.code(), Some(2));
    let out = bin().args(["family", "SL", "3", "2"]).env("SUPERCOHOM_THREADS", "1").output().unwrap();
    assert_eq!(out.status.code(), Some(0));
}

#[test]
fn trivial_module_and_torus_blocks() {
    let file = family(&["SL", "3", "2"]);
    let out = run(&["cohomology", "-", "--q", "1", "--module", "trivial", "--blocks"], Some(&file));
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let direct = run(&["cohomology", "-", "--q", "1", "--module", "trivial"], Some(&file));
    assert_eq!(json(&out)["results"]["total"], json(&direct)["results"]["total"]);
    let out = run(&["cohomology", "-", "--q", "2", "--torus", "T1,T2,T3"], Some(&file));
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    assert_eq!(json(&out)["results"]["total"]["dim"], 0);
}

#[test]
fn reproduce_small_run() {
    let out = run(&["reproduce-paper", "--primes", "3,7", "--max-n", "3"], None);
    let text = String::from_utf8_lossy(&out.stdout);
    assert_eq!(out.status.code(), Some(0), "{text}");
    assert!(text.contains("[PASS] 4 "), "{text}");
    assert!(text.contains("[PASS] 5+7"), "{text}");
    assert!(text.contains("all 10 checks passed"), "{text}");
    assert!(!text.contains("FAIL"));
}
