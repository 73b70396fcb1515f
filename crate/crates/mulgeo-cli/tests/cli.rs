//! End-to-end tests that drive the compiled binary.

use std::path::Path;
use std::process::{Command, Output};

fn mulgeo(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_mulgeo"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).expect("utf-8 stdout")
}

fn stderr(out: &Output) -> String {
    String::from_utf8(out.stderr.clone()).expect("utf-8 stderr")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("no signal")
}

const HELIX: &str = "helix:a=1.6,b=0.8";
const HELIX_PARTNER: &str = "bertrand-partner(helix:a=1.6,b=0.8,lambda=e^3.2)";

#[test]
fn eval_prints_both_renderings() {
    let out = mulgeo(&["eval", "e^2 .* s", "--at", "e^3"]);
    assert_eq!(code(&out), 0);
    assert_eq!(stdout(&out).trim(), "403.4287934927351 (= e^6)");

    let out = mulgeo(&["eval", "e^2 .* s", "--at", "e^3", "--log-form"]);
    assert_eq!(stdout(&out).trim(), "e^6");

    let out = mulgeo(&["eval", "s -* s", "--at", "5"]);
    assert_eq!(stdout(&out).trim(), "1 (= 0*)");
}

#[test]
fn eval_parse_error_exits_2_with_offset() {
    let out = mulgeo(&["eval", "s +*", "--at", "2"]);
    assert_eq!(code(&out), 2);
    assert!(stderr(&out).contains("byte 4"), "stderr: {}", stderr(&out));
}

#[test]
fn domain_error_exits_2() {
    let out = mulgeo(&["eval", "msqrt(s)", "--at", "e^-1"]);
    assert_eq!(code(&out), 2);
}

#[test]
fn unknown_source_exits_2() {
    let out = mulgeo(&["frame", "--curve", "torus:r=2"]);
    assert_eq!(code(&out), 2);
    assert!(stderr(&out).contains("unknown curve source"));
}

#[test]
fn usage_error_exits_2() {
    let out = mulgeo(&["frame", "--no-such-flag"]);
    assert_eq!(code(&out), 2);
    let out = mulgeo(&["frame"]);
    assert_eq!(code(&out), 2);
    let out = mulgeo(&["frame", "--curve", "circle", "-n", "1"]);
    assert_eq!(code(&out), 2);
}

fn parse_csv(text: &str) -> (Vec<String>, Vec<Vec<f64>>) {
    let mut lines = text.lines();
    let header: Vec<String> = lines.next().expect("header").split(',').map(String::from).collect();
    let rows = lines
        .map(|line| {
            line.split(',')
                .map(|cell| {
                    let m: mulgeo::MNum = cell.parse().expect("cell parses as MNum");
                    m.log()
                })
                .collect()
        })
        .collect();
    (header, rows)
}

#[test]
fn frame_csv_schema_and_round_trip() {
    let out = mulgeo(&["frame", "--curve", HELIX, "-n", "16"]);
    assert_eq!(code(&out), 0);
    let (header, rows) = parse_csv(&stdout(&out));
    assert_eq!(
        header.join(","),
        "s,x1,x2,x3,t1,t2,t3,n1,n2,n3,b1,b2,b3,kappa,tau"
    );
    assert_eq!(rows.len(), 16);

    // the same grid in exact log form measures the display round-trip loss
    let exact = mulgeo(&["frame", "--curve", HELIX, "-n", "16", "--log-form"]);
    let (_, exact_rows) = parse_csv(&stdout(&exact));
    for (row, exact_row) in rows.iter().zip(&exact_rows) {
        for (&got, &want) in row.iter().zip(exact_row) {
            assert!(
                (got - want).abs() <= 2.3e-16 * want.abs().max(1.0),
                "round trip loss: {got} vs {want}"
            );
        }
    }

    // log-form cells re-render identically: a lossless fixed point
    for line in stdout(&exact).lines().skip(1) {
        for cell in line.split(',') {
            let m: mulgeo::MNum = cell.parse().unwrap();
            assert_eq!(format!("e^{}", m.log()), cell);
        }
    }

    // kappa column is constant at a/(a^2+b^2) on logs
    let kcol: Vec<f64> = exact_rows.iter().map(|r| r[13]).collect();
    for &k in &kcol {
        assert!((k - 0.5).abs() <= 1e-9, "kappa log {k}");
    }
}

#[test]
fn frame_range_restricts_and_validates() {
    let out = mulgeo(&["frame", "--curve", HELIX, "-n", "4", "--range", "e^1:e^2", "--log-form"]);
    assert_eq!(code(&out), 0);
    let (_, rows) = parse_csv(&stdout(&out));
    assert_eq!(rows.len(), 4);
    assert!((rows[0][0] - 1.125).abs() <= 1e-12);
    assert!((rows[3][0] - 1.875).abs() <= 1e-12);

    let out = mulgeo(&["frame", "--curve", HELIX, "--range", "e^-5:e^2"]);
    assert_eq!(code(&out), 2);
    assert!(stderr(&out).contains("domain"));
}

#[test]
fn frame_reports_singular_samples() {
    // multiplicative straight line: curvature is 0* everywhere
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("line.json");
    std::fs::write(
        &path,
        r#"{"components": ["s", "s", "s"], "range": ["e^0.5", "e^2"]}"#,
    )
    .unwrap();
    let src = format!("spec:{}", path.display());
    let out = mulgeo(&["frame", "--curve", &src, "-n", "4"]);
    assert_eq!(code(&out), 2);
    assert!(stderr(&out).contains("sample 0"), "stderr: {}", stderr(&out));
}

#[test]
fn frame_auto_reparametrizes_with_note() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("curve.json");
    std::fs::write(
        &path,
        r#"{"components": ["msin(s)", "mcos(s)", "s ^* 1.5"], "range": ["e^0.5", "e^2"]}"#,
    )
    .unwrap();
    let out = mulgeo(&["frame", "--spec", path.to_str().unwrap(), "-n", "8", "--log-form"]);
    assert_eq!(code(&out), 0);
    assert!(stderr(&out).contains("reparametrizing"), "stderr: {}", stderr(&out));
    let (_, rows) = parse_csv(&stdout(&out));
    assert_eq!(rows.len(), 8);
    // tangent columns have unit Euclidean norm on logs
    for row in &rows {
        let t2: f64 = row[4..7].iter().map(|x| x * x).sum();
        assert!((t2 - 1.0).abs() <= 1e-6);
    }
}

#[test]
fn classify_reports_helix_kind() {
    let out = mulgeo(&["classify", "--curve", HELIX]);
    assert_eq!(code(&out), 0);
    let doc: serde_json::Value = serde_json::from_str(&stdout(&out)).expect("json");
    assert_eq!(doc["kind"], "helix");
    assert_eq!(doc["reports"]["helix"]["kind"], "helix");
    let c = doc["reports"]["helix"]["constants"]["c"].as_str().unwrap();
    let c: mulgeo::MNum = c.parse().unwrap();
    assert!((c.log() - 0.5).abs() <= 1e-9);
    assert!(stderr(&out).contains("classification: helix"));
}

#[test]
fn partner_writes_csv_and_report() {
    let dir = tempfile::tempdir().unwrap();
    let csv_path = dir.path().join("partner.csv");
    let out = mulgeo(&[
        "partner",
        "mannheim",
        "--curve",
        HELIX,
        "--out",
        csv_path.to_str().unwrap(),
    ]);
    assert_eq!(code(&out), 0);
    let doc: serde_json::Value = serde_json::from_str(&stdout(&out)).expect("json");
    assert_eq!(doc["report"]["kind"], "mannheim");
    assert_eq!(doc["report"]["verdict"], true);
    let lambda: mulgeo::MNum = doc["report"]["lambda"].as_str().unwrap().parse().unwrap();
    assert!((lambda.log() - 1.6).abs() <= 1e-12);

    let csv = std::fs::read_to_string(&csv_path).unwrap();
    let (header, rows) = parse_csv(&csv);
    assert_eq!(header.join(","), "s,x1,x2,x3");
    assert_eq!(rows.len(), 64);
    // the partner of this helix is its axis: x1 = x2 = 1
    for row in &rows {
        assert!(row[1].abs() <= 1e-9 && row[2].abs() <= 1e-9);
    }
}

#[test]
fn partner_bertrand_requires_lambda() {
    let out = mulgeo(&["partner", "bertrand", "--curve", HELIX]);
    assert_eq!(code(&out), 2);
    assert!(stderr(&out).contains("--lambda"));
}

#[test]
fn verify_exit_codes_follow_verdicts() {
    let out = mulgeo(&["verify", "bertrand", "--curve", HELIX, "--curve", HELIX_PARTNER]);
    assert_eq!(code(&out), 0);
    let doc: serde_json::Value = serde_json::from_str(&stdout(&out)).expect("json");
    assert_eq!(doc["report"]["verdict"], true);

    // a Bertrand pair is not a Mannheim pair
    let out = mulgeo(&["verify", "mannheim", "--curve", HELIX, "--curve", HELIX_PARTNER]);
    assert_eq!(code(&out), 1);
    let doc: serde_json::Value = serde_json::from_str(&stdout(&out)).expect("json");
    assert_eq!(doc["report"]["verdict"], false);
    assert!(stderr(&out).contains("verdict: FAIL"));

    let out = mulgeo(&["verify", "bertrand", "--curve", HELIX]);
    assert_eq!(code(&out), 2);
}

#[test]
fn synthesize_reports_deviations() {
    let out = mulgeo(&["synthesize", "e^1", "s", "--range", "e^0.5:e^2.5", "-n", "16"]);
    assert_eq!(code(&out), 0);
    let doc: serde_json::Value = serde_json::from_str(&stdout(&out)).expect("json");
    assert!(doc["max_kappa_log_deviation"].as_f64().unwrap() <= 1e-8);
    assert!(doc["max_tau_log_deviation"].as_f64().unwrap() <= 1e-8);
    assert_eq!(doc["natural"], true);
}

/// Minimal well-formedness scan: tags balance and nothing dangles.
fn assert_well_formed_svg(text: &str) {
    assert!(text.starts_with("<svg "), "must open with an svg root");
    let mut stack: Vec<String> = Vec::new();
    let mut rest = text;
    while let Some(start) = rest.find('<') {
        let tail = &rest[start + 1..];
        let end = tail.find('>').expect("every tag closes");
        let body = &tail[..end];
        assert!(!body.contains('<'), "nested `<` inside a tag: {body}");
        if let Some(name) = body.strip_prefix('/') {
            let open = stack.pop().unwrap_or_else(|| panic!("unmatched </{name}>"));
            assert_eq!(open, name, "tag mismatch");
        } else if !body.ends_with('/') {
            let name: String =
                body.chars().take_while(|c| c.is_ascii_alphanumeric()).collect();
            stack.push(name);
        }
        rest = &tail[end + 1..];
    }
    assert!(stack.is_empty(), "unclosed tags: {stack:?}");
    assert!(rest.trim().is_empty() || !rest.contains('>'), "stray `>` after root");
}

#[test]
fn plot_fixtures_are_deterministic_and_well_formed() {
    let dir = tempfile::tempdir().unwrap();
    let fixtures: [(&str, Vec<&str>); 3] = [
        ("circle", vec!["--curve", "circle"]),
        (
            "pair",
            vec!["--curve", HELIX, "--curve", HELIX_PARTNER, "--projection", "xz"],
        ),
        ("plane", vec!["--curve", "plane:a=3,b=2,c=1,d=5"]),
    ];
    for (name, args) in &fixtures {
        let render = |path: &Path| {
            let mut full = vec!["plot"];
            full.extend(args.iter().copied());
            full.push("--out");
            full.push(path.to_str().unwrap());
            let out = mulgeo(&full);
            assert_eq!(code(&out), 0, "{name}: {}", stderr(&out));
            std::fs::read(path).unwrap()
        };
        let first = render(&dir.path().join(format!("{name}-1.svg")));
        let second = render(&dir.path().join(format!("{name}-2.svg")));
        assert_eq!(first, second, "{name} renders must be byte-identical");
        assert_well_formed_svg(std::str::from_utf8(&first).unwrap());
    }
}

#[test]
fn plot_with_no_objects_exits_2() {
    let out = mulgeo(&["plot"]);
    assert_eq!(code(&out), 2);
    assert!(stderr(&out).contains("nothing to plot"));
}

#[test]
fn plot_raw_axes_renders() {
    let out = mulgeo(&["plot", "--curve", "circle", "--raw-axes"]);
    assert_eq!(code(&out), 0);
    let body = stdout(&out);
    assert_well_formed_svg(&body);
    assert!(body.contains(">x1<"), "raw axes label plain coordinates");
}
