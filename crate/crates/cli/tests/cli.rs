use std::path::{Path, PathBuf};

use chanint_cli::{parse_channel, run};

fn fixture(name: &str) -> String {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("tests/fixtures")
        .join(name)
        .display()
        .to_string()
}

struct Outcome {
    code: i32,
    stdout: String,
    stderr: String,
}

fn chanint(args: &[&str]) -> Outcome {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let argv = std::iter::once("chanint").chain(args.iter().copied());
    let code = run(argv, &mut out, &mut err);
    Outcome {
        code,
        stdout: String::from_utf8(out).unwrap(),
        stderr: String::from_utf8(err).unwrap(),
    }
}

fn metric(report: &str, key: &str) -> String {
    let prefix = format!("{key}=");
    report
        .lines()
        .find_map(|l| l.strip_prefix(&prefix))
        .unwrap_or_else(|| panic!("no {key} in\n{report}"))
        .to_string()
}

fn read_csv(path: &Path) -> Vec<(f64, f64)> {
    let mut reader = csv::Reader::from_path(path).unwrap();
    assert_eq!(reader.headers().unwrap(), vec!["phi", "p0"]);
    reader
        .records()
        .map(|r| {
            let r = r.unwrap();
            (r[0].parse().unwrap(), r[1].parse().unwrap())
        })
        .collect()
}

#[test]
fn identity_visibility_report() {
    let id = fixture("id2.ch");
    let o = chanint(&["visibility", "--u", &id, "--v", &id]);
    assert_eq!(o.code, 0, "{}", o.stderr);
    assert!(o.stderr.is_empty());
    assert_eq!(metric(&o.stdout, "v"), "1.000000000000");
    assert_eq!(metric(&o.stdout, "alpha"), "0.000000000000");
    assert!(o.stdout.starts_with("tool: chanint "));
    assert!(o.stdout.contains("sha256="));
}

#[test]
fn depolarizing_max_self_coherence() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("best.ch");
    let o = chanint(&[
        "self",
        "--ch",
        &fixture("depol2.ch"),
        "--maximize",
        "--out",
        out.to_str().unwrap(),
    ]);
    assert_eq!(o.code, 0, "{}", o.stderr);
    assert_eq!(metric(&o.stdout, "v_max"), "0.250000000000");
    assert_eq!(metric(&o.stdout, "self_visibility"), "0.250000000000");
    let realizing = parse_channel(&std::fs::read_to_string(&out).unwrap()).unwrap();
    assert!((chanint::coherence::self_visibility(&realizing) - 0.25).abs() < 1e-12);
}

#[test]
fn phase_flip_pattern_file() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("p.csv");
    let pf = fixture("pf25.ch");
    let o = chanint(&[
        "pattern",
        "--u",
        &pf,
        "--v",
        &pf,
        "--samples",
        "8",
        "--out",
        out.to_str().unwrap(),
    ]);
    assert_eq!(o.code, 0, "{}", o.stderr);
    let rows = read_csv(&out);
    assert_eq!(rows.len(), 8);
    for (k, (phi, p0)) in rows.iter().enumerate() {
        let expected_phi = 2.0 * std::f64::consts::PI * k as f64 / 8.0;
        assert!((phi - expected_phi).abs() < 1e-14);
        assert!((p0 - 0.5 * (1.0 + 0.75 * expected_phi.cos())).abs() < 1e-12);
    }
    assert_eq!(metric(&o.stdout, "v"), "0.750000000000");
}

#[test]
fn csv_round_trips_through_a_reader() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("p.csv");
    let (u, v) = (fixture("hadamard.ch"), fixture("pf25.ch"));
    let o = chanint(&[
        "pattern",
        "--u",
        &u,
        "--v",
        &v,
        "--rho",
        &format!("pure:{}", fixture("plus.state")),
        "--out",
        out.to_str().unwrap(),
    ]);
    assert_eq!(o.code, 0, "{}", o.stderr);
    let rows = read_csv(&out);
    assert_eq!(rows.len(), 64);

    let ch_u = parse_channel(&std::fs::read_to_string(&u).unwrap()).unwrap();
    let ch_v = parse_channel(&std::fs::read_to_string(&v).unwrap()).unwrap();
    let h = std::f64::consts::FRAC_1_SQRT_2;
    let rho = chanint::DensityMatrix::pure(&[
        chanint::Complex::new(h, 0.0),
        chanint::Complex::new(h, 0.0),
    ])
    .unwrap();
    let pattern = chanint::interferometer::simulate_pattern(&ch_u, &ch_v, &rho, 64).unwrap();
    for ((phi, p0), (phi_ref, p_ref)) in rows.iter().zip(pattern.iter()) {
        assert!((phi - phi_ref).abs() <= 1e-14 * phi_ref.abs().max(1.0));
        assert!((p0 - p_ref).abs() <= 1e-14);
    }
    let bytes = std::fs::read(&out).unwrap();
    assert!(!bytes.contains(&b'\r'));
}

#[test]
fn dash_writes_only_csv_to_stdout() {
    let id = fixture("id2.ch");
    let o = chanint(&[
        "pattern",
        "--u",
        &id,
        "--v",
        &id,
        "--samples",
        "4",
        "--out",
        "-",
    ]);
    assert_eq!(o.code, 0);
    assert_eq!(
        o.stdout,
        "phi,p0\n0,1\n1.5707963267949,0.5\n3.14159265358979,0\n4.71238898038469,0.5\n"
    );
}

#[test]
fn oracle_pattern_matches_closed_form() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.csv");
    let b = dir.path().join("b.csv");
    let (u, v) = (fixture("pf25.ch"), fixture("depol2.ch"));
    assert_eq!(
        chanint(&[
            "pattern",
            "--u",
            &u,
            "--v",
            &v,
            "--out",
            a.to_str().unwrap()
        ])
        .code,
        0
    );
    assert_eq!(
        chanint(&[
            "pattern",
            "--u",
            &u,
            "--v",
            &v,
            "--oracle",
            "--out",
            b.to_str().unwrap()
        ])
        .code,
        0
    );
    for (x, y) in read_csv(&a).iter().zip(read_csv(&b).iter()) {
        assert!((x.1 - y.1).abs() < 1e-10);
    }
}

#[test]
fn closest_unitary_of_phase_flip() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("u.ch");
    let o = chanint(&[
        "closest-unitary",
        "--ch",
        &fixture("pf25.ch"),
        "--out",
        out.to_str().unwrap(),
    ]);
    assert_eq!(o.code, 0, "{}", o.stderr);
    let v: f64 = metric(&o.stdout, "v_closest_unitary").parse().unwrap();
    assert!((v - 0.75f64.sqrt()).abs() < 1e-12);
    let unitary = parse_channel(&std::fs::read_to_string(&out).unwrap()).unwrap();
    assert_eq!(unitary.len(), 1);
    assert_eq!(unitary, chanint::KrausChannel::identity(2));

    let o = chanint(&[
        "closest-unitary",
        "--ch",
        &fixture("depol2.ch"),
        "--after-maximize",
        "--out",
        out.to_str().unwrap(),
    ]);
    assert_eq!(o.code, 0, "{}", o.stderr);
    assert_eq!(metric(&o.stdout, "v_max"), "0.250000000000");
    assert_eq!(metric(&o.stdout, "v_closest_unitary"), "0.500000000000");
}

#[test]
fn pairwise_metrics() {
    let (id, z, depol) = (fixture("id2.ch"), fixture("z2.ch"), fixture("depol2.ch"));
    let o = chanint(&["raginsky", "--u", &id, "--v", &depol]);
    assert_eq!(metric(&o.stdout, "raginsky_fidelity"), "0.500000000000");
    let o = chanint(&["max-fidelity", "--u", &id, "--v", &depol]);
    assert_eq!(metric(&o.stdout, "max_fidelity"), "0.500000000000");
    assert_eq!(metric(&o.stdout, "achieved"), "0.500000000000");
    let o = chanint(&["distance", "--u", &id, "--v", &z]);
    assert_eq!(metric(&o.stdout, "distance_squared"), "4.000000000000");
}

#[test]
fn json_report_carries_the_same_values() {
    let id = fixture("id2.ch");
    let depol = fixture("depol2.ch");
    let text = chanint(&["max-fidelity", "--u", &id, "--v", &depol]).stdout;
    let json = chanint(&["max-fidelity", "--u", &id, "--v", &depol, "--json"]).stdout;
    let doc: serde_json::Value = serde_json::from_str(&json).unwrap();
    let fid: f64 = metric(&text, "max_fidelity").parse().unwrap();
    assert_eq!(doc["metrics"]["max_fidelity"].as_f64().unwrap(), fid);
    assert_eq!(doc["metrics"]["degenerate"], serde_json::json!(false));
    assert_eq!(doc["inputs"][1]["path"], serde_json::json!(depol));
}

#[test]
fn exit_codes() {
    let id = fixture("id2.ch");
    let pf = fixture("pf25.ch");
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.ch");
    std::fs::write(
        &bad,
        r#"{"dim":2,"kraus":[[[[1,0],[0,0]],[[0,0],[1,0]]],[[[1,0],[0,0]],[[0,0],[1,0]]]]}"#,
    )
    .unwrap();

    let o = chanint(&["distance", "--u", &id]);
    assert_eq!(o.code, 2);
    assert!(o.stdout.is_empty());

    let o = chanint(&["self", "--ch", bad.to_str().unwrap()]);
    assert_eq!(o.code, 3);
    assert!(o.stdout.is_empty());
    assert!(o.stderr.contains("completeness residual"), "{}", o.stderr);

    let o = chanint(&["distance", "--u", &id, "--v", &pf]);
    assert_eq!(o.code, 3);
    assert!(o.stdout.is_empty());

    let o = chanint(&[
        "random",
        "--dim",
        "2",
        "--kraus",
        "9",
        "--seed",
        "1",
        "--out",
        dir.path().join("r.ch").to_str().unwrap(),
    ]);
    assert_eq!(o.code, 3);

    let o = chanint(&["--help"]);
    assert_eq!(o.code, 0);
    assert!(o.stderr.is_empty());
}

#[test]
fn random_channels_are_reproducible() {
    let dir = tempfile::tempdir().unwrap();
    let paths: Vec<PathBuf> = (0..2)
        .map(|i| dir.path().join(format!("r{i}.ch")))
        .collect();
    for p in &paths {
        let o = chanint(&[
            "random",
            "--dim",
            "3",
            "--kraus",
            "4",
            "--seed",
            "7",
            "--out",
            p.to_str().unwrap(),
        ]);
        assert_eq!(o.code, 0, "{}", o.stderr);
    }
    let a = std::fs::read(&paths[0]).unwrap();
    assert_eq!(a, std::fs::read(&paths[1]).unwrap());
    let ch = parse_channel(std::str::from_utf8(&a).unwrap()).unwrap();
    assert_eq!(ch, chanint::KrausChannel::random(3, 4, 7).unwrap());
}
