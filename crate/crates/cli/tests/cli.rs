mod common;

use common::{args, overlapdim, validate, PARAMS, UNIFORM};
use overlapdim_core::separation::dmn_interval;

#[test]
fn dim_measure_uniform_entropy_is_log3() {
    let run = overlapdim(
        &args(&[
            &["dim-measure"],
            &PARAMS,
            &["--p1", ".3333333333", "--p2", ".3333333333", "--p3", ".3333333334"],
        ]),
        None,
    );
    let doc = run.json();
    validate(&doc).unwrap();
    assert!((doc["entropy"].as_f64().unwrap() - 3f64.ln()).abs() < 1e-9);
    assert_eq!(doc["metadata"]["tolerances"]["tol"], 1e-10);
    assert!(doc.get("warnings").is_none());
}

#[test]
fn zero_probability_is_rejected() {
    let run = overlapdim(
        &args(&[&["dim-measure"], &PARAMS, &["--p1", "0", "--p2", "0.5", "--p3", "0.5"]]),
        None,
    );
    assert_eq!(run.code, 2);
    assert!(run.stderr.contains("probabilities must be strictly positive"));
    assert!(run.stdout.is_empty());
}

#[test]
fn large_ratios_warn_but_succeed() {
    let run = overlapdim(
        &args(&[
            &["dim-measure", "--alpha", "0.2", "--beta", "0.3", "--gamma", "0.25"],
            &UNIFORM,
        ]),
        None,
    );
    let doc = run.json();
    validate(&doc).unwrap();
    assert!(!doc["warnings"].as_array().unwrap().is_empty());
}

#[test]
fn invalid_params_exit_2() {
    let run = overlapdim(
        &args(&[&["dim-measure", "--alpha", "0.6", "--beta", "0.3", "--gamma", "0.5"], &UNIFORM]),
        None,
    );
    assert_eq!(run.code, 2);
    assert!(run.stderr.contains("must be < 1"));
}

#[test]
fn attractor_dimensions() {
    let third = ["--alpha", "0.3333333333333333", "--beta", "0.3333333333333333", "--gamma", "0.3333333333333333"];
    let s0 = overlapdim(&args(&[&["dim-attractor", "--which", "s0"], &third]), None).json();
    validate(&s0).unwrap();
    assert!((s0["dimension"].as_f64().unwrap() - 1.0).abs() < 1e-12);

    let s0 = overlapdim(&args(&[&["dim-attractor", "--which", "s0"], &PARAMS]), None).json();
    let s1 = overlapdim(&args(&[&["dim-attractor", "--which", "s1"], &PARAMS]), None).json();
    let shat = overlapdim(&args(&[&["dim-attractor", "--which", "shat", "--n", "60"], &PARAMS]), None).json();
    validate(&shat).unwrap();
    let (e0, e1, eh) = (
        s0["exponent"].as_f64().unwrap(),
        s1["exponent"].as_f64().unwrap(),
        shat["exponent"].as_f64().unwrap(),
    );
    assert!(e1 < e0);
    assert!((eh - e1).abs() < 1e-8);
    assert_eq!(shat["n"], 60);
}

#[test]
fn shat_needs_n() {
    let run = overlapdim(&args(&[&["dim-attractor", "--which", "shat"], &PARAMS]), None);
    assert_eq!(run.code, 2);
    assert!(run.stderr.contains("--n"));
}

#[test]
fn separation_verdicts() {
    let hit = overlapdim(
        &["check-separation", "--alpha", "0.0081", "--beta", "0.09", "--gamma", "0.07"],
        None,
    )
    .json();
    validate(&hit).unwrap();
    assert_eq!(hit["status"], "intersecting");
    assert_eq!(hit["witness"]["m"], 1);
    assert_eq!(hit["witness"]["n"], 2);

    let ok = overlapdim(&args(&[&["check-separation"], &PARAMS, &["--emit-certificate"]]), None).json();
    validate(&ok).unwrap();
    assert_eq!(ok["status"], "separated");
    assert_eq!(
        ok["certificate"].as_array().unwrap().len(),
        ok["checked_pairs"].as_array().unwrap().len()
    );

    let quiet = overlapdim(&args(&[&["check-separation"], &PARAMS]), None).json();
    assert!(quiet.get("certificate").is_none());
}

#[test]
fn separation_usage_and_range_errors() {
    let run = overlapdim(&args(&[&["check-separation"], &PARAMS, &["--depth", "-1"]]), None);
    assert_eq!(run.code, 2);
    let run = overlapdim(&["check-separation", "--alpha", "0.2", "--beta", "0.05", "--gamma", "0.07"], None);
    assert_eq!(run.code, 2);
    assert!(run.stderr.contains("hypothesis"));
}

fn sweep_csv(steps: &str, lo: &str, hi: &str) -> (serde_json::Value, String) {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("sweep.csv");
    let run = overlapdim(
        &[
            "sweep", "--beta", "0.05", "--gamma", "0.07", "--alpha-min", lo, "--alpha-max", hi,
            "--steps", steps, "--out", out.to_str().unwrap(),
        ],
        None,
    );
    let doc = run.json();
    (doc, std::fs::read_to_string(&out).unwrap())
}

#[test]
fn sweep_two_steps() {
    let (doc, csv) = sweep_csv("2", "0.01", "0.04");
    validate(&doc).unwrap();
    let lines: Vec<&str> = csv.lines().collect();
    assert_eq!(lines.len(), 3);
    assert_eq!(lines[0], "alpha,s0,s1,dim_measure,phi,separation_status,in_dmn_band");
    assert!(!csv.contains('\r') && csv.ends_with('\n'));
    assert_eq!(doc["rows"], 2);
}

#[test]
fn sweep_rows_are_ordered_and_banded() {
    let (_, csv) = sweep_csv("25", "0.001", "0.0499");
    let mut rdr = csv::Reader::from_reader(csv.as_bytes());
    let mut prev = 0.0;
    let band11 = dmn_interval(0.05, 0.07, 1, 1).unwrap().interval.unwrap();
    let mut saw_band = false;
    for rec in rdr.records() {
        let rec = rec.unwrap();
        let alpha: f64 = rec[0].parse().unwrap();
        let (s0, s1): (f64, f64) = (rec[1].parse().unwrap(), rec[2].parse().unwrap());
        assert!(alpha > prev);
        prev = alpha;
        assert!(s1 < s0);
        let listed = rec[6].split(';').any(|t| t == "(1,1)");
        assert_eq!(listed, band11.contains(alpha), "alpha {alpha}");
        saw_band |= listed;
        assert!(["separated", "intersecting", "inconclusive"].contains(&&rec[5]));
    }
    assert!(saw_band);
}

#[test]
fn sweep_errors() {
    let run = overlapdim(
        &[
            "sweep", "--beta", "0.05", "--gamma", "0.07", "--alpha-min", "0.01", "--alpha-max",
            "0.04", "--steps", "3", "--out", "/nonexistent-dir/sweep.csv",
        ],
        None,
    );
    assert_eq!(run.code, 3);
    let run = overlapdim(
        &[
            "sweep", "--beta", "0.05", "--gamma", "0.07", "--alpha-min", "0.04", "--alpha-max",
            "0.06", "--steps", "3", "--out", "x.csv",
        ],
        None,
    );
    assert_eq!(run.code, 2);
}

#[test]
fn phi_series_modes() {
    let a = overlapdim(&["phi", "--series", "--p1", "0.2", "--p2", "0.3", "--p3", "0.5"], None).json();
    let b = overlapdim(&["phi", "--series", "--p1", "0.3", "--p2", "0.2", "--p3", "0.5"], None).json();
    validate(&a).unwrap();
    assert!(a["phi"].as_f64().unwrap() < 0.0);
    assert_eq!(a["phi"].as_f64().unwrap().to_bits(), b["phi"].as_f64().unwrap().to_bits());

    let o = overlapdim(
        &["phi", "--oracle", "--samples", "1000000", "--seed", "5", "--p1", "0.2", "--p2", "0.3", "--p3", "0.5"],
        None,
    )
    .json();
    validate(&o).unwrap();
    assert_eq!(o["metadata"]["seed"], 5);
    let diff = (o["estimate"].as_f64().unwrap() - a["phi"].as_f64().unwrap()).abs();
    assert!(diff < 3.0 * o["stderr"].as_f64().unwrap());
}

#[test]
fn oracle_needs_samples() {
    let run = overlapdim(&["phi", "--oracle", "--p1", "0.2", "--p2", "0.3", "--p3", "0.5"], None);
    assert_eq!(run.code, 2);
    let run = overlapdim(&["phi", "--oracle", "--series", "--samples", "10", "--p1", "0.2", "--p2", "0.3", "--p3", "0.5"], None);
    assert_eq!(run.code, 2);
}

#[test]
fn estimate_output() {
    let base = args(&[&["estimate", "--samples", "20000", "--probes", "10", "--seed", "3"], &PARAMS, &UNIFORM]);
    let doc = overlapdim(&base, None).json();
    validate(&doc).unwrap();
    assert!(doc.get("probe_slopes").is_none());
    assert_eq!(doc["metadata"]["seed"], 3);

    let verbose = overlapdim(&args(&[&base, &["--verbose"]]), None).json();
    validate(&verbose).unwrap();
    assert_eq!(verbose["probe_slopes"].as_array().unwrap().len(), 10);
    assert_eq!(verbose["slope"], doc["slope"]);
}

#[test]
fn estimate_errors() {
    let starved = overlapdim(
        &args(&[&["estimate", "--samples", "20", "--probes", "10"], &PARAMS, &UNIFORM]),
        None,
    );
    assert_eq!(starved.code, 4, "{}", starved.stderr);
    assert!(starved.stderr.contains("insufficient samples"));

    let unsorted = overlapdim(
        &args(&[&["estimate", "--radii", "0.001,0.01"], &PARAMS, &UNIFORM]),
        None,
    );
    assert_eq!(unsorted.code, 2);
}

#[test]
fn thread_variable_is_checked() {
    let mut cmd = std::process::Command::new(env!("CARGO_BIN_EXE_overlapdim"));
    let out = cmd
        .args(args(&[&["dim-measure"], &PARAMS, &UNIFORM]))
        .env("OVERLAPDIM_THREADS", "many")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn schemas_reject_malformed_documents() {
    let mut doc = overlapdim(&args(&[&["dim-measure"], &PARAMS, &UNIFORM]), None).json();
    validate(&doc).unwrap();
    doc["unexpected"] = 1.into();
    assert!(validate(&doc).is_err());
    doc.as_object_mut().unwrap().remove("unexpected");
    doc["metadata"].as_object_mut().unwrap().remove("seed");
    assert!(validate(&doc).is_err());
}
