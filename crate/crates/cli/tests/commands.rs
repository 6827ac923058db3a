use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn jointaug(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_jointaug"))
        .env_remove("JOINTAUG_THREADS")
        .args(args)
        .output()
        .unwrap()
}

fn fixtures() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fixtures/images")
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn json(path: &Path) -> serde_json::Value {
    serde_json::from_slice(&std::fs::read(path).unwrap()).unwrap()
}

#[test]
fn one_image_gives_two_views_and_one_entry_with_kernel_23() {
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("in");
    std::fs::create_dir(&input).unwrap();
    std::fs::copy(fixtures().join("objects.ppm"), input.join("objects.ppm")).unwrap();
    let out = dir.path().join("out");
    let o = jointaug(&[
        "augment",
        "--input",
        s(&input),
        "--out-dir",
        s(&out),
        "--mode",
        "joint-blur",
        "--seed",
        "4",
    ]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let mut names: Vec<_> = std::fs::read_dir(&out)
        .unwrap()
        .map(|e| e.unwrap().file_name().into_string().unwrap())
        .collect();
    names.sort();
    assert_eq!(names, ["manifest.jsonl", "objects_a.png", "objects_b.png"]);
    let manifest = std::fs::read_to_string(out.join("manifest.jsonl")).unwrap();
    assert_eq!(manifest.lines().count(), 1);
    let entry: serde_json::Value = serde_json::from_str(manifest.trim()).unwrap();
    assert_eq!(entry["view_a"]["blur"]["kernel_size"], 23);
    assert_eq!(entry["view_b"]["blur"]["kernel_size"], 23);
    let view = jointaug_core::io::read_image(out.join("objects_a.png")).unwrap();
    assert_eq!((view.width(), view.height()), (224, 224));
}

#[test]
fn unreadable_images_are_skipped_but_all_bad_is_an_error() {
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("in");
    std::fs::create_dir(&input).unwrap();
    std::fs::write(input.join("broken.png"), b"not a png").unwrap();
    let out = dir.path().join("out");
    let o = jointaug(&["augment", "--input", s(&input), "--out-dir", s(&out)]);
    assert_eq!(o.status.code(), Some(2));

    std::fs::copy(fixtures().join("rings.pgm"), input.join("rings.pgm")).unwrap();
    let o = jointaug(&["augment", "--input", s(&input), "--out-dir", s(&out)]);
    assert!(o.status.success());
    assert!(String::from_utf8_lossy(&o.stderr).contains("skipped 1 of 2"));
    assert!(out.join("rings_a.png").exists() && !out.join("broken_a.png").exists());
}

#[test]
fn config_file_supplies_defaults_and_flags_win() {
    let dir = tempfile::tempdir().unwrap();
    let config = dir.path().join("run.toml");
    std::fs::write(
        &config,
        "mode = \"random-crop\"\nseed = 9\ncount = 5\nbeta = 1.0\n",
    )
    .unwrap();
    let a = dir.path().join("a.jsonl");
    assert!(
        jointaug(&["sample", "--config", s(&config), "--out", s(&a)])
            .status
            .success()
    );
    let text = std::fs::read_to_string(&a).unwrap();
    assert_eq!(text.lines().count(), 5);
    assert!(text
        .lines()
        .all(|l| l.contains("\"mode\":\"random-crop\"") && l.contains("\"seed\":9")));

    let b = dir.path().join("b.jsonl");
    assert!(jointaug(&[
        "sample",
        "--config",
        s(&config),
        "--mode",
        "joint-crop",
        "--count",
        "2",
        "--out",
        s(&b)
    ])
    .status
    .success());
    let text = std::fs::read_to_string(&b).unwrap();
    assert_eq!(text.lines().count(), 2);
    assert!(text.contains("\"mode\":\"joint-crop\"") && text.contains("\"beta\":1.0"));

    std::fs::write(&config, "bogus = 1\n").unwrap();
    assert_eq!(
        jointaug(&["sample", "--config", s(&config), "--out", s(&b)])
            .status
            .code(),
        Some(2)
    );
}

#[test]
fn usage_errors_exit_2() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("x.jsonl");
    for args in [
        vec!["sample", "--mode", "bogus", "--out", s(&out)],
        vec!["sample", "--beta", "-8.5", "--out", s(&out)],
        vec![
            "sample",
            "--s-min",
            "0.5",
            "--s-max",
            "0.4",
            "--out",
            s(&out),
        ],
        vec!["sample", "--blur-prob-a", "1.5", "--out", s(&out)],
        vec!["sample"],
        vec!["--threads", "0", "sample", "--out", s(&out)],
    ] {
        assert_eq!(jointaug(&args).status.code(), Some(2), "{args:?}");
    }
}

#[test]
fn verify_writes_report_and_histogram() {
    let dir = tempfile::tempdir().unwrap();
    let (report, hist) = (dir.path().join("r.json"), dir.path().join("h.csv"));
    let o = jointaug(&[
        "verify",
        "--mode",
        "joint-blur",
        "--beta",
        "-1",
        "--count",
        "20000",
        "--bins",
        "20",
        "--report",
        s(&report),
        "--histogram",
        s(&hist),
    ]);
    assert!(o.status.success());
    let r = json(&report);
    assert_eq!(r["statistic"], "log_sigma_ratio");
    assert_eq!(r["passed"], true);
    assert_eq!(r["sample_count"], 20000);
    let csv = std::fs::read_to_string(&hist).unwrap();
    assert_eq!(csv.lines().next(), Some("bin_center,empirical,analytical"));
    assert_eq!(csv.lines().count(), 21);
}

#[test]
fn stats_report_and_csv_series() {
    let dir = tempfile::tempdir().unwrap();
    let report = dir.path().join("stats.json");
    let csv = dir.path().join("csv");
    let o = jointaug(&[
        "stats",
        "--betas",
        "-2,2",
        "--count",
        "200000",
        "--distance-count",
        "5000",
        "--tails",
        "2,3",
        "--report",
        s(&report),
        "--csv-dir",
        s(&csv),
    ]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let r = json(&report);
    assert_eq!(r["tails"][0]["analytical"], 0.28125);
    assert!((r["tails"][0]["empirical"].as_f64().unwrap() - 0.28125).abs() < 0.005);
    let d = &r["distance"];
    assert!(d[0]["mean_distance"].as_f64().unwrap() > d[1]["mean_distance"].as_f64().unwrap());
    for name in ["tails.csv", "mean_abs_log_ratio.csv", "distance.csv"] {
        assert!(csv.join(name).exists(), "{name}");
    }
}

#[test]
fn stats_mean_abs_at_beta_zero() {
    let dir = tempfile::tempdir().unwrap();
    let report = dir.path().join("stats.json");
    let o = jointaug(&[
        "stats",
        "--betas",
        "0",
        "--count",
        "1000000",
        "--distance-count",
        "1000",
        "--report",
        s(&report),
    ]);
    assert!(o.status.success());
    let m = json(&report)["mean_abs_log_ratio"][0]["empirical"]
        .as_f64()
        .unwrap();
    assert!((m - 5f64.ln() / 2.0).abs() < 0.003, "{m}");
}

#[test]
fn sdf_with_external_features() {
    let dir = tempfile::tempdir().unwrap();
    let manifest = dir.path().join("m.jsonl");
    let entry = |id: &str| {
        format!(
            "{{\"schema_version\":1,\"image_id\":\"{id}\",\"index\":0,\"seed\":0,\"mode\":\"joint-crop\",\"beta\":0.0,\"joint\":\"crop\",\"out_size\":8,\
             \"view_a\":{{\"scale\":1.0,\"aspect\":1.0,\"crop\":{{\"i\":0,\"j\":0,\"w\":8,\"h\":8,\"image_w\":8,\"image_h\":8}},\"blur\":null,\"color\":null}},\
             \"view_b\":{{\"scale\":1.0,\"aspect\":1.0,\"crop\":{{\"i\":0,\"j\":0,\"w\":8,\"h\":8,\"image_w\":8,\"image_h\":8}},\"blur\":null,\"color\":null}}}}\n"
        )
    };
    std::fs::write(&manifest, entry("p") + &entry("q")).unwrap();
    let features = dir.path().join("f.txt");
    std::fs::write(&features, "dim=2\np_a 1 0\np_b 0 3\nq_a 2 2\nq_b 1 1\n").unwrap();
    let report = dir.path().join("sdf.json");
    let o = jointaug(&[
        "sdf",
        "--features",
        s(&features),
        "--manifest",
        s(&manifest),
        "--report",
        s(&report),
    ]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let r = json(&report);
    assert_eq!(r["embedding"], "features");
    assert!((r["results"][0]["value"].as_f64().unwrap() - 0.5).abs() < 1e-15);

    let o = jointaug(&[
        "sdf",
        "--features",
        s(&features),
        "--manifest",
        s(&manifest),
        "--pairing",
        "identical",
        "--report",
        s(&report),
    ]);
    assert!(o.status.success());
    assert_eq!(json(&report)["results"][0]["value"], 1.0);

    std::fs::write(&features, "dim=2\np_a 1 0\np_b 0 3\n").unwrap();
    let o = jointaug(&[
        "sdf",
        "--features",
        s(&features),
        "--manifest",
        s(&manifest),
    ]);
    assert_eq!(o.status.code(), Some(2));
    let err = String::from_utf8_lossy(&o.stderr);
    assert!(err.contains("q_a") && err.contains("q_b"), "{err}");

    std::fs::write(&features, "dim=3\np_a 1 0\n").unwrap();
    let o = jointaug(&[
        "sdf",
        "--features",
        s(&features),
        "--manifest",
        s(&manifest),
    ]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("expected 3 values"));
}
