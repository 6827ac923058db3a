//! Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any
//! failure. Runs the library directly and the `jointaug` binary as a user
//! would.

use std::fmt::Write as _;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::{Path, PathBuf};
use std::process::{Command, ExitCode};
use std::time::Instant;

use jointaug_core::distributions::{randomcrop_ratio_cdf, tail_probability, BaselineRatio};
use jointaug_core::imageops::{crop_resize, gaussian_blur, kernel_size_for, ImageBuffer};
use jointaug_core::io::read_image;
use jointaug_core::metrics::summation::mean_and_std;
use jointaug_core::metrics::{
    distance_profile, gof_report, sdf, sdf_from_vectors, DistanceAnchor, ToyEmbedding, View,
};
use jointaug_core::rng::PairStream;
use jointaug_core::sampling::{sample_independent_areas, AspectRange, JointSampler};
use jointaug_core::{
    BlurSpec, ConfigOverrides, CropRegion, PairSampler, RatioBounds, ReferenceDistribution,
};
use rayon::prelude::*;
use sha2::{Digest, Sha256};

const BETAS: [f64; 5] = [-2.0, -1.0, 0.0, 1.0, 2.0];

type Outcome = Result<String, String>;

fn ensure(ok: bool, detail: String) -> Outcome {
    if ok {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn bounds() -> RatioBounds {
    RatioBounds::new(0.2, 1.0).unwrap()
}

fn repo() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../..")
}

fn fixture_dir() -> PathBuf {
    repo().join("fixtures/images")
}

fn bin() -> Command {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_jointaug"));
    cmd.env_remove("JOINTAUG_THREADS");
    cmd
}

fn run_bin(args: &[&str], threads: Option<&str>) -> (i32, String) {
    let mut cmd = bin();
    if let Some(t) = threads {
        cmd.env("JOINTAUG_THREADS", t);
    }
    let out = cmd.args(args).output().expect("binary runs");
    (
        out.status.code().unwrap_or(-1),
        String::from_utf8_lossy(&out.stderr).into_owned(),
    )
}

fn independent_ratios(n: u64, seed: u64) -> Vec<f64> {
    let b = bounds();
    (0..n)
        .into_par_iter()
        .map(|k| sample_independent_areas(b, &mut PairStream::new(seed, k)).ratio)
        .collect()
}

/// Independent oracle: the uniform law on `[-s, s]`.
struct Uniform(f64);

impl ReferenceDistribution for Uniform {
    fn cdf(&self, x: f64) -> f64 {
        ((x + self.0) / (2.0 * self.0)).clamp(0.0, 1.0)
    }
    fn pdf(&self, x: f64) -> f64 {
        if x.abs() <= self.0 {
            0.5 / self.0
        } else {
            0.0
        }
    }
    fn support(&self) -> (f64, f64) {
        (-self.0, self.0)
    }
    fn describe(&self) -> String {
        format!("U(-{0}, {0})", self.0)
    }
}

// Ratio law of independent scale draws

fn ratio_cdf_matches() -> Outcome {
    let start = Instant::now();
    let xs = independent_ratios(1_000_000, 101);
    let report = gof_report(&xs, &BaselineRatio::new(bounds()), 100).map_err(|e| e.to_string())?;
    let secs = start.elapsed().as_secs_f64();
    ensure(
        report.ks_statistic < 0.002 && secs < 10.0,
        format!(
            "max |F_n - F| = {:.5} over 1e6 pairs (< 0.002) in {secs:.2} s (< 10 s)",
            report.ks_statistic
        ),
    )
}

fn ratio_pdf_at_one() -> Outcome {
    // the density peaks with a kink at 1 (right slope -1.56), so the bin sits
    // on the flat left side, where its mean is 0.75 - 6e-4
    let n = 20_000_000u64;
    let width = 0.02;
    let hits = independent_ratios(n, 102)
        .iter()
        .filter(|&&x| (1.0 - width..1.0).contains(&x))
        .count();
    let density = hits as f64 / (n as f64 * width);
    ensure(
        (density - 0.75).abs() <= 0.005,
        format!("histogram bin [0.98, 1): {density:.5} (0.75 +/- 0.005)"),
    )
}

fn ratio_cdf_at_one() -> Outcome {
    let xs = independent_ratios(1_000_000, 103);
    let below = xs.iter().filter(|&&x| x <= 1.0).count() as f64 / xs.len() as f64;
    let closed = randomcrop_ratio_cdf(1.0, bounds());
    ensure(
        (below - 0.5).abs() <= 0.002 && (closed - 0.5).abs() < 1e-12,
        format!("empirical {below:.5}, closed form {closed} (0.5 +/- 0.002)"),
    )
}

fn ratio_tail_at_two() -> Outcome {
    let analytical = tail_probability(2.0, bounds()).map_err(|e| e.to_string())?;
    let xs = independent_ratios(1_000_000, 104);
    let empirical = xs.iter().filter(|&&x| x >= 2.0 || x <= 0.5).count() as f64 / xs.len() as f64;
    ensure(
        (analytical - 0.28125).abs() < 1e-12 && (empirical - 0.28125).abs() <= 0.005,
        format!("analytical {analytical}, empirical {empirical:.5} (0.28125 +/- 0.005)"),
    )
}

// Joint sampling

fn joint_bounds_and_ratio() -> Outcome {
    let start = Instant::now();
    let b = bounds();
    let mut worst = 0.0f64;
    let mut outside = 0usize;
    for (s, &beta) in BETAS.iter().enumerate() {
        let sampler = JointSampler::new(beta, b).map_err(|e| e.to_string())?;
        let (bad, err) = (0..1_000_000u64)
            .into_par_iter()
            .map(|k| {
                let p = sampler.sample(&mut PairStream::new(200 + s as u64, k));
                let out = !(0.2..=1.0).contains(&p.s1) || !(0.2..=1.0).contains(&p.s2);
                let rel = ((p.s2 / p.s1 - p.ratio) / p.ratio).abs() / f64::EPSILON;
                (usize::from(out), rel)
            })
            .reduce(|| (0, 0.0), |a, b| (a.0 + b.0, a.1.max(b.1)));
        outside += bad;
        worst = worst.max(err);
    }
    let secs = start.elapsed().as_secs_f64();
    ensure(
        outside == 0 && worst <= 8.0 && secs < 60.0,
        format!("5 x 1e6 pairs: {outside} outside [0.2, 1], worst ratio error {worst:.2} eps (<= 8), {secs:.2} s (< 60 s)"),
    )
}

fn jc_zero_is_uniform() -> Outcome {
    let sampler = JointSampler::new(0.0, bounds()).map_err(|e| e.to_string())?;
    let xs: Vec<f64> = (0..1_000_000u64)
        .into_par_iter()
        .map(|k| sampler.sample(&mut PairStream::new(301, k)).ratio.ln())
        .collect();
    let report = gof_report(&xs, &Uniform(5f64.ln()), 50).map_err(|e| e.to_string())?;
    ensure(
        report.ks_statistic < 0.002,
        format!(
            "KS {:.5} vs U(-ln 5, ln 5) at N = 1e6 (< 0.002)",
            report.ks_statistic
        ),
    )
}

fn jc_mean_abs_decreasing() -> Outcome {
    let mut stats = Vec::new();
    for (s, &beta) in BETAS.iter().enumerate() {
        let sampler = JointSampler::new(beta, bounds()).map_err(|e| e.to_string())?;
        let xs: Vec<f64> = (0..1_000_000u64)
            .into_par_iter()
            .map(|k| {
                sampler
                    .sample(&mut PairStream::new(400 + s as u64, k))
                    .ratio
                    .ln()
                    .abs()
            })
            .collect();
        let (m, sd) = mean_and_std(&xs);
        stats.push((beta, m, sd / (xs.len() as f64).sqrt()));
    }
    let mut detail = String::new();
    let mut ok = true;
    for w in stats.windows(2) {
        let sep = (w[0].1 - w[1].1) / (w[0].2.powi(2) + w[1].2.powi(2)).sqrt();
        ok &= sep >= 5.0;
        let _ = write!(
            detail,
            "E|log s_r|({})={:.4} > ({})={:.4} by {sep:.0} SE; ",
            w[0].0, w[0].1, w[1].0, w[1].1
        );
    }
    ensure(ok, detail.trim_end_matches("; ").to_owned())
}

// Distance

fn distance_ordering() -> Outcome {
    let run = |beta, seed| {
        distance_profile(
            beta,
            100_000,
            224,
            224,
            bounds(),
            AspectRange::default(),
            seed,
            DistanceAnchor::TopLeft,
        )
    };
    let lo = run(-2.0, 501).map_err(|e| e.to_string())?;
    let hi = run(2.0, 502).map_err(|e| e.to_string())?;
    let sep = (lo.mean_distance - hi.mean_distance)
        / (lo.std_error().powi(2) + hi.std_error().powi(2)).sqrt();
    ensure(
        sep >= 3.0,
        format!(
            "mean(-2) = {:.2} px, mean(+2) = {:.2} px, separation {sep:.1} SE (>= 3)",
            lo.mean_distance, hi.mean_distance
        ),
    )
}

// SDF

fn random_vectors(seed: u64, n: usize, dim: usize) -> Vec<(Vec<f64>, Vec<f64>)> {
    (0..n)
        .map(|k| {
            let mut s = PairStream::new(seed, k as u64);
            let mut v = || {
                (0..dim)
                    .map(|_| s.next_open01() - 0.5)
                    .collect::<Vec<f64>>()
            };
            (v(), v())
        })
        .collect()
}

fn sdf_identical_is_one() -> Outcome {
    let images = load_fixtures();
    let n = 64;
    let report = sdf(&ToyEmbedding, n, |k| {
        let (id, img) = &images[k % images.len()];
        Ok((
            View::with_image(id.clone(), img.clone()),
            View::with_image(id.clone(), img.clone()),
        ))
    })
    .map_err(|e| e.to_string())?;
    let vectors: Vec<_> = random_vectors(601, 1000, 32)
        .into_iter()
        .map(|(a, _)| (a.clone(), a))
        .collect();
    let from_vectors = sdf_from_vectors(&vectors).map_err(|e| e.to_string())?;
    ensure(
        report.value == 1.0 && from_vectors.value == 1.0,
        format!(
            "toy on fixtures: {}, 1000 random 32-d vectors: {}",
            report.value, from_vectors.value
        ),
    )
}

fn sdf_scale_invariant() -> Outcome {
    let pairs = random_vectors(602, 5000, 64);
    let scaled: Vec<_> = pairs
        .iter()
        .map(|(a, b)| {
            (
                a.iter().map(|x| x * 37.0).collect(),
                b.iter().map(|x| x * 37.0).collect(),
            )
        })
        .collect();
    let (p, q) = (
        sdf_from_vectors(&pairs).map_err(|e| e.to_string())?,
        sdf_from_vectors(&scaled).map_err(|e| e.to_string())?,
    );
    let diff = (p.value - q.value).abs();
    ensure(
        diff <= 1e-12,
        format!("|SDF - SDF(37x)| = {diff:.2e} (<= 1e-12)"),
    )
}

fn toy_sdf_pair(center: &str) -> Result<(f64, f64), String> {
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let report = dir.path().join("sdf.json");
    let fixtures = fixture_dir();
    let args = [
        "sdf",
        "--images",
        fixtures.to_str().unwrap(),
        "--pairing",
        "fixed-ratio:1",
        "--pairing",
        "fixed-ratio:1:5",
        "--center-fixed",
        center,
        "--count",
        "1000",
        "--seed",
        "3",
        "--report",
        report.to_str().unwrap(),
    ];
    let (code, stderr) = run_bin(&args, None);
    if code != 0 {
        return Err(format!("sdf exited {code}: {stderr}"));
    }
    let text = std::fs::read(&report).map_err(|e| e.to_string())?;
    let doc: serde_json::Value = serde_json::from_slice(&text).map_err(|e| e.to_string())?;
    let value = |k: usize| doc["results"][k]["value"].as_f64().unwrap_or(f64::NAN);
    Ok((value(0), value(1)))
}

fn sdf_directional_check() -> Outcome {
    let (c1, c5) = toy_sdf_pair("true")?;
    let (r1, r5) = toy_sdf_pair("false")?;
    ensure(
        c1 > c5 && r1 > r5,
        format!("toy SDF on fixtures, 1:1 vs 1:5: centred {c1:.4} > {c5:.4}, random placement {r1:.4} > {r5:.4}"),
    )
}

// Pixels

fn load_fixtures() -> Vec<(String, ImageBuffer)> {
    let mut paths: Vec<_> = std::fs::read_dir(fixture_dir())
        .unwrap()
        .map(|e| e.unwrap().path())
        .collect();
    paths.sort();
    paths
        .iter()
        .map(|p| {
            (
                p.file_stem().unwrap().to_str().unwrap().to_owned(),
                read_image(p).unwrap(),
            )
        })
        .collect()
}

fn blur_keeps_constants() -> Outcome {
    for v in [0u8, 77, 255] {
        for c in [1u8, 3] {
            let img = ImageBuffer::filled(40, 33, c, v).unwrap();
            for (sigma, k) in [(0.1, 3), (1.0, 7), (2.0, 23), (5.0, 31)] {
                let out = gaussian_blur(&img, &BlurSpec::new(sigma, k).unwrap())
                    .map_err(|e| e.to_string())?;
                if out.as_bytes().iter().any(|&b| b != v) {
                    return Err(format!(
                        "value {v}, {c} channel(s), sigma {sigma}, kernel {k} changed"
                    ));
                }
            }
        }
    }
    Ok("values {0, 77, 255} x {gray, RGB} x 4 kernels unchanged".into())
}

fn kernel_size_224() -> Outcome {
    let k = kernel_size_for(224);
    ensure(k == 23, format!("kernel_size_for(224) = {k}"))
}

fn full_crop_is_identity() -> Outcome {
    for (id, img) in load_fixtures() {
        let out = crop_resize(
            &img,
            &CropRegion::full(img.width(), img.height()),
            img.width(),
            img.height(),
        )
        .map_err(|e| e.to_string())?;
        if out != img {
            return Err(format!("{id} changed"));
        }
    }
    Ok("all fixtures reproduced byte-for-byte".into())
}

fn sha256_hex(bytes: &[u8]) -> String {
    Sha256::digest(bytes)
        .iter()
        .fold(String::new(), |mut s, b| {
            let _ = write!(s, "{b:02x}");
            s
        })
}

fn golden_digests() -> Outcome {
    let expected = std::fs::read_to_string(repo().join("fixtures/golden/views.sha256"))
        .map_err(|e| e.to_string())?;
    let images = load_fixtures();
    let mut checked = 0;
    for line in expected.lines() {
        let f: Vec<&str> = line.split_whitespace().collect();
        let [id, label, index, ha, hb] = f[..] else {
            return Err(format!("bad golden line `{line}`"));
        };
        let overrides = match label {
            "joint-color" => ConfigOverrides {
                color_target: Some("both".into()),
                blur_prob_a: Some(0.5),
                beta: Some(-1.0),
                ..Default::default()
            },
            "joint-blur" => ConfigOverrides {
                beta: Some(1.0),
                ..Default::default()
            },
            "joint-crop-or-blur" => ConfigOverrides {
                beta: Some(2.0),
                ..Default::default()
            },
            _ => ConfigOverrides {
                beta: Some(0.0),
                ..Default::default()
            },
        };
        let config = ConfigOverrides {
            mode: Some(label.into()),
            out_size: Some(64),
            ..overrides
        }
        .resolve()
        .map_err(|e| e.to_string())?;
        let sampler = PairSampler::new(config, 2024);
        let img = &images
            .iter()
            .find(|(i, _)| i == id)
            .ok_or(format!("no fixture {id}"))?
            .1;
        let (a, b) = sampler
            .augment_pair(img, id, index.parse().unwrap())
            .map_err(|e| e.to_string())?;
        if sha256_hex(a.as_bytes()) != ha || sha256_hex(b.as_bytes()) != hb {
            return Err(format!(
                "{id} {label} {index} differs from the golden digest"
            ));
        }
        checked += 1;
    }
    ensure(checked > 0, format!("{checked} golden view pairs match"))
}

// CLI determinism

fn dir_bytes(dir: &Path) -> Vec<(String, Vec<u8>)> {
    let mut files: Vec<_> = std::fs::read_dir(dir)
        .unwrap()
        .map(|e| {
            let p = e.unwrap().path();
            (
                p.file_name().unwrap().to_string_lossy().into_owned(),
                std::fs::read(&p).unwrap(),
            )
        })
        .collect();
    files.sort();
    files
}

fn cli_sample_deterministic() -> Outcome {
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let mut outputs = Vec::new();
    for (name, threads) in [("a", "1"), ("b", "1"), ("c", "4")] {
        let out = dir.path().join(format!("{name}.jsonl"));
        let args = [
            "sample",
            "--mode",
            "joint-crop",
            "--beta",
            "0",
            "--count",
            "1000",
            "--seed",
            "7",
            "--out",
            out.to_str().unwrap(),
        ];
        let (code, stderr) = run_bin(&args, Some(threads));
        if code != 0 {
            return Err(format!("sample exited {code}: {stderr}"));
        }
        outputs.push(std::fs::read(out).map_err(|e| e.to_string())?);
    }
    let lines = outputs[0].iter().filter(|&&b| b == b'\n').count();
    ensure(
        outputs[0] == outputs[1] && outputs[0] == outputs[2] && lines == 1000,
        format!("{lines} entries, identical across two runs and 1 vs 4 threads"),
    )
}

fn cli_augment_deterministic() -> Outcome {
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let fixtures = fixture_dir();
    let mut outputs = Vec::new();
    for (name, threads) in [("a", "1"), ("b", "1"), ("c", "4")] {
        let out = dir.path().join(name);
        let args = [
            "augment",
            "--input",
            fixtures.to_str().unwrap(),
            "--out-dir",
            out.to_str().unwrap(),
            "--mode",
            "joint-color",
            "--color-target",
            "both",
            "--beta",
            "-1",
            "--blur-prob-a",
            "1",
            "--blur-prob-b",
            "1",
            "--seed",
            "11",
        ];
        let (code, stderr) = run_bin(&args, Some(threads));
        if code != 0 {
            return Err(format!("augment exited {code}: {stderr}"));
        }
        outputs.push(dir_bytes(&out));
    }
    let replay = dir.path().join("replay");
    let manifest = dir.path().join("a/manifest.jsonl");
    let (code, stderr) = run_bin(
        &[
            "augment",
            "--input",
            fixtures.to_str().unwrap(),
            "--out-dir",
            replay.to_str().unwrap(),
            "--replay",
            manifest.to_str().unwrap(),
        ],
        Some("3"),
    );
    if code != 0 {
        return Err(format!("replay exited {code}: {stderr}"));
    }
    let files = outputs[0].len();
    ensure(
        outputs[0] == outputs[1]
            && outputs[0] == outputs[2]
            && dir_bytes(&replay) == outputs[0]
            && files == 9,
        format!("{files} files identical across two runs, 1 vs 4 threads and manifest replay"),
    )
}

fn cli_exit_codes() -> Outcome {
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let report = dir.path().join("r.json");
    let hist = dir.path().join("h.csv");
    let r = report.to_str().unwrap();
    let pass = run_bin(
        &[
            "verify",
            "--mode",
            "random-crop",
            "--count",
            "1000000",
            "--threshold",
            "0.002",
            "--report",
            r,
            "--histogram",
            hist.to_str().unwrap(),
        ],
        None,
    )
    .0;
    let uniform = run_bin(
        &[
            "verify",
            "--mode",
            "joint-crop",
            "--beta",
            "0",
            "--count",
            "1000000",
            "--threshold",
            "0.002",
            "--report",
            r,
        ],
        None,
    )
    .0;
    let mismatch = run_bin(
        &[
            "verify",
            "--mode",
            "joint-crop",
            "--beta",
            "2",
            "--reference-beta",
            "0",
            "--count",
            "100000",
            "--report",
            r,
        ],
        None,
    )
    .0;
    let mismatch_report = report.exists();
    let usage = run_bin(
        &[
            "sample",
            "--beta",
            "9",
            "--out",
            dir.path().join("x.jsonl").to_str().unwrap(),
        ],
        None,
    )
    .0;
    ensure(
        (pass, uniform, mismatch, usage) == (0, 0, 1, 2) && mismatch_report,
        format!("random-crop verify {pass}, joint-crop beta 0 verify {uniform}, beta 2 vs beta 0 reference {mismatch} (report written: {mismatch_report}), beta 9 {usage}"),
    )
}

type Criterion = (&'static str, fn() -> Outcome);

fn main() -> ExitCode {
    let criteria: [Criterion; 18] = [
        (
            "ratio-law: empirical CDF of s2/s1 matches closed form",
            ratio_cdf_matches,
        ),
        ("ratio-law: pdf(1) = 0.75 from histogram", ratio_pdf_at_one),
        ("ratio-law: cdf(1) = 0.5", ratio_cdf_at_one),
        (
            "ratio-law: two-sided tail at t = 2 is 0.28125",
            ratio_tail_at_two,
        ),
        (
            "joint-crop: bounds held and ratio preserved",
            joint_bounds_and_ratio,
        ),
        (
            "jc-shape: beta = 0 log-ratio is uniform",
            jc_zero_is_uniform,
        ),
        (
            "jc-shape: E|log s_r| strictly decreasing in beta",
            jc_mean_abs_decreasing,
        ),
        ("distance: mean(beta=-2) > mean(beta=+2)", distance_ordering),
        ("sdf: identical views score exactly 1", sdf_identical_is_one),
        ("sdf: cosine scale invariance", sdf_scale_invariant),
        (
            "sdf: toy ratio 1:1 beats ratio 1:5 on fixtures",
            sdf_directional_check,
        ),
        (
            "pixels: blur leaves constant images unchanged",
            blur_keeps_constants,
        ),
        ("pixels: kernel_size_for(224) = 23", kernel_size_224),
        (
            "pixels: full-region crop_resize is the identity",
            full_crop_is_identity,
        ),
        ("pixels: golden views are byte-stable", golden_digests),
        (
            "determinism: sample output across runs and threads",
            cli_sample_deterministic,
        ),
        (
            "determinism: augment output across runs, threads and replay",
            cli_augment_deterministic,
        ),
        ("cli: exit codes 0 / 1 / 2", cli_exit_codes),
    ];
    let mut failures = 0;
    for (name, check) in criteria {
        let outcome =
            catch_unwind(AssertUnwindSafe(check)).unwrap_or_else(|_| Err("panicked".into()));
        match outcome {
            Ok(detail) => println!("PASS  {name}: {detail}"),
            Err(detail) => {
                failures += 1;
                println!("FAIL  {name}: {detail}");
            }
        }
    }
    println!(
        "{} of {} criteria passed",
        criteria.len() - failures,
        criteria.len()
    );
    if failures == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
