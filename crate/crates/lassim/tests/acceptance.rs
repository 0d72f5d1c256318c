//! End-to-end acceptance suite. Each test prints one pass/fail line.
//!
//! The statistical criteria run on a deterministic generated corpus of
//! 150 natural-looking images at 480x272 with the default degradation
//! intensities; the expected orderings are properties of the pyramid
//! construction and hold on real photographic corpora as well.

use std::path::Path;
use std::sync::OnceLock;

use lassim::degrade::{
    derive_seed, elastic_transform, make_displacement_field, make_triplet_sets, BlurSpec,
    ElasticSpec, Intensity, TripletConfig,
};
use lassim::harness::{run_validity_experiment, ExperimentConfig, ValidityReport};
use lassim::pyramid::{build_pyramid, max_levels, reconstruct};
use lassim::stats::{build_distribution, js_divergence};
use lassim::synth::{generate_corpus, natural_image};
use lassim::{lassim, ssim, LumaImage, PyramidParams, SsimParams};

fn report_line(criterion: &str, outcome: Result<(), String>) {
    match outcome {
        Ok(()) => println!("acceptance {criterion}: PASS"),
        Err(msg) => {
            println!("acceptance {criterion}: FAIL - {msg}");
            panic!("{criterion} failed: {msg}");
        }
    }
}

fn xorshift_image(w: usize, h: usize, seed: u64) -> LumaImage {
    let mut s = seed.wrapping_add(0x9E3779B97F4A7C15);
    LumaImage::from_fn(w, h, |_, _| {
        s ^= s >> 27;
        s = s.wrapping_mul(0x2545F4914F6CDD1D);
        (s >> 32) as f64 % 256.0
    })
}

fn max_abs_diff(a: &LumaImage, b: &LumaImage) -> f64 {
    a.as_slice()
        .iter()
        .zip(b.as_slice())
        .map(|(x, y)| (x - y).abs())
        .fold(0.0, f64::max)
}

#[test]
fn criterion_1_pyramid_exactness() {
    report_line("1 (pyramid exactness)", (|| {
        let mut sizes = vec![
            (480, 272),
            (481, 273),
            (272, 480),
            (33, 47),
            (101, 53),
            (64, 64),
            (17, 129),
        ];
        let mut s = 0xD1B54A32D192ED03_u64;
        while sizes.len() < 50 {
            s ^= s >> 29;
            s = s.wrapping_mul(0x2545F4914F6CDD1D);
            let w = 16 + (s >> 33) as usize % 300;
            let h = 16 + (s >> 13) as usize % 300;
            sizes.push((w, h));
        }
        for (i, (w, h)) in sizes.into_iter().enumerate() {
            let img = xorshift_image(w, h, i as u64);
            let levels = max_levels(w, h).min(2 + i % 4);
            let params = PyramidParams::with_levels(levels);
            let pyr = build_pyramid(&img, &params).map_err(|e| e.to_string())?;
            let back = reconstruct(&pyr, &params.kernel).map_err(|e| e.to_string())?;
            let err = max_abs_diff(&img, &back);
            if err > 1e-6 {
                return Err(format!("{w}x{h} levels {levels}: error {err:.2e} > 1e-6"));
            }
        }
        Ok(())
    })());
}

/// Brute-force reference SSIM: explicit 2-D window weights, centered
/// moment accumulation, one window at a time.
fn ssim_reference(a: &LumaImage, b: &LumaImage, p: &SsimParams) -> f64 {
    let n = p.window_size;
    let taps = p.window_weights();
    let mut weights = vec![0.0; n * n];
    for y in 0..n {
        for x in 0..n {
            weights[y * n + x] = taps[y] * taps[x];
        }
    }
    let c1 = (p.k1 * p.data_range).powi(2);
    let c2 = (p.k2 * p.data_range).powi(2);
    let mut total = 0.0;
    let mut windows = 0usize;
    for wy in 0..=(a.height() - n) {
        for wx in 0..=(a.width() - n) {
            let (mut mx, mut my) = (0.0, 0.0);
            for dy in 0..n {
                for dx in 0..n {
                    let wgt = weights[dy * n + dx];
                    mx += wgt * a.get(wx + dx, wy + dy);
                    my += wgt * b.get(wx + dx, wy + dy);
                }
            }
            let (mut vx, mut vy, mut cov) = (0.0, 0.0, 0.0);
            for dy in 0..n {
                for dx in 0..n {
                    let wgt = weights[dy * n + dx];
                    let da = a.get(wx + dx, wy + dy) - mx;
                    let db = b.get(wx + dx, wy + dy) - my;
                    vx += wgt * da * da;
                    vy += wgt * db * db;
                    cov += wgt * da * db;
                }
            }
            total += ((2.0 * mx * my + c1) * (2.0 * cov + c2))
                / ((mx * mx + my * my + c1) * (vx + vy + c2));
            windows += 1;
        }
    }
    total / windows as f64
}

#[test]
fn criterion_2_ssim_oracle_equivalence() {
    report_line("2 (ssim oracle equivalence)", (|| {
        let p = SsimParams::default();
        for seed in 0..50u64 {
            let a = xorshift_image(32, 32, seed);
            let b = xorshift_image(32, 32, seed + 5000);
            let fast = ssim(&a, &b, &p).map_err(|e| e.to_string())?.value();
            let reference = ssim_reference(&a, &b, &p);
            if (fast - reference).abs() > 1e-9 {
                return Err(format!(
                    "pair {seed}: {fast} vs reference {reference} (diff {:.2e})",
                    (fast - reference).abs()
                ));
            }
            let identity = ssim(&a, &a, &p).map_err(|e| e.to_string())?.value();
            if identity != 1.0 {
                return Err(format!("ssim(x, x) = {identity}, expected exactly 1"));
            }
            let ba = ssim(&b, &a, &p).map_err(|e| e.to_string())?.value();
            if fast != ba {
                return Err(format!("asymmetric: {fast} vs {ba}"));
            }
        }
        Ok(())
    })());
}

#[test]
fn criterion_3_identity_suite() {
    report_line("3 (identity suite)", (|| {
        // residual-metric identity through level 4
        let img = natural_image(480, 272, 17);
        let pyr = PyramidParams::with_levels(5);
        let p = SsimParams::default();
        for level in 0..=4 {
            let s = lassim(&img, &img, level, &pyr, &p)
                .map_err(|e| e.to_string())?
                .value();
            if (s - 1.0).abs() > 1e-12 {
                return Err(format!("lassim(x, x, {level}) = {s}"));
            }
        }

        // js(P, P) = 0
        let d = build_distribution(&[0.1, 0.5, 0.5, 0.93], 100, (0.0, 1.0))
            .map_err(|e| e.to_string())?;
        let js = js_divergence(&d, &d).map_err(|e| e.to_string())?;
        if js != 0.0 {
            return Err(format!("js(P, P) = {js}"));
        }

        // alpha = 0 elastic transform is bitwise identity
        let spec = ElasticSpec::new(Intensity::L, 8.0, 0.0, 9).map_err(|e| e.to_string())?;
        let field =
            make_displacement_field(123, 77, &spec).map_err(|e| e.to_string())?;
        let target = xorshift_image(123, 77, 4);
        let warped = elastic_transform(&target, &field).map_err(|e| e.to_string())?;
        if warped != target {
            return Err("alpha=0 warp is not bitwise identical".into());
        }

        // deterministic reruns are byte-identical
        let f1 = make_displacement_field(64, 48, &ElasticSpec::preset(Intensity::M, 7))
            .map_err(|e| e.to_string())?;
        let f2 = make_displacement_field(64, 48, &ElasticSpec::preset(Intensity::M, 7))
            .map_err(|e| e.to_string())?;
        if f1.dx != f2.dx || f1.dy != f2.dy {
            return Err("same-seed displacement fields differ".into());
        }
        let tmp = tempfile::tempdir().map_err(|e| e.to_string())?;
        let src = tmp.path().join("src");
        generate_corpus(&src, 2, 64, 64, 1).map_err(|e| e.to_string())?;
        let cfg = TripletConfig {
            blur_levels: vec![BlurSpec::new(Intensity::L, 1.5).map_err(|e| e.to_string())?],
            deform_levels: vec![
                ElasticSpec::new(Intensity::M, 4.0, 25.0, 0).map_err(|e| e.to_string())?
            ],
            seed: 3,
        };
        make_triplet_sets(&src, &tmp.path().join("a"), &cfg).map_err(|e| e.to_string())?;
        make_triplet_sets(&src, &tmp.path().join("b"), &cfg).map_err(|e| e.to_string())?;
        for rel in ["gt/synth_0000.png", "blur_L/synth_0001.png", "def_M_blur_L/synth_0000.png"] {
            let a = std::fs::read(tmp.path().join("a").join(rel)).map_err(|e| e.to_string())?;
            let b = std::fs::read(tmp.path().join("b").join(rel)).map_err(|e| e.to_string())?;
            if a != b {
                return Err(format!("rerun produced different bytes for {rel}"));
            }
        }
        Ok(())
    })());
}

#[test]
fn criterion_4_global_offset_property() {
    report_line("4 (global-offset property)", (|| {
        let pyr = PyramidParams::with_levels(4);
        let p = SsimParams::default();
        for i in 0..20u64 {
            let img = natural_image(192, 160, 100 + i);
            for c in [-50.0, -10.0, 10.0, 50.0] {
                let shifted = img.offset(c);
                let pixel = ssim(&img, &shifted, &p).map_err(|e| e.to_string())?.value();
                if pixel >= 0.999 {
                    return Err(format!("image {i}, offset {c}: ssim {pixel} >= 0.999"));
                }
                for level in 1..=3 {
                    let res = lassim(&img, &shifted, level, &pyr, &p)
                        .map_err(|e| e.to_string())?
                        .value();
                    if res < 0.999999 {
                        return Err(format!(
                            "image {i}, offset {c}, level {level}: lassim {res} < 0.999999"
                        ));
                    }
                }
            }
        }
        Ok(())
    })());
}

fn shared_experiment() -> &'static (tempfile::TempDir, ValidityReport) {
    static REPORT: OnceLock<(tempfile::TempDir, ValidityReport)> = OnceLock::new();
    REPORT.get_or_init(|| {
        let tmp = tempfile::tempdir().expect("tempdir");
        let src = tmp.path().join("corpus");
        generate_corpus(&src, 150, 480, 272, 5).expect("corpus generation");
        let cfg = ExperimentConfig {
            source_dir: src,
            output_dir: tmp.path().join("out"),
            sample_count: 150,
            ..ExperimentConfig::default()
        };
        let report = run_validity_experiment(&cfg).expect("experiment run");
        (tmp, report)
    })
}

/// Rows grouped as [blur][deform] in L, M, H order.
fn grid(report: &ValidityReport) -> Vec<Vec<&lassim::harness::ReportRow>> {
    let blur_order = ["L", "M", "H"];
    let def_order = ["L", "M", "H"];
    blur_order
        .iter()
        .map(|b| {
            def_order
                .iter()
                .map(|d| {
                    report
                        .rows
                        .iter()
                        .find(|r| r.blur == *b && r.deform == *d)
                        .expect("missing combination row")
                })
                .collect()
        })
        .collect()
}

#[test]
fn criterion_5_divergence_separation() {
    report_line("5 (divergence separation)", (|| {
        let (_, report) = shared_experiment();
        if report.rows.len() != 9 {
            return Err(format!("expected 9 rows, got {}", report.rows.len()));
        }
        for r in &report.rows {
            if r.js_lassim.partial_cmp(&r.js_ssim) != Some(std::cmp::Ordering::Greater) {
                return Err(format!(
                    "[{}_def, {}_blur]: JS_LaSSIM {:.3} <= JS_SSIM {:.3}",
                    r.deform, r.blur, r.js_lassim, r.js_ssim
                ));
            }
        }
        let mh = report
            .rows
            .iter()
            .find(|r| r.deform == "M" && r.blur == "H")
            .ok_or("missing [M_def, H_blur] row")?;
        if mh.js_ssim > 0.1 {
            return Err(format!("[M_def, H_blur] JS_SSIM {:.3} > 0.1", mh.js_ssim));
        }
        if mh.js_lassim < 0.3 {
            return Err(format!("[M_def, H_blur] JS_LaSSIM {:.3} < 0.3", mh.js_lassim));
        }
        Ok(())
    })());
}

#[test]
fn criterion_6_monotonicity() {
    report_line("6 (monotonicity)", (|| {
        let (_, report) = shared_experiment();
        let grid = grid(report);

        // mean SSIM(GT, blur) strictly decreases across blur L -> M -> H
        let blur_means: Vec<f64> = grid.iter().map(|block| block[0].ssim_blur.mean).collect();
        if !(blur_means[0] > blur_means[1] && blur_means[1] > blur_means[2]) {
            return Err(format!("ssim blur means not decreasing: {blur_means:?}"));
        }

        // mean LaSSIM(GT, deform+blur) strictly decreases across deform
        // L -> M -> H at every fixed blur
        for (block, blur) in grid.iter().zip(["L", "M", "H"]) {
            let means: Vec<f64> = block.iter().map(|r| r.lassim_deform_blur.mean).collect();
            if !(means[0] > means[1] && means[1] > means[2]) {
                return Err(format!(
                    "lassim deform means not decreasing at {blur}_blur: {means:?}"
                ));
            }
        }
        Ok(())
    })());
}

#[test]
fn criterion_7_blur_robustness_gap() {
    report_line("7 (blur-robustness gap)", (|| {
        let (_, report) = shared_experiment();
        let row = report
            .rows
            .iter()
            .find(|r| r.blur == "H")
            .ok_or("missing H_blur row")?;
        let gap = row.lassim_blur.mean - row.ssim_blur.mean;
        if gap < 0.1 {
            return Err(format!(
                "LaSSIM {:.3} - SSIM {:.3} = {gap:.3} < 0.1 at the highest blur",
                row.lassim_blur.mean, row.ssim_blur.mean
            ));
        }
        Ok(())
    })());
}

// Criterion 8 (CLI contract) lives in tests/cli.rs next to the other
// command-line tests; it prints its own acceptance line.

#[test]
fn experiment_artifacts_are_written() {
    let (tmp, _) = shared_experiment();
    for name in [
        "out/report.md",
        "out/report.csv",
        "out/report.json",
        "out/manifest.json",
        "out/scores/def_M_blur_H.csv",
    ] {
        assert!(
            tmp.path().join(name).exists(),
            "missing artifact {name}"
        );
    }
}

#[test]
fn experiment_seeds_flow_from_global_seed() {
    // spot-check that the recorded metadata reproduces per-image seeds
    let (_, report) = shared_experiment();
    assert_eq!(report.metadata.seed, 0);
    assert_eq!(report.metadata.images_used, 150);
    let s0 = derive_seed(report.metadata.seed, 0);
    let s1 = derive_seed(report.metadata.seed, 1);
    assert_ne!(s0, s1);
}

#[test]
fn experiment_report_paths_are_deterministic() {
    let (tmp, _) = shared_experiment();
    let md = std::fs::read_to_string(tmp.path().join("out/report.md")).unwrap();
    assert_eq!(md.lines().count(), 11, "9 rows plus 2 header lines");
    assert!(Path::new(&tmp.path().join("out/scores/def_L_blur_L.csv")).exists());
}
