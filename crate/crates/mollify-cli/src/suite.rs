//! The `suite` subcommand: run every corpus fixture through the mollifier
//! estimator, the band-pass oracle, and (for the cusps) the direct seminorm;
//! check the rate/moment law and the hypothesis-classification fixtures; and
//! emit a cross-validation table plus machine-readable reports.

use std::path::PathBuf;

use clap::Args;

use mollify_core::corpus::{
    analysis_window, corpus_spec, lp_levels_for, standard_corpus, CROSS_METHOD_TOLERANCE,
    K_SPREAD_TOLERANCE,
};
use mollify_core::{
    bump_test_function, classify_sequence, estimate_rate, fit_growth_order, gen_bump, gen_delta,
    gen_power_cusp, geometric_ladder, holder_seminorm, k_consistency, lp_decompose,
    lp_estimate_alpha, sweep_sequence, ApproxSequence, Conclusion, ConclusionRoute, Error,
    GridSpec, LpFamily, MollifierKernel,
};

const EXIT_TOLERANCE: u8 = 1;

#[derive(Args)]
pub struct SuiteArgs {
    /// Directory for per-fixture reports and the cross-validation table
    #[arg(long)]
    out: Option<PathBuf>,
    /// Tail fraction for every fit
    #[arg(long, default_value_t = 0.5)]
    tail: f64,
}

#[derive(serde::Serialize)]
struct SuiteRow {
    fixture: String,
    true_alpha: Option<f64>,
    alpha_mollifier: Option<f64>,
    alpha_bandpass: f64,
    cross_delta: Option<f64>,
    k_spread: Option<f64>,
    k_list: Vec<usize>,
    saturated: bool,
    ok: bool,
}

#[derive(serde::Serialize)]
struct SuiteChecks {
    rate_b: Vec<(usize, f64, f64)>,
    classification_ok: bool,
    seminorm_ok: bool,
    max_cross_delta: f64,
    pass: bool,
}

pub fn cmd_suite(args: SuiteArgs) -> Result<u8, Error> {
    if let Some(dir) = &args.out {
        std::fs::create_dir_all(dir)?;
    }
    let tail = args.tail;
    let kernel = MollifierKernel::gaussian();
    let window = analysis_window();
    let mut rows = Vec::new();
    let mut all_ok = true;
    let mut max_cross: f64 = 0.0;

    println!(
        "{:<20} {:>8} {:>11} {:>10} {:>8} {:>8}  status",
        "fixture", "true", "mollifier", "band-pass", "|delta|", "spread"
    );
    for entry in standard_corpus() {
        let rep = entry.build()?;
        let scales = entry.scales()?;
        let family = LpFamily::new(8, 1.0)?;
        let decomp = lp_decompose(&rep, &family, lp_levels_for(entry.spec()), window)?;
        let lp = lp_estimate_alpha(&decomp, tail)?;

        let consistency = k_consistency(&rep, &kernel, entry.k_list, &scales, window, tail);
        let row = match (&consistency, entry.true_alpha) {
            (Ok(report), Some(true_alpha)) => {
                let primary = &report.estimates[0];
                let delta = (primary.alpha - lp.alpha).abs();
                max_cross = max_cross.max(delta);
                let ok = (primary.alpha - true_alpha).abs() <= entry.alpha_tolerance
                    && delta <= CROSS_METHOD_TOLERANCE
                    && report.spread <= K_SPREAD_TOLERANCE;
                println!(
                    "{:<20} {:>8.2} {:>11.4} {:>10.4} {:>8.4} {:>8.4}  {}",
                    entry.name,
                    true_alpha,
                    primary.alpha,
                    lp.alpha,
                    delta,
                    report.spread,
                    if ok { "ok" } else { "FAIL" }
                );
                SuiteRow {
                    fixture: entry.name.into(),
                    true_alpha: Some(true_alpha),
                    alpha_mollifier: Some(primary.alpha),
                    alpha_bandpass: lp.alpha,
                    cross_delta: Some(delta),
                    k_spread: Some(report.spread),
                    k_list: entry.k_list.to_vec(),
                    saturated: false,
                    ok,
                }
            }
            (Err(Error::AllSaturated), None) => {
                // smooth fixture: saturation is the correct verdict
                println!(
                    "{:<20} {:>8} {:>11} {:>10.4} {:>8} {:>8}  ok",
                    entry.name, "smooth", "saturated", lp.alpha, "-", "-"
                );
                SuiteRow {
                    fixture: entry.name.into(),
                    true_alpha: None,
                    alpha_mollifier: None,
                    alpha_bandpass: lp.alpha,
                    cross_delta: None,
                    k_spread: None,
                    k_list: entry.k_list.to_vec(),
                    saturated: true,
                    ok: true,
                }
            }
            (Ok(report), None) => {
                println!(
                    "{:<20} {:>8} {:>11.4} {:>10.4} {:>8} {:>8}  FAIL (expected saturation)",
                    entry.name, "smooth", report.estimates[0].alpha, lp.alpha, "-", "-"
                );
                SuiteRow {
                    fixture: entry.name.into(),
                    true_alpha: None,
                    alpha_mollifier: Some(report.estimates[0].alpha),
                    alpha_bandpass: lp.alpha,
                    cross_delta: None,
                    k_spread: None,
                    k_list: entry.k_list.to_vec(),
                    saturated: false,
                    ok: false,
                }
            }
            (Err(e), _) => return Err(Error::Validation(format!("{}: {e}", entry.name))),
        };
        all_ok &= row.ok;
        if let Some(dir) = &args.out {
            let path = dir.join(format!(
                "{}.json",
                entry.name.replace(['(', ')', ',', '\''], "_")
            ));
            let mut text = serde_json::to_string_pretty(&row)?;
            text.push('\n');
            std::fs::write(path, text)?;
        }
        rows.push(row);
    }

    // the direct seminorm on the cusps: stable at the true exponent,
    // refinement-divergent a quarter above
    let mut seminorm_ok = true;
    for alpha in [0.3, 0.5, 0.7] {
        let coarse = gen_power_cusp(alpha, corpus_spec(16))?;
        let fine = gen_power_cusp(alpha, corpus_spec(17))?;
        let s_ratio = holder_seminorm(fine.grid().unwrap(), alpha, window)?
            / holder_seminorm(coarse.grid().unwrap(), alpha, window)?;
        let d_ratio = holder_seminorm(fine.grid().unwrap(), alpha + 0.25, window)?
            / holder_seminorm(coarse.grid().unwrap(), alpha + 0.25, window)?;
        let ok = (s_ratio - 1.0).abs() < 0.05 && d_ratio > 1.15;
        seminorm_ok &= ok;
        println!(
            "seminorm cusp({alpha}): refinement ratio {s_ratio:.4} at alpha, {d_ratio:.4} at alpha+0.25  {}",
            if ok { "ok" } else { "FAIL" }
        );
    }
    all_ok &= seminorm_ok;

    // rate/moment law on the point mass
    let spec = corpus_spec(16);
    let delta = gen_delta(0, 0.0, spec)?;
    let rate_ladder = geometric_ladder(2.0, 64.0, 2)?;
    let rhos: Vec<(String, mollify_core::GridSignal)> = [1.0, 1.3, 1.6]
        .iter()
        .map(|&w| {
            Ok((
                format!("bump(width={w})"),
                bump_test_function(0.0, w, spec)?,
            ))
        })
        .collect::<Result<_, Error>>()?;
    let mut rate_rows = Vec::new();
    for (vanish, want) in [(1usize, 2.0), (3, 4.0), (5, 6.0)] {
        let k = if vanish == 1 {
            MollifierKernel::gaussian()
        } else {
            MollifierKernel::moment_vanishing(vanish)?
        };
        let seq = ApproxSequence::Regularization {
            target: &delta,
            kernel: &k,
        };
        let rate = estimate_rate(&seq, &rate_ladder, &rhos, tail)?;
        let ok = (rate.b - want).abs() <= 0.2;
        all_ok &= ok;
        println!(
            "rate law vanish={vanish}: b = {:.4} (target {want} +/- 0.2)  {}",
            rate.b,
            if ok { "ok" } else { "FAIL" }
        );
        rate_rows.push((vanish, rate.b, want));
    }

    // hypothesis classification fixtures
    let classification_ok = classification_checks(spec, &kernel, &rhos, tail)?;
    all_ok &= classification_ok;

    if let Some(dir) = &args.out {
        let mut csv = String::from(
            "fixture,true_alpha,alpha_mollifier,alpha_bandpass,cross_delta,k_spread,saturated,ok\n",
        );
        for r in &rows {
            csv.push_str(&format!(
                "{},{},{},{},{},{},{},{}\n",
                r.fixture,
                r.true_alpha.map_or(String::from(""), |v| format!("{v}")),
                r.alpha_mollifier
                    .map_or(String::from(""), |v| format!("{v:.16e}")),
                format_args!("{:.16e}", r.alpha_bandpass),
                r.cross_delta
                    .map_or(String::from(""), |v| format!("{v:.16e}")),
                r.k_spread.map_or(String::from(""), |v| format!("{v:.16e}")),
                r.saturated,
                r.ok
            ));
        }
        std::fs::write(dir.join("crossval.csv"), csv)?;
        let checks = SuiteChecks {
            rate_b: rate_rows,
            classification_ok,
            seminorm_ok,
            max_cross_delta: max_cross,
            pass: all_ok,
        };
        let doc = serde_json::json!({ "rows": rows, "checks": checks });
        let mut text = serde_json::to_string_pretty(&doc)?;
        text.push('\n');
        std::fs::write(dir.join("suite.json"), text)?;
    }

    println!(
        "suite: max cross-method delta {max_cross:.4}; {}",
        if all_ok { "PASS" } else { "FAIL" }
    );
    Ok(if all_ok { 0 } else { EXIT_TOLERANCE })
}

/// The three sequences that separate the growth and rate hypotheses: the slow
/// log-scaled family (growth fine, rate too slow), the point-mass
/// regularization at k = 0 (rate fine, growth too fast), and the smooth bump
/// (both fine).
fn classification_checks(
    spec: GridSpec,
    kernel: &MollifierKernel,
    rhos: &[(String, mollify_core::GridSignal)],
    tail: f64,
) -> Result<bool, Error> {
    let window = analysis_window();
    let mut ok = true;

    let per_order = |seq: &ApproxSequence, k: usize, ladder: &[f64]| -> Result<Vec<_>, Error> {
        let sweep = sweep_sequence(seq, k, ladder, window)?;
        (0..=k).map(|m| fit_growth_order(&sweep, m, tail)).collect()
    };

    let log_seq = ApproxSequence::LogMollifiedDelta {
        kernel,
        location: 0.0,
        spec,
    };
    let log_ladder: Vec<f64> = (0..12)
        .map(|i| 10f64.powf(8.0 + 7.0 * i as f64 / 11.0))
        .collect();
    let fits = per_order(&log_seq, 1, &log_ladder)?;
    let rate = estimate_rate(&log_seq, &log_ladder, rhos, tail)?;
    let report = classify_sequence(&fits, &rate, 1, 0.1);
    let this = report.growth_all_probes && !report.rate_power && report.conclusions.is_empty();
    ok &= this;
    println!(
        "classify log-sequence: growth probes met={}, rate b={:.3} (power rate={}), conclusions={}  {}",
        report.growth_all_probes,
        report.rate_b,
        report.rate_power,
        report.conclusions.len(),
        if this { "ok" } else { "FAIL" }
    );

    let delta = gen_delta(0, 0.0, spec)?;
    let delta_seq = ApproxSequence::Regularization {
        target: &delta,
        kernel,
    };
    let fits = per_order(&delta_seq, 0, &geometric_ladder(4.0, 512.0, 2)?)?;
    let rate = estimate_rate(&delta_seq, &geometric_ladder(2.0, 64.0, 2)?, rhos, tail)?;
    let report = classify_sequence(&fits, &rate, 0, 0.1);
    let this = !report.growth_all_probes && report.rate_power && report.conclusions.is_empty();
    ok &= this;
    println!(
        "classify delta regularization k=0: growth slope={:.3}, rate b={:.3}, conclusions={}  {}",
        fits[0].slope,
        report.rate_b,
        report.conclusions.len(),
        if this { "ok" } else { "FAIL" }
    );

    let bump = gen_bump(spec)?;
    let bump_seq = ApproxSequence::Regularization {
        target: &bump,
        kernel,
    };
    let fits = per_order(&bump_seq, 2, &geometric_ladder(4.0, 512.0, 2)?)?;
    let rate = estimate_rate(&bump_seq, &geometric_ladder(2.0, 64.0, 2)?, rhos, tail)?;
    let report = classify_sequence(&fits, &rate, 2, 0.1);
    let this = report.growth_bounded
        && report.conclusions.iter().any(|c| {
            matches!(
                c,
                Conclusion::RegularityBelowOrder {
                    route: ConclusionRoute::SlowGrowthPowerRate,
                    ..
                }
            )
        });
    ok &= this;
    println!(
        "classify bump regularization k=2: bounded={}, rate b={:.3}, conclusions={}  {}",
        report.growth_bounded,
        report.rate_b,
        report.conclusions.len(),
        if this { "ok" } else { "FAIL" }
    );
    Ok(ok)
}
