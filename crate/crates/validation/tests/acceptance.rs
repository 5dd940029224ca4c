//! Acceptance gate: one PASS/FAIL line per criterion.

use std::process::ExitCode;
use std::time::Instant;

use vncap::analysis::{
    asymptotic_consistency, audit_inequalities, axiom_spot_checks, depolarizing_family,
    hamming_holds, maximize_capacity, rate_bound, HammingMode, HammingQuery, DEFAULT_Q_TOL,
};
use vncap::channel::{run_channel, schumacher_fano_bound, ChannelTranscript, DilationChannel};
use vncap::depolarizing::{
    analytic_transcript, build_dilation, classical_capacity, classical_ensemble,
    classical_use_simulated, classical_use_transcript, dephasing_mutual,
    dephasing_mutual_simulated, depolarizing_kraus, kholevo_chi, quantum_capacity,
    superdense_scenario, superdense_threshold, DepolParams,
};
use vncap::qmat::{DensityMatrix, SubsystemLayout};

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn grid(start: f64, stop: f64, step: f64) -> Vec<f64> {
    let n = ((stop - start) / step + 1e-9).floor() as usize + 1;
    (0..n).map(|i| start + i as f64 * step).collect()
}

fn within(name: &str, got: f64, want: f64, tol: f64) -> Result<(), String> {
    if (got - want).abs() <= tol {
        Ok(())
    } else {
        Err(format!("{name}: got {got}, expected {want} within {tol:e}"))
    }
}

fn fields(t: &ChannelTranscript) -> [f64; 7] {
    [
        t.s_in,
        t.s_out,
        t.s_env,
        t.loss,
        t.mutual_entanglement,
        t.coherent_info,
        t.fidelity,
    ]
}

fn closed_form_vs_simulation() -> Outcome {
    let start = Instant::now();
    let mut worst = 0f64;
    for p in grid(0.0, 0.75, 0.05) {
        for q in grid(0.0, 1.0, 0.1) {
            let prm = DepolParams::new(p, q).map_err(|e| e.to_string())?;
            let simulated = build_dilation(prm)
                .and_then(|s| s.run())
                .map(|r| r.transcript)
                .map_err(|e| e.to_string())?;
            let exact = analytic_transcript(prm);
            for (a, b) in fields(&simulated).iter().zip(fields(&exact)) {
                worst = worst.max((a - b).abs());
            }
        }
    }
    let secs = start.elapsed().as_secs_f64();
    if worst > 1e-9 {
        return Err(format!("max deviation {worst:e}"));
    }
    if secs >= 5.0 {
        return Err(format!("took {secs:.2} s"));
    }
    Ok(format!(
        "176 grid points, max deviation {worst:.1e}, {secs:.2} s"
    ))
}

fn capacity_endpoints() -> Outcome {
    let c0 = quantum_capacity(0.0);
    if c0 != 2.0 {
        return Err(format!("C(0) = {c0}"));
    }
    within("C(3/4)", quantum_capacity(0.75), 0.0, 1e-12)?;
    Ok(format!(
        "C(0) = {c0}, C(3/4) = {:.1e}",
        quantum_capacity(0.75)
    ))
}

fn optimizer() -> Outcome {
    let mut detail = Vec::new();
    for p in [0.1, 0.3, 0.6] {
        let r =
            maximize_capacity(depolarizing_family(p), DEFAULT_Q_TOL).map_err(|e| e.to_string())?;
        within(&format!("q* at p={p}"), r.argmax_q, 0.5, 1e-6)?;
        within(
            &format!("value at p={p}"),
            r.value,
            quantum_capacity(p),
            1e-9,
        )?;
        detail.push(format!("p={p}: {:.6}", r.value));
    }
    Ok(detail.join(", "))
}

fn superdense_root() -> Outcome {
    let t = superdense_threshold().map_err(|e| e.to_string())?;
    within("threshold", t, 0.1893, 1e-3)?;
    Ok(format!("p* = {t:.6}"))
}

fn classical_use() -> Outcome {
    let mut worst = 0f64;
    for p in grid(0.0, 0.75, 0.05) {
        let at_half =
            classical_use_transcript(DepolParams::new(p, 0.5).map_err(|e| e.to_string())?);
        within(
            &format!("I at p={p}"),
            at_half.mutual_info,
            classical_capacity(p),
            1e-9,
        )?;
        let channel = depolarizing_kraus(p).map_err(|e| e.to_string())?;
        for q in [0.1, 0.3, 0.5, 0.8] {
            let prm = DepolParams::new(p, q).map_err(|e| e.to_string())?;
            let exact = classical_use_transcript(prm);
            let (probs, outputs) = classical_ensemble(&channel, q).map_err(|e| e.to_string())?;
            let chi = kholevo_chi(&probs, &outputs).map_err(|e| e.to_string())?;
            within(
                &format!("chi at p={p}, q={q}"),
                chi,
                exact.mutual_info,
                1e-9,
            )?;
            let dil = build_dilation(prm).map_err(|e| e.to_string())?;
            let sim = classical_use_simulated(&dil.channel, q).map_err(|e| e.to_string())?;
            within(
                &format!("simulated I at p={p}, q={q}"),
                sim.mutual_info,
                exact.mutual_info,
                1e-9,
            )?;
            within(
                &format!("simulated L at p={p}, q={q}"),
                sim.classical_loss,
                exact.classical_loss,
                1e-9,
            )?;
            worst = worst
                .max((chi - exact.mutual_info).abs())
                .max((sim.mutual_info - exact.mutual_info).abs());
        }
    }
    Ok(format!("max deviation {worst:.1e}"))
}

fn fano_saturation() -> Outcome {
    let mut min_slack = f64::INFINITY;
    for p in grid(0.0, 0.75, 0.1) {
        for q in [0.5, 0.1, 0.3, 0.9] {
            let prm = DepolParams::new(p, q).map_err(|e| e.to_string())?;
            let t = build_dilation(prm)
                .and_then(|s| s.run())
                .map(|r| r.transcript)
                .map_err(|e| e.to_string())?;
            let slack = schumacher_fano_bound(t.fidelity, 2, 2) - t.s_env;
            if q == 0.5 {
                within(&format!("saturation at p={p}"), slack, 0.0, 1e-9)?;
            } else if slack < -1e-9 {
                return Err(format!("negative slack {slack:e} at p={p}, q={q}"));
            } else {
                min_slack = min_slack.min(slack);
            }
        }
    }
    Ok(format!(
        "saturated at q=1/2, min slack elsewhere {min_slack:.3e}"
    ))
}

fn inequality_audit() -> Outcome {
    let start = Instant::now();
    let report = audit_inequalities(42, 200, 1e-9).map_err(|e| e.to_string())?;
    let secs = start.elapsed().as_secs_f64();
    if !report.passed() {
        return Err(format!(
            "{} violations, first {:?}",
            report.violations.len(),
            report.violations[0]
        ));
    }
    if secs >= 30.0 {
        return Err(format!("took {secs:.2} s"));
    }
    Ok(format!(
        "{} trials, 0 violations, max negative slack {:.1e}, {secs:.2} s",
        report.trials, report.max_negative_slack
    ))
}

fn transcript_identities() -> Outcome {
    use rand_chacha::rand_core::SeedableRng;
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(8);
    let mut runs = 0;
    let mut check = |t: &ChannelTranscript| -> Result<(), String> {
        runs += 1;
        within(
            "L_Q = S_e + S - S'",
            t.loss,
            t.s_env + t.s_in - t.s_out,
            1e-9,
        )?;
        within(
            "I_Q + L_Q = 2S",
            t.mutual_entanglement + t.loss,
            2.0 * t.s_in,
            1e-9,
        )
    };
    for p in grid(0.0, 0.75, 0.05) {
        for q in grid(0.0, 1.0, 0.1) {
            let prm = DepolParams::new(p, q).map_err(|e| e.to_string())?;
            check(
                &build_dilation(prm)
                    .and_then(|s| s.run())
                    .map(|r| r.transcript)
                    .map_err(|e| e.to_string())?,
            )?;
        }
    }
    for env in 1..=4 {
        for _ in 0..25 {
            let ch = DilationChannel::random(2, env, &mut rng);
            let q: f64 = rand::Rng::random(&mut rng);
            let rho = DensityMatrix::diagonal(&[q, 1.0 - q], SubsystemLayout::single(2))
                .map_err(|e| e.to_string())?;
            check(&run_channel(&ch, &rho).map_err(|e| e.to_string())?)?;
        }
    }
    Ok(format!(
        "{runs} runs here; every run_channel call enforces both at 1e-9"
    ))
}

fn superdense_consistency() -> Outcome {
    for p in [0.0, 0.1, 0.189, 0.3] {
        let r = superdense_scenario(p).map_err(|e| e.to_string())?;
        within(
            &format!("cond = chi at p={p}"),
            r.conditional_mutual,
            r.kholevo_chi,
            1e-9,
        )?;
    }
    let r = superdense_scenario(0.0).map_err(|e| e.to_string())?;
    within("value at p=0", r.conditional_mutual, 2.0, 1e-9)?;
    Ok(format!(
        "S(R:Q'|C) = chi on 4 points, {} at p=0",
        r.conditional_mutual
    ))
}

fn dephasing() -> Outcome {
    for p in grid(0.0, 1.0, 0.05) {
        let sim = dephasing_mutual_simulated(p).map_err(|e| e.to_string())?;
        within(&format!("I_Q at p={p}"), sim, dephasing_mutual(p), 1e-9)?;
    }
    let half = dephasing_mutual_simulated(0.5).map_err(|e| e.to_string())?;
    within("I_Q at p=1/2", half, 1.0, 1e-9)?;
    Ok(format!("21 points, I_Q(1/2) = {half:.12}"))
}

fn hamming() -> Outcome {
    let exact = [
        HammingQuery::new(7, 4, 1, HammingMode::Classical),
        HammingQuery::new(5, 1, 1, HammingMode::Quantum),
    ];
    for q in exact {
        let q = q.map_err(|e| e.to_string())?;
        let v = hamming_holds(&q).map_err(|e| e.to_string())?;
        if !v.holds || v.slack_log2 != 0.0 {
            return Err(format!("{q:?} not at equality: {v:?}"));
        }
    }
    for p in grid(0.0, 0.75, 0.05) {
        let r = rate_bound(p, HammingMode::Entanglement).map_err(|e| e.to_string())?;
        within(
            &format!("entanglement rate at p={p}"),
            r,
            quantum_capacity(p),
            1e-12,
        )?;
    }
    let mut problems = Vec::new();
    let mut detail = Vec::new();
    for mode in [
        HammingMode::Classical,
        HammingMode::Quantum,
        HammingMode::Entanglement,
    ] {
        let row = asymptotic_consistency(0.1, &[200], mode).map_err(|e| e.to_string())?[0];
        let rate = row
            .rate
            .ok_or_else(|| format!("{mode}: no admissible k at n=200"))?;
        detail.push(format!("{mode} {rate:.4}/{:.4}", row.limit));
        if rate > row.limit {
            problems.push(format!("{mode} rate {rate} above limit {:.6}", row.limit));
        }
        if (rate - row.limit).abs() > 0.05 {
            problems.push(format!(
                "{mode} rate {rate} farther than 0.05 from {:.6}",
                row.limit
            ));
        }
    }
    if problems.is_empty() {
        Ok(detail.join(", "))
    } else {
        Err(problems.join("; "))
    }
}

fn axioms() -> Outcome {
    let r = axiom_spot_checks(2024, 100).map_err(|e| e.to_string())?;
    if r.min_concavity_slack < -1e-9 || r.min_convexity_slack < -1e-9 {
        return Err(format!("{r:?}"));
    }
    Ok(format!(
        "100 instances, min concavity slack {:.2e}, min convexity slack {:.2e}",
        r.min_concavity_slack, r.min_convexity_slack
    ))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 12] = [
        ("closed form vs simulation", closed_form_vs_simulation),
        ("capacity endpoints", capacity_endpoints),
        ("optimizer", optimizer),
        ("superdense threshold", superdense_root),
        ("classical use", classical_use),
        ("Fano saturation", fano_saturation),
        ("inequality audit", inequality_audit),
        ("transcript identities", transcript_identities),
        ("superdense consistency", superdense_consistency),
        ("dephasing", dephasing),
        ("Hamming bounds", hamming),
        ("axiom spot-checks", axioms),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        match run() {
            Ok(detail) => println!("PASS criterion {:>2} {name}: {detail}", i + 1),
            Err(detail) => {
                failed += 1;
                println!("FAIL criterion {:>2} {name}: {detail}", i + 1);
            }
        }
    }
    println!(
        "acceptance: {} passed, {failed} failed",
        criteria.len() - failed
    );
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
