#![allow(clippy::neg_cmp_op_on_partial_ord)]

use std::io::{self, Write};
use std::process::ExitCode;
use std::str::FromStr;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::json;

use vncap::analysis::{
    asymptotic_consistency, audit_inequalities, diagonal_family, hamming_holds, maximize_capacity,
    maximize_scalar, rate_bound, HammingMode, HammingQuery, DEFAULT_Q_TOL,
};
use vncap::channel::{run_channel, Channel, KrausChannel};
use vncap::depolarizing::{
    analytic_transcript, beyond_full_depolarization, classical_capacity, classical_use_simulated,
    classical_use_transcript, dephasing_kraus, dephasing_mutual, quantum_capacity,
    superdense_scenario, superdense_threshold, ClassicalUse, DepolParams,
};
use vncap::qmat::{DensityMatrix, SubsystemLayout};

const DEFAULT_SEED: u64 = 42;

#[derive(Parser)]
#[command(
    name = "vncap",
    version,
    about = "Von Neumann capacity of noisy quantum channels"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Maximize the transferred information over the input parameter q.
    Capacity(CapacityArgs),
    /// Emit a (p, q) grid of transcript values as CSV.
    Sweep(SweepArgs),
    /// Check the channel inequalities on random channels; JSON report.
    Audit(AuditArgs),
    /// Finite-n Hamming bounds and asymptotic rates.
    Hamming(HammingArgs),
    /// Superdense coding through the depolarizing channel.
    Superdense(SuperdenseArgs),
}

#[derive(Clone, Copy, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
enum ChannelKind {
    Depolarizing,
    Dephasing,
}

#[derive(Clone, Copy, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
enum Use {
    Quantum,
    Classical,
}

#[derive(Args)]
struct CapacityArgs {
    #[arg(long, value_enum, default_value = "depolarizing")]
    channel: ChannelKind,
    /// Error probability.
    #[arg(long)]
    p: f64,
    #[arg(long = "use", value_enum, default_value = "quantum")]
    usage: Use,
    /// Width of the final bracket around the maximizing q.
    #[arg(long, default_value_t = DEFAULT_Q_TOL)]
    tol: f64,
}

/// `START:STOP:STEP`, inclusive of `STOP`.
#[derive(Clone, Copy, Debug)]
struct Range {
    start: f64,
    stop: f64,
    step: f64,
}

impl FromStr for Range {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let parts: Vec<f64> = s
            .split(':')
            .map(|x| x.trim().parse::<f64>().map_err(|e| format!("{x:?}: {e}")))
            .collect::<Result<_, _>>()?;
        match parts[..] {
            [v] => Ok(Range {
                start: v,
                stop: v,
                step: 1.0,
            }),
            [start, stop, step] => Ok(Range { start, stop, step }),
            _ => Err("expected START:STOP:STEP or a single value".into()),
        }
    }
}

impl Range {
    fn points(&self, name: &str) -> Result<Vec<f64>, String> {
        let Range { start, stop, step } = *self;
        if !(step > 0.0) || !step.is_finite() {
            return Err(format!("{name} step must be positive"));
        }
        if !(0.0..=1.0).contains(&start) || !(0.0..=1.0).contains(&stop) {
            return Err(format!("{name} range must lie within [0, 1]"));
        }
        if stop < start {
            return Err(format!("{name} range is empty"));
        }
        let n = ((stop - start) / step + 1e-9).floor() as usize + 1;
        Ok((0..n).map(|i| round12(start + i as f64 * step)).collect())
    }
}

#[derive(Args)]
struct SweepArgs {
    #[arg(long, value_enum, default_value = "depolarizing")]
    channel: ChannelKind,
    #[arg(long = "use", value_enum, default_value = "quantum")]
    usage: Use,
    /// Error probabilities as START:STOP:STEP or a single value.
    #[arg(long, default_value = "0:0.75:0.05")]
    p: Range,
    /// Input parameters as START:STOP:STEP or a single value.
    #[arg(long, default_value = "0:1:0.02")]
    q: Range,
}

#[derive(Args)]
struct AuditArgs {
    #[arg(long, env = "VN_SEED", default_value_t = DEFAULT_SEED)]
    seed: u64,
    #[arg(long, default_value_t = 200)]
    trials: usize,
    #[arg(long, default_value_t = 1e-9)]
    tol: f64,
}

#[derive(Args)]
struct HammingArgs {
    #[arg(long, default_value = "entanglement")]
    mode: HammingMode,
    /// Error rate for the asymptotic table.
    #[arg(long, default_value_t = 0.1)]
    p: f64,
    /// Block lengths for the finite-n rates.
    #[arg(long, value_delimiter = ',', default_value = "50,100,200,400,800")]
    n: Vec<u64>,
    /// Exact check of a single code `N,K,T`.
    #[arg(long, value_delimiter = ',')]
    check: Option<Vec<u64>>,
}

#[derive(Args)]
struct SuperdenseArgs {
    #[arg(
        long,
        conflicts_with = "threshold",
        required_unless_present = "threshold"
    )]
    p: Option<f64>,
    /// Error probability at which two-bit superdense transfer drops to one bit.
    #[arg(long)]
    threshold: bool,
}

enum Failure {
    Usage(String),
    Violations,
}

impl From<vncap::Error> for Failure {
    fn from(e: vncap::Error) -> Self {
        Failure::Usage(e.to_string())
    }
}

impl From<String> for Failure {
    fn from(e: String) -> Self {
        Failure::Usage(e)
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Usage(e.to_string())
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    let result = match cli.command {
        Command::Capacity(a) => capacity(a),
        Command::Sweep(a) => sweep(a),
        Command::Audit(a) => audit(a),
        Command::Hamming(a) => hamming(a),
        Command::Superdense(a) => superdense(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Violations) => ExitCode::from(1),
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}

fn print_json<T: Serialize>(value: &T) -> Result<(), Failure> {
    let mut out = io::stdout().lock();
    serde_json::to_writer_pretty(&mut out, value).map_err(|e| e.to_string())?;
    writeln!(out)?;
    Ok(())
}

/// Rounds to 12 significant digits; the shortest representation of the
/// result is what gets printed.
fn round12(x: f64) -> f64 {
    let r: f64 = format!("{x:.11e}").parse().expect("formatted float parses");
    if r == 0.0 {
        0.0
    } else {
        r
    }
}

fn check_p(p: f64) -> Result<f64, Failure> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Failure::Usage(format!("p = {p} must lie within [0, 1]")));
    }
    if beyond_full_depolarization(p) {
        eprintln!("warning: p = {p} exceeds full depolarization at 3/4");
    }
    Ok(p)
}

fn diagonal(q: f64) -> Result<DensityMatrix, vncap::Error> {
    DensityMatrix::diagonal(&[q, 1.0 - q], SubsystemLayout::single(2))
}

fn capacity(a: CapacityArgs) -> Result<(), Failure> {
    let p = check_p(a.p)?;
    if !(a.tol > 0.0) {
        return Err(Failure::Usage("tol must be positive".into()));
    }
    let (result, closed_form) = match (a.channel, a.usage) {
        (ChannelKind::Depolarizing, Use::Quantum) => (
            maximize_capacity(|q| DepolParams::new(p, q).map(analytic_transcript), a.tol)?,
            quantum_capacity(p),
        ),
        (ChannelKind::Depolarizing, Use::Classical) => (
            maximize_scalar(
                |q| DepolParams::new(p, q).map(|prm| classical_use_transcript(prm).mutual_info),
                a.tol,
            )?,
            classical_capacity(p),
        ),
        (ChannelKind::Dephasing, Use::Quantum) => {
            let ch = dephasing_kraus(p)?;
            (
                maximize_capacity(diagonal_family(&ch), a.tol)?,
                dephasing_mutual(p),
            )
        }
        (ChannelKind::Dephasing, Use::Classical) => {
            let dil = dephasing_kraus(p)?.dilation()?;
            let r = maximize_scalar(
                |q| classical_use_simulated(&dil, q).map(|c| c.mutual_info),
                a.tol,
            )?;
            (r, 1.0)
        }
    };
    print_json(&json!({
        "channel": a.channel,
        "use": a.usage,
        "p": p,
        "value": result.value,
        "argmax_q": result.argmax_q,
        "evaluations": result.evaluations,
        "closed_form": closed_form,
    }))
}

fn sweep(a: SweepArgs) -> Result<(), Failure> {
    let ps = a.p.points("p")?;
    let qs = a.q.points("q")?;
    let mut out = csv::Writer::from_writer(io::stdout().lock());
    let header: &[&str] = match a.usage {
        Use::Quantum => &["p", "q", "S", "S_prime", "S_env", "loss", "I_Q", "fidelity"],
        Use::Classical => &["p", "q", "mutual", "loss"],
    };
    out.write_record(header).map_err(|e| e.to_string())?;
    for &p in &ps {
        let dephasing = match a.channel {
            ChannelKind::Dephasing => Some(dephasing_kraus(p)?),
            ChannelKind::Depolarizing => None,
        };
        for &q in &qs {
            let values = sweep_row(p, q, a.usage, dephasing.as_ref())?;
            let record: Vec<String> = [p, q]
                .iter()
                .chain(&values)
                .map(|&x| round12(x).to_string())
                .collect();
            out.write_record(&record).map_err(|e| e.to_string())?;
        }
    }
    out.flush()?;
    Ok(())
}

fn sweep_row(
    p: f64,
    q: f64,
    usage: Use,
    dephasing: Option<&KrausChannel>,
) -> Result<Vec<f64>, Failure> {
    match usage {
        Use::Quantum => {
            let t = match dephasing {
                Some(ch) => run_channel(ch, &diagonal(q)?)?,
                None => analytic_transcript(DepolParams::new(p, q)?),
            };
            Ok(vec![
                t.s_in,
                t.s_out,
                t.s_env,
                t.loss,
                t.mutual_entanglement,
                t.fidelity,
            ])
        }
        Use::Classical => {
            let ClassicalUse {
                mutual_info,
                classical_loss,
            } = match dephasing {
                Some(ch) => classical_use_simulated(&ch.dilation()?, q)?,
                None => classical_use_transcript(DepolParams::new(p, q)?),
            };
            Ok(vec![mutual_info, classical_loss])
        }
    }
}

fn audit(a: AuditArgs) -> Result<(), Failure> {
    if a.trials == 0 {
        return Err(Failure::Usage("--trials must be at least 1".into()));
    }
    if !(a.tol >= 0.0) {
        return Err(Failure::Usage("--tol must be nonnegative".into()));
    }
    let report = audit_inequalities(a.seed, a.trials, a.tol)?;
    print_json(&report)?;
    if report.passed() {
        Ok(())
    } else {
        Err(Failure::Violations)
    }
}

fn hamming(a: HammingArgs) -> Result<(), Failure> {
    if !(a.p > 0.0 && a.p < 1.0) {
        return Err(Failure::Usage(format!("p = {} must lie in (0, 1)", a.p)));
    }
    let rows = asymptotic_consistency(a.p, &a.n, a.mode)?;
    let check = match a.check.as_deref() {
        Some(&[n, k, t]) => {
            let query = HammingQuery::new(n, k, t, a.mode)?;
            let verdict = hamming_holds(&query)?;
            Some(
                json!({ "n": n, "k": k, "t": t, "holds": verdict.holds, "slack_log2": verdict.slack_log2 }),
            )
        }
        Some(_) => return Err(Failure::Usage("--check takes N,K,T".into())),
        None => None,
    };
    print_json(&json!({
        "mode": a.mode,
        "p": a.p,
        "rate": rate_bound(a.p, a.mode)?,
        "rows": rows,
        "check": check,
    }))
}

fn superdense(a: SuperdenseArgs) -> Result<(), Failure> {
    let threshold = superdense_threshold()?;
    match a.p {
        Some(p) => {
            let p = check_p(p)?;
            let r = superdense_scenario(p)?;
            print_json(&json!({
                "p": r.p,
                "conditional_mutual": r.conditional_mutual,
                "kholevo_chi": r.kholevo_chi,
                "threshold": threshold,
            }))
        }
        None => print_json(&json!({ "threshold": threshold })),
    }
}
